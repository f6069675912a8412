"""Table, plot-data and chart writers.

Every file is written atomically (temp file in the target directory, then
``os.replace``). CSV files start with ``#`` comment lines echoing the
effective parameters and solver settings so a table can be regenerated from
its own header. Full-precision values use ``repr`` so reading a file back
yields bit-identical floats.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import asdict
from pathlib import Path
from typing import Iterable, Mapping, Sequence
from xml.sax.saxutils import escape

__all__ = [
    "atomic_write_text",
    "header_lines",
    "format_cell",
    "round4",
    "csv_text",
    "write_csv",
    "read_csv",
    "write_json",
    "companion_path",
    "svg_line_chart",
    "write_panels",
]


def atomic_write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    return path


def header_lines(params=None, cfg=None, extra: Mapping | None = None) -> list[str]:
    lines = []
    if params is not None:
        lines.append("params " + " ".join(f"{k}={v!r}" for k, v in params.as_dict().items()))
    if cfg is not None:
        lines.append("solver " + " ".join(f"{k}={v!r}" for k, v in asdict(cfg).items()))
    for k, v in (extra or {}).items():
        lines.append(f"{k} {v}")
    return lines


def format_cell(value) -> str:
    """Full-precision, locale-independent cell text."""
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def round4(value) -> str:
    if isinstance(value, float) and math.isfinite(value):
        return f"{value:.4f}"
    return format_cell(value)


def csv_text(columns: Sequence[str], rows: Iterable[Mapping], comments: Sequence[str] = (), fmt=format_cell) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def write_csv(path, columns, rows, comments=(), rounded: bool = False) -> Path:
    return atomic_write_text(path, csv_text(columns, list(rows), comments, round4 if rounded else format_cell))


def _parse_cell(text: str):
    if text == "":
        return None
    if text in ("True", "False"):
        return text == "True"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_csv(path) -> tuple[list[str], list[dict]]:
    """Read a table written by ``write_csv``; ``#`` lines are skipped."""
    with open(path, encoding="utf-8", newline="") as fh:
        body = [line for line in fh if not line.startswith("#")]
    reader = csv.reader(body)
    columns = next(reader)
    rows = [dict(zip(columns, (_parse_cell(c) for c in rec))) for rec in reader]
    return columns, rows


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None if math.isnan(value) else ("inf" if value > 0 else "-inf")
    return value


def write_json(path, rows: Sequence[Mapping], params=None, cfg=None, extra: Mapping | None = None) -> Path:
    doc = {}
    if params is not None:
        doc["params"] = params.as_dict()
    if cfg is not None:
        doc["config"] = asdict(cfg)
    doc.update(extra or {})
    doc["rows"] = [{k: _json_safe(v) for k, v in r.items()} for r in rows]
    return atomic_write_text(path, json.dumps(doc, indent=2) + "\n")


def companion_path(path: str | Path) -> Path:
    """``out/table.csv`` -> ``out/table.full.csv``."""
    path = Path(path)
    return path.with_name(f"{path.stem}.full{path.suffix or '.csv'}")


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _nice(v: float) -> str:
    return f"{v:.4g}"


def svg_line_chart(
    x: Sequence[float],
    series: Mapping[str, Sequence[float]],
    title: str = "",
    xlabel: str = "",
    width: int = 480,
    height: int = 320,
) -> str:
    """A small self-contained SVG line chart; NaN points break the line."""
    left, right, top, bottom = 60, 120, 30, 40
    pw, ph = width - left - right, height - top - bottom
    finite = [v for ys in series.values() for v in ys if math.isfinite(v)]
    xs = [float(v) for v in x]
    x0, x1 = min(xs), max(xs)
    y0, y1 = (min(finite), max(finite)) if finite else (0.0, 1.0)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5

    def sx(v):
        return left + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return top + (1.0 - (v - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>',
        f'<text x="{left + pw / 2}" y="18" text-anchor="middle" font-size="13">{escape(title)}</text>',
        f'<text x="{left + pw / 2}" y="{height - 8}" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="{left - 4}" y="{top + 4}" text-anchor="end">{_nice(y1)}</text>',
        f'<text x="{left - 4}" y="{top + ph}" text-anchor="end">{_nice(y0)}</text>',
        f'<text x="{left}" y="{top + ph + 14}" text-anchor="middle">{_nice(x0)}</text>',
        f'<text x="{left + pw}" y="{top + ph + 14}" text-anchor="middle">{_nice(x1)}</text>',
    ]
    for i, (name, ys) in enumerate(series.items()):
        colour = _PALETTE[i % len(_PALETTE)]
        segments, current = [], []
        for xv, yv in zip(xs, ys):
            if math.isfinite(yv):
                current.append(f"{sx(xv):.2f},{sy(yv):.2f}")
            elif current:
                segments.append(current)
                current = []
        if current:
            segments.append(current)
        for seg in segments:
            out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{" ".join(seg)}"/>')
        ly = top + 12 + 16 * i
        out.append(f'<line x1="{left + pw + 8}" y1="{ly}" x2="{left + pw + 24}" y2="{ly}" stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 28}" y="{ly + 4}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_panels(
    out_dir: str | Path,
    x_name: str,
    x: Sequence[float],
    panels: Mapping[str, Mapping[str, Sequence[float]]],
    comments: Sequence[str] = (),
    svg: bool = False,
) -> list[Path]:
    """One CSV per panel (x column plus one column per series), optionally an SVG each."""
    out_dir = Path(out_dir)
    written = []
    for panel, series in panels.items():
        cols = [x_name, *series]
        rows = [{x_name: float(xv), **{k: float(v[i]) for k, v in series.items()}} for i, xv in enumerate(x)]
        written.append(write_csv(out_dir / f"{panel}.csv", cols, rows, comments))
        if svg:
            chart = svg_line_chart(x, series, title=panel, xlabel=x_name)
            written.append(atomic_write_text(out_dir / f"{panel}.svg", chart))
    return written
