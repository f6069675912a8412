import json
import math
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from datagrowth.output import (
    atomic_write_text,
    companion_path,
    csv_text,
    format_cell,
    header_lines,
    read_csv,
    round4,
    svg_line_chart,
    write_csv,
    write_json,
    write_panels,
)
from datagrowth.params import BASELINE
from datagrowth.solver import DEFAULT_CONFIG

SVG = "{http://www.w3.org/2000/svg}"

cells = st.one_of(
    st.floats(allow_nan=False),
    st.integers(-(10**12), 10**12),
    st.booleans(),
    st.none(),
    st.text(alphabet="abcxyz _-", min_size=1, max_size=8).filter(
        lambda s: s not in ("True", "False", "inf", "nan", "infinity") and not s.strip(" _-").isdigit()
    ),
)


@settings(max_examples=100)
@given(rows=st.lists(st.fixed_dictionaries({"a": cells, "b": cells}), max_size=5))
def test_csv_round_trip(tmp_path_factory, rows):
    path = tmp_path_factory.mktemp("csv") / "t.csv"
    write_csv(path, ["a", "b"], rows, comments=["params eta=0.1"])
    columns, back = read_csv(path)
    assert columns == ["a", "b"]
    assert back == rows


def test_full_precision_floats():
    assert format_cell(0.1 + 0.2) == "0.30000000000000004"
    assert format_cell(None) == ""
    assert format_cell(True) == "True"


@pytest.mark.parametrize(
    "value, text",
    [(2.91595, "2.9160"), (0.0, "0.0000"), (math.inf, "inf"), (3, "3"), ("x", "x"), (None, "")],
)
def test_round4(value, text):
    assert round4(value) == text


def test_comment_lines_lead_the_file():
    text = csv_text(["x"], [{"x": 1.5}], comments=["first", "second"])
    assert text == "# first\n# second\nx\n1.5\n"


def test_header_lines():
    lines = header_lines(BASELINE, DEFAULT_CONFIG, {"regime": "planner"})
    assert lines[0].startswith("params eta=0.1 ")
    assert "theta=None" in lines[0]
    assert lines[1].startswith("solver rel_tol_d=1e-12")
    assert lines[2] == "regime planner"
    assert header_lines() == []


def test_atomic_write_replaces_and_cleans_up(tmp_path):
    target = tmp_path / "sub" / "out.txt"
    atomic_write_text(target, "one")
    atomic_write_text(target, "two")
    assert target.read_text() == "two"
    with pytest.raises(TypeError):
        atomic_write_text(target, 42)
    assert target.read_text() == "two"
    assert sorted(p.name for p in target.parent.iterdir()) == ["out.txt"]


def test_json_document(tmp_path):
    path = write_json(
        tmp_path / "r.json",
        [{"g": 1.0, "bad": math.nan, "hi": math.inf, "lo": -math.inf}],
        BASELINE,
        DEFAULT_CONFIG,
        {"command": "solve"},
    )
    doc = json.loads(path.read_text())
    assert list(doc) == ["params", "config", "command", "rows"]
    assert doc["rows"] == [{"g": 1.0, "bad": None, "hi": "inf", "lo": "-inf"}]
    assert doc["params"]["kappa"] == 0.2


@pytest.mark.parametrize(
    "name, expected",
    [("out/table2.csv", "out/table2.full.csv"), ("t", "t.full.csv"), ("a.b.csv", "a.b.full.csv")],
)
def test_companion_path(name, expected):
    assert str(companion_path(name)) == expected


def test_svg_breaks_lines_at_nan():
    text = svg_line_chart([0, 1, 2, 3, 4], {"a<b": [1, 2, math.nan, 4, 5], "c": [2, 2, 2, 2, 2]}, "t & u", "x")
    root = ET.fromstring(text)
    lines = root.findall(f"{SVG}polyline")
    assert len(lines) == 3
    assert [len(pl.get("points").split()) for pl in lines] == [2, 2, 5]
    labels = [t.text for t in root.findall(f"{SVG}text")]
    assert "t & u" in labels and "a<b" in labels


def test_svg_handles_all_nan_and_flat_x():
    root = ET.fromstring(svg_line_chart([1.0], {"s": [math.nan]}))
    assert root.findall(f"{SVG}polyline") == []


def test_panels(tmp_path):
    written = write_panels(
        tmp_path,
        "kappa",
        [0.1, 0.2],
        {"g_n": {"planner": [1.0, 2.0], "decentralized": [0.1, math.nan]}},
        comments=["sweep kappa"],
        svg=True,
    )
    assert [p.name for p in written] == ["g_n.csv", "g_n.svg"]
    columns, rows = read_csv(tmp_path / "g_n.csv")
    assert columns == ["kappa", "planner", "decentralized"]
    assert rows[0] == {"kappa": 0.1, "planner": 1.0, "decentralized": 0.1}
    assert math.isnan(rows[1]["decentralized"])
    assert (tmp_path / "g_n.csv").read_text().startswith("# sweep kappa\n")
