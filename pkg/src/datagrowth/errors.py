"""Exception hierarchy shared by every module."""


class ModelError(Exception):
    """Base class for all datagrowth errors."""


class RangeError(ModelError, ValueError):
    def __init__(self, field, value, reason):
        self.field = field
        self.value = value
        super().__init__(f"{field}={value!r}: {reason}")


class GammaShareError(ModelError, ValueError):
    """Raised when a decentralized regime needs a positive profit share."""

    def __init__(self, gamma_share):
        self.gamma_share = gamma_share
        super().__init__(
            f"profit share 1-(1-1/gamma)(1+eta) = {gamma_share:.6g} is not positive"
        )


class DomainError(ModelError, ValueError):
    """A curve was evaluated outside the interval where it is defined."""


class NonpositiveGrowthError(ModelError):
    pass


class DegenerateDomain(ModelError):
    pass


class BracketFailure(ModelError):
    """No sign change of g1 - g2 could be located.

    ``samples`` holds the ``(d, F(d))`` pairs visited while searching.
    """

    def __init__(self, message, samples=()):
        self.samples = list(samples)
        super().__init__(message)


class VerificationFailure(ModelError):
    def __init__(self, violations):
        self.violations = dict(violations)
        detail = ", ".join(f"{k}={v:.3g}" for k, v in self.violations.items())
        super().__init__(f"identities violated: {detail}")


class MissingRegimeError(ModelError):
    pass


class StepError(ModelError, ArithmeticError):
    pass
