"""Exception hierarchy.

Two families: ``QLiftError`` for numerical/structural failures and
``HypothesisViolated`` for inputs that break a standing hypothesis of a
construction (the CLI maps the latter to exit status 2).
"""


class QLiftError(Exception):
    pass


class DimensionMismatch(QLiftError, ValueError):
    pass


class NotHermitian(QLiftError, ValueError):
    pass


class NotPSD(QLiftError, ValueError):
    pass


class LevelOutOfRange(QLiftError, ValueError):
    pass


class HypothesisViolated(QLiftError, ValueError):
    """An input fails a hypothesis the construction relies on.

    ``hypothesis`` names the violated condition in plain notation so that
    diagnostics can quote it.
    """

    def __init__(self, message: str, hypothesis: str | None = None):
        super().__init__(message)
        self.hypothesis = hypothesis


class NotContraction(HypothesisViolated):
    pass


class NotStrictContraction(HypothesisViolated):
    pass


class QOutOfRange(HypothesisViolated):
    pass


class QNotUnimodular(HypothesisViolated):
    pass


class NotQCommuting(HypothesisViolated):
    pass


class OrderViolated(HypothesisViolated):
    pass


class Incompatible(HypothesisViolated):
    pass


class NotCompletable(HypothesisViolated):
    pass


class RangeViolation(HypothesisViolated):
    pass


class NotCoisometric(HypothesisViolated):
    pass


class IllConditionedDefect(QLiftError):
    pass
