"""Exception hierarchy shared across the package."""


class OpCalcError(Exception):
    """Base class; ``name`` is the structured error name reported by the CLI."""

    @property
    def name(self):
        return type(self).__name__


class TruncationMismatch(OpCalcError):
    pass


class NotInvertible(OpCalcError):
    pass


class DenominatorVanishesAtZero(OpCalcError):
    pass


class NoFactorization(OpCalcError):
    pass


class UnnamedInverse(OpCalcError):
    pass


class LimitDidNotConverge(OpCalcError):
    pass


class StepUnderflow(OpCalcError):
    pass


class IncompatibleRHS(OpCalcError):
    pass


class InvalidProblem(OpCalcError):
    pass
