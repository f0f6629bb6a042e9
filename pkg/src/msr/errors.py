"""Exception hierarchy shared by the engine and the scenario language."""


class MsrError(Exception):
    """Base class for every error raised by the engine."""


class ChartMismatchError(MsrError, ValueError):
    def __init__(self, msg="incompatible charts"):
        super().__init__(msg)


class UnknownVariableError(MsrError, KeyError):
    def __str__(self):
        return self.args[0] if self.args else "unknown variable"


class DegreeError(MsrError, ValueError):
    pass


class UnsupportedError(MsrError, ValueError):
    pass


class PlecticError(MsrError, ValueError):
    pass


class DegenerateError(PlecticError):
    pass


class NotHamiltonianError(PlecticError):
    pass


class NonPolynomialSolutionError(PlecticError):
    pass


class ActionError(MsrError, ValueError):
    pass


class NotAPotentialError(ActionError):
    pass


class NotInvariantError(ActionError):
    def __init__(self, msg, index=None, residual=None):
        super().__init__(msg)
        self.index = index
        self.residual = residual


class NotProjectableError(ActionError):
    pass


class NoInvariantLiftError(ActionError):
    pass


class ReductionError(MsrError, ValueError):
    pass
