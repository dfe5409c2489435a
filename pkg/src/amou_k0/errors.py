"""Exception hierarchy shared by every module of the package."""


class AmouError(ValueError):
    pass


class NotHermitian(AmouError):
    pass


class NoConvergence(AmouError, ArithmeticError):
    pass


class NotPositive(AmouError):
    pass


class ShapeMismatch(AmouError):
    pass


class ZeroElement(AmouError):
    pass


class LevelTooSmall(AmouError):
    pass


class NotProjection(AmouError):
    pass


class PreconditionFailed(AmouError):
    pass


class AlgebraMismatch(AmouError):
    pass


class NotOrthogonal(AmouError):
    pass


class NotProjectionPreserving(AmouError):
    pass


class ParseError(AmouError):
    pass


class UnknownName(AmouError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class UnknownSuite(AmouError):
    pass
