"""Exception types raised by bivekua."""


class ZeroDivisor(ZeroDivisionError):
    """Attempt to invert a bicomplex zero divisor (W+ = 0 or W- = 0)."""


class DegenerateDomain(ValueError):
    pass


class GridMismatch(ValueError):
    pass


class PointTooCloseToBoundary(ValueError):
    pass


class SolverDivergence(RuntimeError):
    pass


class SingularSystem(RuntimeError):
    """Direct solve found a (numerically) nontrivial kernel."""

    def __init__(self, message, smallest_singular_value=None):
        super().__init__(message)
        self.smallest_singular_value = smallest_singular_value


class SupportViolation(ValueError):
    pass


class EmptyBasis(ValueError):
    pass


class NodeNotOnGrid(KeyError):
    def __str__(self):
        z = self.args[0] if self.args else "?"
        return f"point {z} is not a grid node (use --snap or a node from dump-grid)"


class WrongCoefficients(ValueError):
    pass


class NotProper(ValueError):
    """Conductivity vanishes (or nearly) somewhere on the grid."""


class NotStarShaped(ValueError):
    pass


class NotScalar(ValueError):
    pass


class ConfigError(ValueError):
    pass


class FileError(OSError):
    pass
