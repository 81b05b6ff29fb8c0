"""Exception types shared across the package.

The CLI maps these onto process exit codes: input and validation problems
exit with 2, a verified inequality failure exits with 1, and iteration
that fails to converge exits with 3.
"""


class LatticeTfError(Exception):
    """Base class for all errors raised by this package."""


class InputError(LatticeTfError):
    """Malformed user input: files, configuration, or argument values."""


class GridResolutionError(LatticeTfError):
    """A torus grid is too coarse for the requested exact computation."""


class ZeroWindowError(LatticeTfError):
    """An operation received a window that is identically zero."""


class NearOrthogonalWindowError(LatticeTfError):
    """Inversion attempted with <gamma, g> too close to zero to be stable."""


class TilePlacementError(LatticeTfError):
    """A tile refers to a lattice point outside the truncation box."""


class ProductFormError(LatticeTfError):
    """A tile set that must factor as Z x T does not."""


class OrthonormalityError(LatticeTfError):
    """A family of signals fails the orthonormality precondition."""


class ConvergenceError(LatticeTfError):
    """Power iteration hit its iteration cap before meeting tolerance.

    Carries the last state so callers can inspect how far it got.
    """

    def __init__(self, message, *, eigenvalue=None, residual=None,
                 iterations=None, field=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue
        self.residual = residual
        self.iterations = iterations
        self.field = field
