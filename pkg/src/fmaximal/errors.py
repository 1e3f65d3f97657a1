"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Array shapes do not match the declared dimension."""


class CausalityError(ValueError):
    """A vector has the wrong causal character for the requested operation."""


class NotSpacelikeError(ValueError):
    """A graph was queried at a point where |grad u| is not safely below 1."""


class FrameError(ValueError):
    """A frame is not Lorentz-orthonormal and spacelike."""


class DeskScaleLimitError(ValueError):
    """Requested dimension exceeds what the tensor rules support (n <= 4)."""


class OracleMismatchError(RuntimeError):
    """Closed-form and finite-difference evaluations disagree."""


class CertificateError(ValueError):
    """No bounded-gradient certificate can be issued for the graph."""


class NotFMaximalError(ValueError):
    """The f-maximal residual exceeds tolerance where it is required to vanish."""


class ChainViolation(RuntimeError):
    """A step of the volume comparison chain failed beyond tolerance."""


class GeometryError(ValueError):
    """The cylinder experiment geometry is degenerate."""


class SingularPointError(ValueError):
    """A field was evaluated at a point outside its domain of definition."""
