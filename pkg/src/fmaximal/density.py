"""The Gaussian-Euclidean density on G^n x R_1."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError


@dataclass(frozen=True)
class GaussianDensity:
    """Density e^{-f} with f(x, t) = |x|^2/2 - c and c = -(n/2) log(2 pi).

    ``c`` is computed once at construction; every consumer reads the stored
    value so that all modules use the same normalisation bit for bit.
    """

    dim: int
    c: float = field(init=False)

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise DimensionError(f"dimension must be a positive integer, got {self.dim!r}")
        object.__setattr__(self, "c", -(self.dim / 2) * math.log(2 * math.pi))

    def _points(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim == 0 or x.shape[-1] != self.dim:
            raise DimensionError(f"expected points with {self.dim} coordinates, got shape {x.shape}")
        return x

    def f_value(self, x, t=0.0):
        """|x|^2/2 - c.  The time coordinate is accepted and ignored."""
        x = self._points(x)
        out = 0.5 * np.einsum("...i,...i->...", x, x) - self.c
        return out if out.ndim else float(out)

    def weight(self, x):
        """e^{-f} = e^{c - |x|^2/2}; integrates to 1 over R^n."""
        x = self._points(x)
        out = np.exp(self.c - 0.5 * np.einsum("...i,...i->...", x, x))
        return out if out.ndim else float(out)

    def f_gradient(self, x) -> np.ndarray:
        """Spacetime gradient (x, 0)."""
        x = self._points(x)
        return np.concatenate([x, np.zeros(x.shape[:-1] + (1,))], axis=-1)

    def wall_weight(self, R: float) -> float:
        """The constant value of e^{-f} on the cylinder |x| = R."""
        return math.exp(self.c - 0.5 * R * R)
