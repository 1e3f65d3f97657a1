"""Scalar fields u: R^n -> R with value, gradient and Hessian access.

Subclasses override ``gradient``/``hessian`` with closed forms when they
have them; anything left alone falls back to central differences of
``value``.  All methods take points of shape (..., n).
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import DimensionError

_EPS = np.finfo(float).eps
#: gradient step scale, (machine eps)^(1/3)
FD_GRAD_SCALE = _EPS ** (1 / 3)
#: Hessian step scale, (machine eps)^(1/4)
FD_HESS_SCALE = _EPS ** (1 / 4)


def fd_steps(x: np.ndarray, scale: float) -> np.ndarray:
    """Per-point step ``scale * max(1, |x|)``, shape (...,)."""
    return scale * np.maximum(1.0, np.linalg.norm(x, axis=-1))


class ScalarField:
    """Base class; subclasses must implement ``value``."""

    dim: int
    name: str = "field"

    def __init__(self, dim: int, name: str | None = None):
        if int(dim) != dim or dim < 1:
            raise DimensionError(f"dimension must be a positive integer, got {dim!r}")
        self.dim = int(dim)
        if name is not None:
            self.name = name

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, name={self.name!r})"

    def points(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim == 0 and self.dim == 1:
            x = x.reshape(1)
        if x.shape[-1] != self.dim:
            raise DimensionError(f"expected points with {self.dim} coordinates, got shape {x.shape}")
        return x

    # -- accessors -------------------------------------------------------
    def value(self, x):
        raise NotImplementedError

    def gradient(self, x) -> np.ndarray:
        return self.fd_gradient(x)

    def hessian(self, x) -> np.ndarray:
        if self.has_closed_gradient:
            return self._jacobian_of_gradient(self.points(x))
        return self.fd_hessian(x)

    def spacelike_defect(self, x):
        """1 - |grad u|^2.  Subclasses override with cancellation-free forms."""
        g = self.gradient(x)
        return 1.0 - np.einsum("...i,...i->...", g, g)

    @property
    def has_closed_gradient(self) -> bool:
        return type(self).gradient is not ScalarField.gradient

    @property
    def has_closed_hessian(self) -> bool:
        return type(self).hessian is not ScalarField.hessian

    @property
    def mode(self) -> str:
        if self.has_closed_gradient and self.has_closed_hessian:
            return "closed-form"
        return "finite-difference"

    # -- finite differences ----------------------------------------------
    def fd_gradient(self, x) -> np.ndarray:
        x = self.points(x)
        h = fd_steps(x, FD_GRAD_SCALE)
        out = np.empty(x.shape)
        for i in range(self.dim):
            xp = x.copy()
            xm = x.copy()
            xp[..., i] += h
            xm[..., i] -= h
            out[..., i] = (np.asarray(self.value(xp)) - np.asarray(self.value(xm))) / (2 * h)
        return out

    def fd_hessian(self, x) -> np.ndarray:
        x = self.points(x)
        h = fd_steps(x, FD_HESS_SCALE)
        n = self.dim
        f0 = np.asarray(self.value(x))
        out = np.empty(x.shape + (n,))

        def shifted(*moves):
            y = x.copy()
            for i, s in moves:
                y[..., i] += s * h
            return np.asarray(self.value(y))

        for i in range(n):
            out[..., i, i] = (shifted((i, 1)) - 2 * f0 + shifted((i, -1))) / h**2
            for j in range(i):
                mixed = (
                    shifted((i, 1), (j, 1))
                    - shifted((i, 1), (j, -1))
                    - shifted((i, -1), (j, 1))
                    + shifted((i, -1), (j, -1))
                ) / (4 * h**2)
                out[..., i, j] = mixed
                out[..., j, i] = mixed
        return out

    def _jacobian_of_gradient(self, x: np.ndarray) -> np.ndarray:
        h = fd_steps(x, FD_GRAD_SCALE)
        jac = np.empty(x.shape + (self.dim,))
        for j in range(self.dim):
            xp = x.copy()
            xm = x.copy()
            xp[..., j] += h
            xm[..., j] -= h
            jac[..., :, j] = (self.gradient(xp) - self.gradient(xm)) / (2 * h)[..., None]
        return 0.5 * (jac + np.swapaxes(jac, -1, -2))

    # -- derived fields --------------------------------------------------
    def shifted(self, dt: float) -> "ScalarField":
        """The field u + dt; derivatives are shared with ``self``."""
        return ShiftedField(self, dt)

    def finite_difference(self) -> "ScalarField":
        """A copy of this field that differentiates ``value`` numerically."""
        return FunctionField(self.dim, self.value, name=f"{self.name} [fd]")


class FunctionField(ScalarField):
    """A field assembled from plain callables.

    Only ``value`` is required; omitted derivatives are approximated by
    central differences.
    """

    def __init__(
        self,
        dim: int,
        value: Callable,
        gradient: Callable | None = None,
        hessian: Callable | None = None,
        defect: Callable | None = None,
        name: str = "function",
    ):
        super().__init__(dim, name)
        self._value = value
        self._gradient = gradient
        self._hessian = hessian
        self._defect = defect

    def value(self, x):
        return self._value(self.points(x))

    def gradient(self, x):
        if self._gradient is None:
            return self.fd_gradient(x)
        return np.asarray(self._gradient(self.points(x)), dtype=float)

    def hessian(self, x):
        x = self.points(x)
        if self._hessian is not None:
            return np.asarray(self._hessian(x), dtype=float)
        if self._gradient is not None:
            return self._jacobian_of_gradient(x)
        return self.fd_hessian(x)

    def spacelike_defect(self, x):
        if self._defect is None:
            return super().spacelike_defect(x)
        return self._defect(self.points(x))

    @property
    def has_closed_gradient(self) -> bool:
        return self._gradient is not None

    @property
    def has_closed_hessian(self) -> bool:
        return self._hessian is not None


class ShiftedField(ScalarField):
    def __init__(self, base: ScalarField, dt: float):
        super().__init__(base.dim, f"{base.name} {dt:+g}")
        self.base = base
        self.dt = float(dt)

    def value(self, x):
        return self.base.value(x) + self.dt

    def gradient(self, x):
        return self.base.gradient(x)

    def hessian(self, x):
        return self.base.hessian(x)

    def spacelike_defect(self, x):
        return self.base.spacelike_defect(x)

    @property
    def has_closed_gradient(self):
        return self.base.has_closed_gradient

    @property
    def has_closed_hessian(self):
        return self.base.has_closed_hessian
