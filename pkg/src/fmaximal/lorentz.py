"""Linear algebra in Lorentz-Minkowski space R^{n+1}_1.

Vectors are plain numpy arrays whose last axis has length n + 1: the first
n entries are spatial, the last one is temporal.  The scalar product has
signature (+, ..., +, -).  Every function broadcasts over leading axes.
"""
from __future__ import annotations

import enum

import numpy as np

from .errors import CausalityError, DimensionError

#: relative threshold below which a self-product counts as null
CLASS_EPS = 1e-12
#: arccosh arguments in [1 - ACOSH_CLAMP, 1) are snapped to 1
ACOSH_CLAMP = 1e-10


class CausalClass(enum.Enum):
    SPACELIKE = "spacelike"
    LIGHTLIKE = "lightlike"
    TIMELIKE = "timelike"
    ZERO = "zero"


def as_vector(x, dim: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a float array of spacetime vectors.

    ``dim`` is the spatial dimension n; when given, the last axis must have
    n + 1 entries.
    """
    v = np.asarray(x, dtype=float)
    if v.ndim == 0 or v.shape[-1] < 2:
        raise DimensionError(f"spacetime vectors need at least 2 components, got shape {v.shape}")
    if dim is not None and v.shape[-1] != dim + 1:
        raise DimensionError(f"expected {dim + 1} components, got {v.shape[-1]}")
    if not np.all(np.isfinite(v)):
        raise ValueError("spacetime vector has non-finite components")
    return v


def time_unit(dim: int) -> np.ndarray:
    """The timelike coordinate vector e_{n+1}."""
    e = np.zeros(dim + 1)
    e[-1] = 1.0
    return e


def lorentz_inner(x, y) -> np.ndarray | float:
    """Sum of spatial products minus the product of temporal components."""
    x = as_vector(x)
    y = as_vector(y)
    if x.shape[-1] != y.shape[-1]:
        raise DimensionError(f"dimension mismatch: {x.shape[-1]} vs {y.shape[-1]}")
    out = np.einsum("...i,...i->...", x[..., :-1], y[..., :-1]) - x[..., -1] * y[..., -1]
    return out if np.ndim(out) else float(out)


def _class_eps(x: np.ndarray) -> np.ndarray:
    return CLASS_EPS * np.maximum(1.0, np.einsum("...i,...i->...", x, x))


def causal_classify(x) -> CausalClass:
    """Causal character of a single vector.

    Nearly-null vectors are decided with a tolerance scaled by the Euclidean
    norm so the outcome is reproducible under rounding.
    """
    x = as_vector(x)
    if x.ndim != 1:
        raise DimensionError("causal_classify takes a single vector")
    if not np.any(x):
        return CausalClass.ZERO
    q = lorentz_inner(x, x)
    eps = float(_class_eps(x))
    if q > eps:
        return CausalClass.SPACELIKE
    if q < -eps:
        return CausalClass.TIMELIKE
    return CausalClass.LIGHTLIKE


def is_timelike(x) -> np.ndarray | bool:
    x = as_vector(x)
    out = lorentz_inner(x, x) < -_class_eps(x)
    return out if np.ndim(out) else bool(out)


def lorentz_norm(x) -> np.ndarray | float:
    """sqrt(|<x, x>|)."""
    q = lorentz_inner(x, x)
    return np.sqrt(np.abs(q)) if np.ndim(q) else float(np.sqrt(abs(q)))


def _require_timelike(*vs: np.ndarray) -> None:
    for v in vs:
        if not np.all(is_timelike(v)):
            raise CausalityError("operation requires timelike vectors")


def same_timelike_cone(x, y) -> np.ndarray | bool:
    """True where the timelike vectors x and y have negative scalar product."""
    x = as_vector(x)
    y = as_vector(y)
    _require_timelike(x, y)
    out = np.asarray(lorentz_inner(x, y)) < 0
    return out if out.ndim else bool(out)


def is_future_directed(x) -> np.ndarray | bool:
    x = as_vector(x)
    return same_timelike_cone(x, time_unit(x.shape[-1] - 1))


def safe_arccosh(z):
    """arccosh that tolerates rounding just below 1 and rejects anything else."""
    z = np.asarray(z, dtype=float)
    if np.any(z < 1.0 - ACOSH_CLAMP):
        raise CausalityError(f"arccosh argument {z.min()!r} is below 1 beyond rounding")
    out = np.arccosh(np.maximum(z, 1.0))
    return out if out.ndim else float(out)


def hyperbolic_angle(x, y) -> np.ndarray | float:
    """The phi >= 0 with <x, y> = -|x||y| cosh(phi) for co-oriented timelike x, y."""
    x = as_vector(x)
    y = as_vector(y)
    if not np.all(same_timelike_cone(x, y)):
        raise CausalityError("vectors lie in opposite timelike cones")
    cosh = -np.asarray(lorentz_inner(x, y)) / (
        np.asarray(lorentz_norm(x)) * np.asarray(lorentz_norm(y))
    )
    return safe_arccosh(cosh)


def volume_form(*vectors) -> np.ndarray | float:
    """Determinant of the matrix whose columns are the n + 1 given vectors.

    Oriented so that the standard basis (e_1, ..., e_{n+1}) gives +1.  Each
    argument may carry leading batch axes.
    """
    vs = [as_vector(v) for v in vectors]
    k = vs[0].shape[-1]
    if len(vs) != k or any(v.shape[-1] != k for v in vs):
        raise DimensionError(f"volume form needs {k} vectors of length {k}")
    mat = np.stack(np.broadcast_arrays(*vs), axis=-1)
    out = np.linalg.det(mat)
    return out if np.ndim(out) else float(out)


def lorentz_gram_schmidt(vectors: np.ndarray) -> np.ndarray:
    """Orthonormalise rows spanning a spacelike subspace.

    ``vectors`` has shape (..., k, n+1); the result has the same shape with
    rows mutually Lorentz-orthogonal and of unit spacelike length.
    """
    v = np.array(vectors, dtype=float, copy=True)
    k = v.shape[-2]
    for i in range(k):
        for j in range(i):
            proj = lorentz_inner(v[..., i, :], v[..., j, :])
            v[..., i, :] -= np.asarray(proj)[..., None] * v[..., j, :]
        q = np.asarray(lorentz_inner(v[..., i, :], v[..., i, :]))
        if np.any(q <= 0):
            raise CausalityError("vectors do not span a spacelike subspace")
        v[..., i, :] /= np.sqrt(q)[..., None]
    return v
