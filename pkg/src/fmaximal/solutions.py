"""Explicit graphs: slices, the translation-invariant and radial f-maximal
families, and the hyperboloid comparison graphs H_r^+.

Reducing the f-maximal equation by symmetry gives, with v = u'/sqrt(1-u'^2),

* translation invariance in x_2..x_n:  v' = x_1 v   ->  v = v0 exp(x_1^2/2)
* radial symmetry:  v' + (n-1) v / rho = rho v     ->  v = C rho^(1-n) exp(rho^2/2)

and u' = v / sqrt(1 + v^2).  v0 = 1 is the non-planar entire example.
Everything below is written through log|v| and ``expit`` so that nothing
overflows for large arguments.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import expit

from .errors import SingularPointError
from .fields import ScalarField
from .graph import SpacelikeGraph
from .report import ExperimentReport

#: absolute tolerance of the one-dimensional integrals defining u
U_QUAD_TOL = 1e-12


def _integrate_odd(deriv, a: float) -> float:
    """int_0^a deriv, assuming deriv is even so the result is odd in a."""
    if a == 0.0:
        return 0.0
    val, _ = integrate.quad(deriv, 0.0, abs(a), epsabs=U_QUAD_TOL, epsrel=U_QUAD_TOL, limit=200)
    return val if a > 0 else -val


# -- the explicit example ------------------------------------------------------

def example_integrand(tau):
    """sqrt(e^{tau^2} / (1 + e^{tau^2})) written as 1/sqrt(1 + e^{-tau^2})."""
    tau = np.asarray(tau, dtype=float)
    return 1.0 / np.sqrt(1.0 + np.exp(-tau * tau))


@lru_cache(maxsize=4096)
def _example_u_cached(x1: float) -> float:
    return _integrate_odd(lambda s: float(example_integrand(s)), x1)


def example_u(x1: float) -> float:
    """u(x) = int_0^{x_1} sqrt(e^{tau^2}/(1+e^{tau^2})) dtau."""
    return _example_u_cached(float(x1))


# -- fields ----------------------------------------------------------------------

class SliceField(ScalarField):
    """u = t0."""

    def __init__(self, dim: int, t0: float = 0.0):
        super().__init__(dim, f"slice t={t0:g}")
        self.t0 = float(t0)

    def value(self, x):
        x = self.points(x)
        return np.full(x.shape[:-1], self.t0) if x.ndim > 1 else self.t0

    def gradient(self, x):
        return np.zeros(self.points(x).shape)

    def hessian(self, x):
        x = self.points(x)
        return np.zeros(x.shape + (self.dim,))

    def spacelike_defect(self, x):
        return np.ones(self.points(x).shape[:-1])


class TranslationField(ScalarField):
    """Member of the family depending on x_1 only, u'(x_1) = v/sqrt(1+v^2)."""

    def __init__(self, v0: float, dim: int):
        super().__init__(dim, f"translation v0={v0:g}")
        self.v0 = float(v0)
        self._u = lru_cache(maxsize=8192)(self._u_uncached)

    def _log_v(self, x1):
        return math.log(abs(self.v0)) + 0.5 * x1 * x1

    def uprime(self, x1):
        x1 = np.asarray(x1, dtype=float)
        if self.v0 == 0.0:
            return np.zeros_like(x1)
        return math.copysign(1.0, self.v0) * np.sqrt(expit(2 * self._log_v(x1)))

    def usecond(self, x1):
        x1 = np.asarray(x1, dtype=float)
        if self.v0 == 0.0:
            return np.zeros_like(x1)
        lv2 = 2 * self._log_v(x1)
        return math.copysign(1.0, self.v0) * x1 * expit(-lv2) * np.sqrt(expit(lv2))

    def defect1(self, x1):
        """1 - u'^2 = 1/(1 + v^2)."""
        x1 = np.asarray(x1, dtype=float)
        if self.v0 == 0.0:
            return np.ones_like(x1)
        return expit(-2 * self._log_v(x1))

    def v(self, x1):
        """u'/sqrt(1-u'^2) = v0 exp(x_1^2/2)."""
        return self.v0 * np.exp(0.5 * np.asarray(x1, dtype=float) ** 2)

    def _u_uncached(self, x1: float) -> float:
        if self.v0 == 0.0:
            return 0.0
        return _integrate_odd(lambda s: float(self.uprime(s)), x1)

    def u1(self, x1) -> np.ndarray:
        x1 = np.asarray(x1, dtype=float)
        flat = np.array([self._u(float(a)) for a in x1.ravel()])
        return flat.reshape(x1.shape)

    def value(self, x):
        x = self.points(x)
        out = self.u1(x[..., 0])
        return out if out.ndim else float(out)

    def gradient(self, x):
        x = self.points(x)
        g = np.zeros(x.shape)
        g[..., 0] = self.uprime(x[..., 0])
        return g

    def hessian(self, x):
        x = self.points(x)
        h = np.zeros(x.shape + (self.dim,))
        h[..., 0, 0] = self.usecond(x[..., 0])
        return h

    def spacelike_defect(self, x):
        return self.defect1(self.points(x)[..., 0])


class RadialField(ScalarField):
    """Radial member on R^n minus the origin, v = C rho^(1-n) exp(rho^2/2)."""

    def __init__(self, C: float, dim: int):
        if dim < 2:
            raise ValueError("the radial family needs n >= 2")
        super().__init__(dim, f"radial C={C:g}")
        self.C = float(C)
        self._u = lru_cache(maxsize=8192)(self._u_uncached)

    def _log_v(self, rho):
        return math.log(abs(self.C)) + (1 - self.dim) * np.log(rho) + 0.5 * rho * rho

    def _check_rho(self, rho):
        if self.C != 0.0 and np.any(rho == 0.0):
            raise SingularPointError("radial member with C != 0 is singular at the origin")

    def uprime(self, rho):
        rho = np.asarray(rho, dtype=float)
        if self.C == 0.0:
            return np.zeros_like(rho)
        self._check_rho(rho)
        return math.copysign(1.0, self.C) * np.sqrt(expit(2 * self._log_v(rho)))

    def usecond(self, rho):
        rho = np.asarray(rho, dtype=float)
        if self.C == 0.0:
            return np.zeros_like(rho)
        self._check_rho(rho)
        lv2 = 2 * self._log_v(rho)
        slope = rho - (self.dim - 1) / rho
        return math.copysign(1.0, self.C) * slope * expit(-lv2) * np.sqrt(expit(lv2))

    def defect_rho(self, rho):
        rho = np.asarray(rho, dtype=float)
        if self.C == 0.0:
            return np.ones_like(rho)
        self._check_rho(rho)
        return expit(-2 * self._log_v(rho))

    def _u_uncached(self, rho: float) -> float:
        if self.C == 0.0 or rho == 0.0:
            return 0.0
        val, _ = integrate.quad(
            lambda s: float(self.uprime(s)) if s > 0 else math.copysign(1.0, self.C),
            0.0, rho, epsabs=U_QUAD_TOL, epsrel=U_QUAD_TOL, limit=200,
        )
        return val

    def value(self, x):
        x = self.points(x)
        rho = np.linalg.norm(x, axis=-1)
        out = np.array([self._u(float(p)) for p in np.ravel(rho)]).reshape(rho.shape)
        return out if out.ndim else float(out)

    def gradient(self, x):
        x = self.points(x)
        rho = np.linalg.norm(x, axis=-1)
        self._check_rho(rho)
        with np.errstate(invalid="ignore", divide="ignore"):
            unit = np.where(rho[..., None] > 0, x / rho[..., None], 0.0)
        return self.uprime(rho)[..., None] * unit

    def hessian(self, x):
        x = self.points(x)
        rho = np.linalg.norm(x, axis=-1)
        self._check_rho(rho)
        if self.C == 0.0:
            return np.zeros(x.shape + (self.dim,))
        unit = x / rho[..., None]
        outer = unit[..., :, None] * unit[..., None, :]
        eye = np.eye(self.dim)
        return (self.usecond(rho)[..., None, None] * outer
                + (self.uprime(rho) / rho)[..., None, None] * (eye - outer))

    def spacelike_defect(self, x):
        return self.defect_rho(np.linalg.norm(self.points(x), axis=-1))


class HyperbolicField(ScalarField):
    """g(x) = sqrt(|x|^2 + r^2), whose graph is the hyperboloid H_r^+."""

    def __init__(self, r: float, dim: int):
        if not r > 0:
            raise ValueError(f"hyperboloid parameter must be positive, got {r!r}")
        super().__init__(dim, f"hyperboloid r={r:g}")
        self.r = float(r)

    def _g(self, x):
        return np.sqrt(np.einsum("...i,...i->...", x, x) + self.r**2)

    def value(self, x):
        out = self._g(self.points(x))
        return out if out.ndim else float(out)

    def gradient(self, x):
        x = self.points(x)
        return x / self._g(x)[..., None]

    def hessian(self, x):
        x = self.points(x)
        g = self._g(x)[..., None, None]
        return np.eye(self.dim) / g - x[..., :, None] * x[..., None, :] / g**3

    def spacelike_defect(self, x):
        x = self.points(x)
        return self.r**2 / (np.einsum("...i,...i->...", x, x) + self.r**2)


# -- constructors ------------------------------------------------------------------

def slice_graph(n: int, t0: float = 0.0) -> SpacelikeGraph:
    return SpacelikeGraph(SliceField(n, t0))


def translation_member(v0: float, n: int) -> SpacelikeGraph:
    return SpacelikeGraph(TranslationField(v0, n))


def example_graph(n: int) -> SpacelikeGraph:
    """The non-planar entire f-maximal example (v0 = 1)."""
    return translation_member(1.0, n)


def radial_member(C: float, n: int) -> SpacelikeGraph:
    return SpacelikeGraph(RadialField(C, n))


def hyperbolic_graph(r: float, n: int) -> SpacelikeGraph:
    return SpacelikeGraph(HyperbolicField(r, n))


# -- Bernstein witness ---------------------------------------------------------------

def bernstein_family_scan(
    v0_grid,
    delta: float,
    n: int = 1,
    half_width: float = 6.0,
    points: int = 1201,
) -> ExperimentReport:
    """Sample sup |u'| for each translation member and flag bounded gradients.

    A member is certified when sup |u'| <= 1 - delta on the grid.  Inside
    this family rigidity predicts that exactly the v0 = 0 members are
    certified; ``report.ok`` records whether that holds.  This is a
    numerical witness for the translation family only.
    """
    v0_grid = [float(v) for v in v0_grid]
    if not v0_grid:
        raise ValueError("empty v0 grid")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
    xs = np.linspace(-half_width, half_width, points)
    report = ExperimentReport(
        name="bernstein_family_scan",
        columns=["v0", "sup_abs_uprime", "one_minus_sup", "certified", "constant"],
        meta={"delta": delta, "x1_range": [-half_width, half_width], "points": points,
              "scope": "translation-invariant family only"},
    )
    for v0 in v0_grid:
        sup = float(np.max(np.abs(TranslationField(v0, n).uprime(xs))))
        certified = sup <= 1.0 - delta
        report.add(v0=v0, sup_abs_uprime=sup, one_minus_sup=1.0 - sup,
                   certified=certified, constant=(v0 == 0.0))
        if certified != (v0 == 0.0):
            report.fail(f"v0={v0:g}: certified={certified} contradicts the rigidity prediction")
    return report
