"""Weighted volumes over G^n.

Three rule families:

``hermite-tensor``
    probabilists' Gauss-Hermite rule (weight exp(-x^2/2)) tensored over n
    axes, weights normalised to sum to 1, so that a plain weighted sum is
    an integral against the Gaussian density e^{c - |x|^2/2}.
``truncated-ball``
    Gauss-Legendre in the radius on [0, R] times a spherical rule; weights
    integrate Lebesgue measure on B_R and the density is applied explicitly.
``sphere-surface``
    the spherical rule scaled to S^{n-1}_R, integrating surface measure.

Error estimates compare a rule against the same rule at half the order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from numpy.polynomial.legendre import leggauss
from scipy.special import gammaln, roots_jacobi

from .density import GaussianDensity
from .errors import DeskScaleLimitError, DimensionError, NotSpacelikeError
from .graph import SpacelikeGraph

KINDS = ("hermite-tensor", "truncated-ball", "sphere-surface")
DEFAULT_ORDER = {1: 80, 2: 80, 3: 40, 4: 24}
DEFAULT_RADIAL_ORDER = 80
#: Gaussian weight at 9 sigma is below 1e-17
DEFAULT_TRUNCATION = 9.0
MAX_DIM = 4


def default_order(n: int) -> int:
    _check_dim(n)
    return DEFAULT_ORDER[n]


def _check_dim(n: int) -> None:
    if int(n) != n or n < 1:
        raise DimensionError(f"dimension must be a positive integer, got {n!r}")
    if n > MAX_DIM:
        raise DeskScaleLimitError(f"n = {n} is beyond the desk-scale limit n <= {MAX_DIM}")


@dataclass(frozen=True)
class QuadratureScheme:
    kind: str
    dim: int
    order: int
    radius: float | None = None
    radial_order: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        _check_dim(self.dim)
        if self.order < 1:
            raise ValueError("order must be positive")
        if self.kind != "hermite-tensor" and not (self.radius and self.radius > 0):
            raise ValueError(f"{self.kind} needs a positive radius")

    def nodes_weights(self) -> tuple[np.ndarray, np.ndarray]:
        return _nodes_weights(self)

    def halved(self) -> "QuadratureScheme":
        radial = None if self.radial_order is None else max(1, self.radial_order // 2)
        if self.kind == "truncated-ball" and radial is None:
            radial = DEFAULT_RADIAL_ORDER // 2
        return replace(self, order=max(1, self.order // 2), radial_order=radial)

    def describe(self) -> str:
        parts = [self.kind, f"n={self.dim}", f"order={self.order}"]
        if self.radius is not None:
            parts.append(f"R={self.radius:g}")
        if self.kind == "truncated-ball":
            parts.append(f"radial_order={self.radial_order or DEFAULT_RADIAL_ORDER}")
        return " ".join(parts)


def hermite_tensor(n: int, order: int | None = None) -> QuadratureScheme:
    return QuadratureScheme("hermite-tensor", n, order or default_order(n))


def truncated_ball(n: int, R: float = DEFAULT_TRUNCATION, order: int | None = None,
                   radial_order: int | None = None) -> QuadratureScheme:
    return QuadratureScheme("truncated-ball", n, order or default_order(n), float(R), radial_order)


def sphere_surface(n: int, R: float, order: int | None = None) -> QuadratureScheme:
    return QuadratureScheme("sphere-surface", n, order or default_order(n), float(R))


# -- rule construction ------------------------------------------------------------

def _tensor(axes_nodes: list[np.ndarray], axes_weights: list[np.ndarray]):
    grids = np.meshgrid(*axes_nodes, indexing="ij")
    wgrids = np.meshgrid(*axes_weights, indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=-1)
    weights = np.prod(np.stack([w.ravel() for w in wgrids], axis=-1), axis=-1)
    return nodes, weights


@lru_cache(maxsize=64)
def unit_sphere_rule(n: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes (m, n) on S^{n-1} and positive weights summing to its area.

    Hyperspherical coordinates: polar angles with weight sin^k are handled by
    Gauss-Jacobi in cos(angle); the azimuth uses 2*order equispaced points.
    """
    _check_dim(n)
    if n == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    m_az = 2 * order
    phi = 2 * np.pi * np.arange(m_az) / m_az
    angle_nodes = []
    angle_weights = []
    # polar angles psi_1..psi_{n-2} carry weights sin^{n-2}, ..., sin^1
    for power in range(n - 2, 0, -1):
        a = (power - 1) / 2
        t, w = roots_jacobi(order, a, a)
        angle_nodes.append(np.arccos(t))
        angle_weights.append(w)
    angle_nodes.append(phi)
    angle_weights.append(np.full(m_az, 2 * np.pi / m_az))
    ang, weights = _tensor(angle_nodes, angle_weights)
    pts = np.empty((ang.shape[0], n))
    running = np.ones(ang.shape[0])
    for k in range(n - 2):
        pts[:, k] = running * np.cos(ang[:, k])
        running = running * np.sin(ang[:, k])
    pts[:, n - 2] = running * np.cos(ang[:, -1])
    pts[:, n - 1] = running * np.sin(ang[:, -1])
    return pts, weights


@lru_cache(maxsize=64)
def _nodes_weights(s: QuadratureScheme):
    if s.kind == "hermite-tensor":
        x, w = hermegauss(s.order)
        w = w / math.sqrt(2 * math.pi)
        nodes, weights = _tensor([x] * s.dim, [w] * s.dim)
    elif s.kind == "sphere-surface":
        omega, w = unit_sphere_rule(s.dim, s.order)
        nodes, weights = s.radius * omega, w * s.radius ** (s.dim - 1)
    else:
        t, wt = leggauss(s.radial_order or DEFAULT_RADIAL_ORDER)
        rho = 0.5 * s.radius * (t + 1)
        wr = 0.5 * s.radius * wt * rho ** (s.dim - 1)
        omega, wo = unit_sphere_rule(s.dim, s.order)
        nodes = (rho[:, None, None] * omega[None, :, :]).reshape(-1, s.dim)
        weights = (wr[:, None] * wo[None, :]).ravel()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


# -- integration ----------------------------------------------------------------------

@dataclass(frozen=True)
class VolumeResult:
    value: float
    error: float
    scheme: str

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("volume is not finite")
        if not self.error >= 0:
            raise ValueError("error estimate must be non-negative")


def fsum_dot(weights: np.ndarray, values: np.ndarray) -> float:
    """Compensated weighted sum; the result does not depend on threading."""
    return math.fsum(np.asarray(weights * values, dtype=float).ravel())


def integrate(func: Callable[[np.ndarray], np.ndarray], scheme: QuadratureScheme,
              density: GaussianDensity | None = None) -> float:
    """Integral of ``func`` with respect to the scheme's natural measure.

    For ``hermite-tensor`` and ``truncated-ball`` this is the Gaussian
    weighted integral of func over R^n or B_R; for ``sphere-surface`` it is
    the plain surface integral over S^{n-1}_R.
    """
    nodes, weights = scheme.nodes_weights()
    values = np.asarray(func(nodes), dtype=float)
    if scheme.kind == "truncated-ball":
        density = density or GaussianDensity(scheme.dim)
        values = values * density.weight(nodes)
    return fsum_dot(weights, values)


def integrate_with_error(func, scheme: QuadratureScheme, density=None) -> VolumeResult:
    full = integrate(func, scheme, density)
    half = integrate(func, scheme.halved(), density)
    return VolumeResult(full, abs(full - half), scheme.describe())


def _graph_jacobian(g: SpacelikeGraph):
    def jac(x):
        d = np.asarray(g.field.spacelike_defect(x), dtype=float)
        if np.any(d < 0) or np.any(np.isnan(d)):
            raise NotSpacelikeError("graph is not spacelike at a quadrature node")
        return np.sqrt(d)
    return jac


def vol_f_graph(g: SpacelikeGraph, scheme: QuadratureScheme | None = None) -> VolumeResult:
    """Vol_f of the graph: integral of e^{-f} sqrt(1 - |grad u|^2)."""
    scheme = scheme or hermite_tensor(g.dim)
    if scheme.dim != g.dim or scheme.kind == "sphere-surface":
        raise ValueError("scheme does not match the graph")
    return integrate_with_error(_graph_jacobian(g), scheme, g.density)


def vol_f_graph_truncated(g: SpacelikeGraph, R: float, order: int | None = None,
                          radial_order: int | None = None) -> VolumeResult:
    """Vol_f of the part of the graph over the ball B_R."""
    return vol_f_graph(g, truncated_ball(g.dim, R, order, radial_order))


def hyperbolic_integrand(r: float):
    def integrand(x):
        return r / np.sqrt(np.einsum("...i,...i->...", x, x) + r * r)
    return integrand


def vol_f_hyperbolic(r: float, n: int, scheme: QuadratureScheme | None = None) -> VolumeResult:
    """Vol_f(H_r^+) = integral of e^{-f} r / sqrt(|x|^2 + r^2).

    Defaults to the truncated-ball rule: the integrand has poles at
    |x| = +-i r, which slows Hermite convergence badly for small r.
    """
    if not r > 0:
        raise ValueError(f"hyperboloid parameter must be positive, got {r!r}")
    scheme = scheme or truncated_ball(n)
    return integrate_with_error(hyperbolic_integrand(r), scheme)


def gaussian_volume(n: int, scheme: QuadratureScheme | None = None) -> VolumeResult:
    """Vol_f(G^n); equals 1."""
    scheme = scheme or hermite_tensor(n)
    return integrate_with_error(lambda x: np.ones(x.shape[0]), scheme)


def vol_sphere(R: float, n: int) -> float:
    """Surface measure of S^{n-1}_R: 2 pi^{n/2} R^{n-1} / Gamma(n/2)."""
    if int(n) != n or n < 1:
        raise DimensionError(f"dimension must be a positive integer, got {n!r}")
    if not R > 0:
        raise ValueError(f"radius must be positive, got {R!r}")
    if n == 1:
        return 2.0
    return math.exp(math.log(2.0) + (n / 2) * math.log(math.pi) - gammaln(n / 2)) * R ** (n - 1)
