"""Flux bookkeeping for the calibration argument.

The region Omega = {|x| <= R, u(x) <= t <= g_r(x)} lies between an
origin-normalised f-maximal graph Sigma (t = u) and the hyperboloid H_r^+
(t = g_r = sqrt(|x|^2 + r^2)) inside the cylinder B_R x R.  Since
d(e^{-f} w) = div(e^{-f} N) dV vanishes, the three boundary fluxes satisfy

    flux_hyperbolic = flux_sigma + flux_wall

with

* flux_sigma      = Vol_f(Sigma over B_R)               (ball rule in x)
* flux_hyperbolic = int e^{-f} (-<N_Sigma, N_H>) dA     (hyperboloid coordinates)
* flux_wall       = -e^{c-R^2/2} int_{S_R} (g_r - u) <grad u, x/R> / W dsigma

The wall term carries the inward orientation of the cylinder; with that
sign the identity above is the Stokes balance.  The slice case, where every
term is known in closed form, pins the signs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import (
    CertificateError,
    ChainViolation,
    GeometryError,
    NotFMaximalError,
)
from .graph import GradientBound, SpacelikeGraph, sample_grid
from .quadrature import (
    fsum_dot,
    gaussian_volume,
    hermite_tensor,
    hyperbolic_integrand,
    integrate_with_error,
    sphere_surface,
    truncated_ball,
    unit_sphere_rule,
    vol_f_graph,
    vol_f_graph_truncated,
    vol_f_hyperbolic,
    vol_sphere,
)
from .report import ExperimentReport

#: Gauss-Legendre points per radial/hyperbolic coordinate in Stokes experiments
DEFAULT_STOKES_ORDER = 12
RESIDUAL_TOL = 1e-6
K_SLACK = 1e-9


def check_f_maximal(g: SpacelikeGraph, points: np.ndarray, tol: float = RESIDUAL_TOL) -> float:
    """Largest |residual| over ``points``; raises ``NotFMaximalError`` above ``tol``."""
    res = np.abs(np.asarray(g.fmaximal_residual(points)))
    worst = float(res.max())
    if not worst < tol:
        i = int(np.argmax(res))
        raise NotFMaximalError(
            f"f-maximal residual {worst:.3e} >= {tol:g} at x = {points[i].tolist()}"
        )
    return worst


@dataclass
class CylinderExperiment:
    """An f-maximal graph, a hyperboloid H_r^+ and a cylinder of radius R.

    The graph is shifted along t so that it passes through the origin, and
    its residual is checked on the ball quadrature nodes.
    """

    graph: SpacelikeGraph
    r: float
    R: float
    order: int = DEFAULT_STOKES_ORDER
    angular_order: int | None = None
    seed: int = 0
    residual_tol: float = RESIDUAL_TOL
    max_residual: float = field(init=False, default=float("nan"))

    def __post_init__(self):
        if not (self.r > 0 and self.R > 0):
            raise ValueError("r and R must be positive")
        self.graph = self.graph.origin_normalized()
        nodes, _ = self.ball_scheme().nodes_weights()
        self.max_residual = check_f_maximal(self.graph, nodes, self.residual_tol)
        top = math.hypot(self.R, self.r)
        wall_u = np.asarray(self.graph.field.value(self.wall_nodes()[0]))
        if np.any(np.abs(wall_u) > top):
            raise GeometryError("graph leaves the slab |t| <= sqrt(R^2 + r^2) on the wall")

    @property
    def dim(self) -> int:
        return self.graph.dim

    @property
    def sphere_order(self) -> int:
        return self.angular_order or self.order

    def ball_scheme(self):
        return truncated_ball(self.dim, self.R, order=self.sphere_order, radial_order=self.order)

    def wall_nodes(self):
        return sphere_surface(self.dim, self.R, self.sphere_order).nodes_weights()

    def refined(self, factor: float) -> "CylinderExperiment":
        order = max(1, int(round(self.order * factor)))
        ang = None if self.angular_order is None else max(1, int(round(self.angular_order * factor)))
        return CylinderExperiment(self.graph, self.r, self.R, order, ang, self.seed, self.residual_tol)

    def hyperbolic_g(self, x):
        return np.sqrt(np.einsum("...i,...i->...", x, x) + self.r**2)

    def wall_integrand(self, x):
        """<grad u, x/R> / W on the wall."""
        grad = self.graph.field.gradient(x)
        w = np.sqrt(self.graph.checked_defect(x))
        return np.einsum("...i,...i->...", grad, x) / self.R / w


def wall_flux(e: CylinderExperiment) -> float:
    """Inward-oriented flux of e^{-f} N through the wall between Sigma and H_r^+."""
    nodes, weights = e.wall_nodes()
    height = e.hyperbolic_g(nodes) - np.asarray(e.graph.field.value(nodes))
    vals = height * e.wall_integrand(nodes)
    return -e.graph.density.wall_weight(e.R) * fsum_dot(weights, vals)


def measure_wall_K(e: CylinderExperiment) -> float:
    """sup |<grad u, x/R>| / W over the wall quadrature nodes and a seeded sample
    of 10 * n * order random directions."""
    nodes, _ = e.wall_nodes()
    rng = np.random.default_rng(e.seed)
    m = 10 * e.dim * e.order
    if e.dim == 1:
        dirs = rng.choice([-1.0, 1.0], size=(m, 1))
    else:
        dirs = rng.standard_normal((m, e.dim))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    pts = np.concatenate([nodes, e.R * dirs])
    return float(np.max(np.abs(e.wall_integrand(pts))))


def flux_bound(R: float, r: float, K: float, n: int, density=None) -> float:
    """2 e^{c - R^2/2} K sqrt(R^2 + r^2) Vol(S^{n-1}_R)."""
    if not (R > 0 and r > 0 and K > 0):
        raise ValueError("R, r and K must be positive")
    c = density.c if density is not None else -(n / 2) * math.log(2 * math.pi)
    return 2 * math.exp(c - 0.5 * R * R) * K * math.hypot(R, r) * vol_sphere(R, n)


def hyperboloid_flux(e: CylinderExperiment) -> tuple[float, float]:
    """Flux through H_r^+ over B_R and the smallest normal pairing seen.

    Uses the intrinsic parametrisation x = r sinh(s) w, t = r cosh(s), with
    area element r^n sinh^{n-1}(s) ds dw and future normal (x, t)/r.
    """
    n, r = e.dim, e.r
    s_max = math.asinh(e.R / r)
    ts, ws = leggauss(e.order)
    s = 0.5 * s_max * (ts + 1)
    ws = 0.5 * s_max * ws * r**n * np.sinh(s) ** (n - 1)
    omega, wo = unit_sphere_rule(n, e.sphere_order)
    x = (r * np.sinh(s)[:, None, None] * omega[None, :, :]).reshape(-1, n)
    t = np.repeat(r * np.cosh(s), omega.shape[0])
    weights = (ws[:, None] * wo[None, :]).ravel()
    grad = e.graph.field.gradient(x)
    w_sigma = np.sqrt(e.graph.checked_defect(x))
    pairing = (t - np.einsum("...i,...i->...", grad, x)) / (r * w_sigma)
    flux = fsum_dot(weights, e.graph.density.weight(x) * pairing)
    return flux, float(pairing.min())


@dataclass(frozen=True)
class FluxReport:
    flux_sigma: float
    flux_hyperbolic: float
    flux_wall: float
    closure_defect: float
    min_pairing: float
    K_measured: float
    wall_bound: float
    order: int

    def as_row(self) -> dict:
        return dict(self.__dict__)


def stokes_closure(e: CylinderExperiment) -> FluxReport:
    flux_sigma = vol_f_graph_truncated(e.graph, e.R, order=e.sphere_order, radial_order=e.order).value
    flux_h, min_pairing = hyperboloid_flux(e)
    flux_w = wall_flux(e)
    K = measure_wall_K(e)
    bound = flux_bound(e.R, e.r, K, e.dim, e.graph.density) if K > 0 else 0.0
    return FluxReport(
        flux_sigma=flux_sigma,
        flux_hyperbolic=flux_h,
        flux_wall=flux_w,
        closure_defect=flux_h - flux_sigma - flux_w,
        min_pairing=min_pairing,
        K_measured=K,
        wall_bound=bound,
        order=e.order,
    )


def stokes_convergence(e: CylinderExperiment, factors=(0.5, 1.0, 2.0)) -> list[FluxReport]:
    """Closure reports at scaled quadrature orders (convergence diagnostic)."""
    return [stokes_closure(e if f == 1.0 else e.refined(f)) for f in factors]


def comparison_table(
    g: SpacelikeGraph,
    bound: GradientBound | None,
    r_grid,
    R_grid,
    order: int | None = None,
    seed: int = 0,
) -> ExperimentReport:
    """Rows of the truncated volume comparison Vol_f(H~) <= Vol_f(Sigma~) + wall bound."""
    if not isinstance(bound, GradientBound):
        raise CertificateError("comparison_table needs a bounded-gradient certificate")
    g = g.origin_normalized()
    check_f_maximal(g, sample_grid(g.dim, 3.0, {1: 61, 2: 31, 3: 13, 4: 7}[g.dim]))
    report = ExperimentReport(
        name="comparison_table",
        columns=["r", "R", "vol_sigma", "vol_hyperbolic", "K", "K_apriori", "wall_bound",
                 "slack", "holds"],
        meta={"delta": bound.delta, "certificate": bound.evidence},
    )
    for R in R_grid:
        vs = vol_f_graph_truncated(g, R, order=order)
        for r in r_grid:
            vh = integrate_with_error(hyperbolic_integrand(r), truncated_ball(g.dim, R, order))
            e = CylinderExperiment(g, r, R, seed=seed)
            K = measure_wall_K(e)
            wb = flux_bound(R, r, K, g.dim, g.density) if K > 0 else 0.0
            slack = vs.value + wb - vh.value
            holds = slack >= -(vs.error + vh.error)
            report.add(r=float(r), R=float(R), vol_sigma=vs.value, vol_hyperbolic=vh.value, K=K,
                       K_apriori=bound.K_apriori, wall_bound=wb, slack=slack, holds=holds)
            if not holds:
                report.fail(f"truncated comparison violated at r={r:g}, R={R:g}")
    return report


BERNSTEIN_R_GRID = (1.0, 10.0, 100.0, 1000.0, 10000.0)


def bernstein_chain(
    g: SpacelikeGraph,
    bound: GradientBound | None,
    tol: float = 1e-6,
    r_grid=BERNSTEIN_R_GRID,
) -> ExperimentReport:
    """Evaluate 1 = Vol_f(G^n) >= Vol_f(Sigma) >= Vol_f(H_r^+) -> 1 and the
    rigidity diagnostic int e^{-f} (1 - sqrt(1 - |grad u|^2)).

    Raises ``NotFMaximalError`` before the chain when the input fails the
    residual check, and ``ChainViolation`` when a link breaks beyond ``tol``.
    """
    if not isinstance(bound, GradientBound):
        raise CertificateError("bernstein_chain needs a bounded-gradient certificate")
    n = g.dim
    check_f_maximal(g, sample_grid(n, 3.0, {1: 61, 2: 31, 3: 13, 4: 7}[n]))

    report = ExperimentReport(
        name="bernstein_chain",
        columns=["quantity", "r", "value", "error"],
        meta={"tol": tol, "delta": bound.delta, "certificate": bound.evidence},
    )
    vol_g = gaussian_volume(n)
    vol_s = vol_f_graph(g)
    report.add(quantity="vol_gauss", value=vol_g.value, error=vol_g.error)
    report.add(quantity="vol_sigma", value=vol_s.value, error=vol_s.error)

    def diag_integrand(x):
        grad = g.field.gradient(x)
        gsq = np.einsum("...i,...i->...", grad, grad)
        return gsq / (1.0 + np.sqrt(g.field.spacelike_defect(x)))

    diag = integrate_with_error(diag_integrand, hermite_tensor(n))
    report.add(quantity="gradient_diagnostic", value=diag.value, error=diag.error)

    if vol_s.value > vol_g.value + tol:
        raise ChainViolation(f"Vol_f(Sigma) = {vol_s.value!r} exceeds Vol_f(G^n) = {vol_g.value!r}")
    prev = -math.inf
    for r in r_grid:
        vh = vol_f_hyperbolic(r, n)
        report.add(quantity="vol_hyperbolic", r=float(r), value=vh.value, error=vh.error)
        if vh.value > vol_s.value + tol:
            raise ChainViolation(f"Vol_f(H_r^+) = {vh.value!r} exceeds Vol_f(Sigma) at r = {r:g}")
        if not vh.value > prev:
            raise ChainViolation(f"Vol_f(H_r^+) not increasing at r = {r:g}")
        prev = vh.value
    if abs(vol_s.value - 1.0) >= tol:
        raise ChainViolation(f"|Vol_f(Sigma) - 1| = {abs(vol_s.value - 1):.3e} >= {tol:g}")
    if not diag.value < tol:
        raise ChainViolation(f"gradient diagnostic {diag.value:.3e} >= {tol:g}")
    return report
