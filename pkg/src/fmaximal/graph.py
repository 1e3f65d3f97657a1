"""Geometry of a spacelike graph t = u(x) in G^n x R_1.

With W = sqrt(1 - |grad u|^2):

* future unit normal      N = (grad u, 1) / W
* mean curvature          H = -(1/n) div(grad u / W)
* f-mean curvature        H_f = H + (1/n) <grad f, N>
* f-maximal residual      div(grad u / W) - <grad f, N>  (= -n H_f)

The divergence is expanded in closed form as
``lap(u)/W + (grad u . Hess u . grad u)/W^3``; a central-difference
divergence of ``grad u / W`` is kept alongside as an independent check.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lorentz
from .density import GaussianDensity
from .errors import CertificateError, FrameError, NotSpacelikeError, OracleMismatchError
from .fields import FD_GRAD_SCALE, FD_HESS_SCALE, ScalarField, fd_steps

#: points with 1 - |grad u|^2 <= EPS_SL are refused by curvature operations
EPS_SL = 1e-10
#: relative disagreement tolerated between closed-form and FD divergence
DIV_CROSSCHECK_TOL = 1e-5
FRAME_TOL = 1e-9


def _squeeze(a, single: bool):
    a = np.asarray(a)
    return a[0] if single else a


@dataclass(frozen=True)
class GradientBound:
    """Certificate that sup |grad u| <= 1 - delta on a sampled region."""

    delta: float
    sup_gradient: float
    evidence: str

    def __post_init__(self):
        if not 0 < self.delta <= 1:
            raise CertificateError(f"delta must lie in (0, 1], got {self.delta!r}")

    @property
    def K_apriori(self) -> float:
        """Bound on |<grad u, x>| / W implied by the certificate."""
        s = 1.0 - self.delta
        return s / np.sqrt(1.0 - s * s)


@dataclass(frozen=True)
class SpacelikeGraph:
    field: ScalarField
    density: GaussianDensity = None  # type: ignore[assignment]
    name: str = field(default="")

    def __post_init__(self):
        if self.density is None:
            object.__setattr__(self, "density", GaussianDensity(self.field.dim))
        if self.density.dim != self.field.dim:
            raise ValueError("field and density dimensions differ")
        if not self.name:
            object.__setattr__(self, "name", self.field.name)

    @property
    def dim(self) -> int:
        return self.field.dim

    def _prep(self, x):
        x = self.field.points(x)
        single = x.ndim == 1
        return np.atleast_2d(x), single

    def checked_defect(self, x: np.ndarray) -> np.ndarray:
        d = np.asarray(self.field.spacelike_defect(x), dtype=float)
        if np.any(~(d > EPS_SL)):
            bad = x[np.argmin(d)]
            raise NotSpacelikeError(
                f"1 - |grad u|^2 = {d.min():.3e} <= {EPS_SL:g} at x = {bad.tolist()}"
            )
        return d

    # -- pointwise geometry -----------------------------------------------
    def spacelike_check(self, x):
        x, single = self._prep(x)
        ok = np.asarray(self.field.spacelike_defect(x)) > EPS_SL
        return bool(ok[0]) if single else ok

    def normal(self, x) -> np.ndarray:
        x, single = self._prep(x)
        w = np.sqrt(self.checked_defect(x))
        g = self.field.gradient(x)
        n = np.concatenate([g, np.ones(g.shape[:-1] + (1,))], axis=-1) / w[:, None]
        return _squeeze(n, single)

    def divergence(self, x, check: bool = True):
        """div(grad u / W) from first and second derivatives of u."""
        x, single = self._prep(x)
        d = self.checked_defect(x)
        w = np.sqrt(d)
        g = self.field.gradient(x)
        hess = self.field.hessian(x)
        lap = np.trace(hess, axis1=-2, axis2=-1)
        ghg = np.einsum("...i,...ij,...j->...", g, hess, g)
        div = lap / w + ghg / (w * d)
        if check:
            ref = self._divergence_fd(x)
            gap = np.abs(div - ref)
            if np.any(gap > DIV_CROSSCHECK_TOL * np.maximum(1.0, np.abs(div))):
                i = int(np.argmax(gap))
                raise OracleMismatchError(
                    f"closed-form divergence {div[i]!r} vs finite-difference {ref[i]!r} "
                    f"at x = {x[i].tolist()}"
                )
        return _squeeze(div, single)

    def divergence_fd(self, x):
        """Central-difference divergence of grad u / W (independent oracle)."""
        x, single = self._prep(x)
        return _squeeze(self._divergence_fd(x), single)

    def _flux_vector(self, x: np.ndarray) -> np.ndarray:
        return self.field.gradient(x) / np.sqrt(self.checked_defect(x))[:, None]

    def _divergence_fd(self, x: np.ndarray) -> np.ndarray:
        scale = FD_GRAD_SCALE if self.field.has_closed_gradient else FD_HESS_SCALE
        h = fd_steps(x, scale)
        out = np.zeros(x.shape[0])
        for i in range(self.dim):
            xp = x.copy()
            xm = x.copy()
            xp[:, i] += h
            xm[:, i] -= h
            out += (self._flux_vector(xp)[:, i] - self._flux_vector(xm)[:, i]) / (2 * h)
        return out

    def mean_curvature(self, x, check: bool = True):
        return -self.divergence(x, check=check) / self.dim

    def grad_f_dot_normal(self, x):
        """<grad f, N> = (x . grad u) / W."""
        x, single = self._prep(x)
        val = lorentz.lorentz_inner(self.density.f_gradient(x), self.normal(x))
        return _squeeze(val, single)

    def f_mean_curvature(self, x, check: bool = True):
        return self.mean_curvature(x, check=check) + self.grad_f_dot_normal(x) / self.dim

    def fmaximal_residual(self, x, check: bool = True):
        x, single = self._prep(x)
        div = np.asarray(self.divergence(x, check=check))
        p = np.asarray(self.grad_f_dot_normal(x))
        res = div - p
        hf = -div / self.dim + p / self.dim
        # residual = -n H_f is an algebraic identity; a failure here means a broken field
        assert np.all(np.abs(res + self.dim * hf) <= 1e-10 * np.maximum(1.0, np.abs(div) + np.abs(p)))
        return _squeeze(res, single)

    def hyperbolic_angle_function(self, x):
        """theta with cosh(theta) = 1/W, via asinh(|grad u| / W) for accuracy."""
        x, single = self._prep(x)
        w = np.sqrt(self.checked_defect(x))
        g = np.linalg.norm(self.field.gradient(x), axis=-1)
        return _squeeze(np.arcsinh(g / w), single)

    # -- calibration form ---------------------------------------------------
    def tangent_frame(self, x) -> np.ndarray:
        """Orthonormal frame of the graph's tangent space, shape (..., n, n+1)."""
        x, single = self._prep(x)
        self.checked_defect(x)
        g = self.field.gradient(x)
        m, n = x.shape
        tangents = np.zeros((m, n, n + 1))
        tangents[:, :, :n] = np.eye(n)
        tangents[:, :, n] = g
        return _squeeze(lorentz.lorentz_gram_schmidt(tangents), single)

    def slice_frame(self, x) -> np.ndarray:
        """The coordinate frame (e_1, ..., e_n) spanning {t = const}."""
        x, single = self._prep(x)
        m, n = x.shape
        frame = np.zeros((m, n, n + 1))
        frame[:, :, :n] = np.eye(n)
        return _squeeze(frame, single)

    def calibration_value(self, x, t=0.0, frame=None):
        """w(X_1, ..., X_n) = dV(X_1, ..., X_n, N) with N extended along t.

        ``t`` is accepted for completeness; the extended normal does not
        depend on it.  ``frame`` has shape (..., n, n+1) and defaults to the
        graph's tangent frame.
        """
        x, single = self._prep(x)
        if frame is None:
            frame = self.tangent_frame(x)
        frame = np.asarray(frame, dtype=float)
        if frame.ndim == 2:
            frame = np.broadcast_to(frame, (x.shape[0],) + frame.shape)
        n = self.dim
        if frame.shape[-2:] != (n, n + 1):
            raise FrameError(f"frame must have shape (..., {n}, {n + 1}), got {frame.shape}")
        eta = np.diag([1.0] * n + [-1.0])
        gram = np.einsum("...ia,ab,...jb->...ij", frame, eta, frame)
        if np.any(np.abs(gram - np.eye(n)) > FRAME_TOL):
            raise FrameError("frame is not Lorentz-orthonormal and spacelike")
        normal = self.normal(x)
        cols = [frame[..., i, :] for i in range(n)] + [normal]
        return _squeeze(lorentz.volume_form(*cols), single)

    # -- weighted divergence (closedness of e^{-f} w) ---------------------------
    def weighted_divergence_check(self, x):
        """div(e^{-f} N) by central differences over the spatial directions."""
        x, single = self._prep(x)
        h = fd_steps(x, FD_GRAD_SCALE)
        out = np.zeros(x.shape[0])
        for i in range(self.dim):
            xp = x.copy()
            xm = x.copy()
            xp[:, i] += h
            xm[:, i] -= h
            fp = self.density.weight(xp) * self.normal(xp)[:, i]
            fm = self.density.weight(xm) * self.normal(xm)[:, i]
            out += (fp - fm) / (2 * h)
        return _squeeze(out, single)

    def weighted_divergence_exact(self, x):
        """-e^{-f} (n H + <grad f, N>)."""
        x, single = self._prep(x)
        val = -self.density.weight(x) * (
            self.dim * np.asarray(self.mean_curvature(x)) + np.asarray(self.grad_f_dot_normal(x))
        )
        return _squeeze(val, single)

    # -- transformations ----------------------------------------------------
    def translated(self, dt: float) -> "SpacelikeGraph":
        return SpacelikeGraph(self.field.shifted(dt), self.density, self.name)

    def origin_normalized(self) -> "SpacelikeGraph":
        """Shift along t so that the graph passes through the origin."""
        u0 = float(np.asarray(self.field.value(np.zeros(self.dim))))
        if u0 == 0.0:
            return self
        return self.translated(-u0)


def sample_grid(dim: int, half_width: float, points_per_axis: int) -> np.ndarray:
    """Tensor grid on [-half_width, half_width]^dim, shape (m, dim)."""
    axis = np.linspace(-half_width, half_width, points_per_axis)
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


_GRID_POINTS = {1: 1201, 2: 121, 3: 41, 4: 21}


def gradient_sup(graph: SpacelikeGraph, half_width: float = 6.0, points_per_axis: int | None = None):
    """Sampled sup of |grad u| over the cube [-half_width, half_width]^n."""
    m = points_per_axis or _GRID_POINTS.get(graph.dim, 11)
    pts = sample_grid(graph.dim, half_width, m)
    grad = graph.field.gradient(pts)
    return float(np.max(np.linalg.norm(grad, axis=-1))), pts.shape[0]


def certify_gradient_bound(
    graph: SpacelikeGraph,
    delta: float,
    half_width: float = 6.0,
    points_per_axis: int | None = None,
) -> GradientBound:
    """Issue a bounded-gradient certificate or raise ``CertificateError``."""
    sup, count = gradient_sup(graph, half_width, points_per_axis)
    if not sup <= 1.0 - delta:
        raise CertificateError(
            f"sup |grad u| = {sup:.17g} exceeds 1 - delta = {1 - delta:g} "
            f"on [-{half_width:g}, {half_width:g}]^{graph.dim}"
        )
    evidence = f"grid of {count} points on [-{half_width:g}, {half_width:g}]^{graph.dim}"
    return GradientBound(delta=delta, sup_gradient=sup, evidence=evidence)
