import math

import numpy as np
import pytest

from fmaximal.errors import CertificateError, FrameError, NotSpacelikeError, OracleMismatchError
from fmaximal.fields import FunctionField
from fmaximal.graph import EPS_SL, GradientBound, SpacelikeGraph, certify_gradient_bound
from fmaximal.lorentz import hyperbolic_angle, lorentz_inner
from fmaximal.solutions import example_graph, hyperbolic_graph, slice_graph


def tilted_plane(slope=0.5):
    return SpacelikeGraph(FunctionField(1, lambda x: slope * x[..., 0], name="tilted"))


def test_spacelike_check():
    assert np.all(slice_graph(2, 3.0).spacelike_check(np.random.default_rng(0).normal(size=(50, 2))))
    assert not SpacelikeGraph(FunctionField(1, lambda x: x[..., 0])).spacelike_check(np.array([0.3]))
    g = example_graph(1)
    assert np.all(g.spacelike_check(np.linspace(-3, 3, 61)[:, None]))


def test_lightlike_graph_refused():
    g = SpacelikeGraph(FunctionField(1, lambda x: x[..., 0]))
    with pytest.raises(NotSpacelikeError):
        g.mean_curvature(np.array([0.0]))


def test_normal(golden):
    assert np.array_equal(slice_graph(2).normal(np.array([0.4, -1.0])), [0, 0, 1])
    n0 = example_graph(1).normal(np.array([0.0]))
    np.testing.assert_allclose(n0, golden["example_normal_origin"], rtol=1e-14)
    assert lorentz_inner(n0, n0) == pytest.approx(-1.0, abs=1e-14)


def test_normal_is_future_unit_timelike():
    rng = np.random.default_rng(1)
    g = example_graph(2)
    pts = rng.uniform(-3, 3, size=(1000, 2))
    nn = g.normal(pts)
    np.testing.assert_allclose(lorentz_inner(nn, nn), -1.0, atol=1e-9)
    assert np.all(nn[:, -1] > 0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_example_curvatures(n):
    g = example_graph(n)
    x1 = np.linspace(-3, 3, 61)
    pts = np.zeros((x1.size, n))
    pts[:, 0] = x1
    H = g.mean_curvature(pts)
    np.testing.assert_allclose(H, -x1 * np.exp(x1**2 / 2) / n, rtol=1e-8, atol=1e-14)
    np.testing.assert_allclose(g.grad_f_dot_normal(pts), x1 * np.exp(x1**2 / 2), rtol=1e-8, atol=1e-14)
    assert np.max(np.abs(g.f_mean_curvature(pts))) < 1e-6


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("r", [0.5, 1.0, 3.0])
def test_hyperboloid_mean_curvature(n, r):
    g = hyperbolic_graph(r, n)
    pts = np.random.default_rng(n).uniform(-2, 2, size=(40, n))
    np.testing.assert_allclose(g.mean_curvature(pts), -1.0 / r, rtol=1e-8)
    np.testing.assert_allclose(g.divergence_fd(pts), n / r, rtol=1e-5)


def test_slice_is_f_maximal():
    g = slice_graph(3, -2.0)
    pts = np.random.default_rng(2).normal(size=(20, 3))
    assert np.all(g.mean_curvature(pts) == 0)
    assert np.all(g.f_mean_curvature(pts) == 0)
    assert np.all(g.fmaximal_residual(pts) == 0)
    assert np.all(g.hyperbolic_angle_function(pts) == 0)
    assert np.all(g.weighted_divergence_check(pts) == 0)


def test_tilted_plane(golden):
    g = tilted_plane()
    x = np.linspace(-2, 2, 9)[:, None]
    hf = g.f_mean_curvature(x)
    np.testing.assert_allclose(hf, x[:, 0] * golden["tilted_plane_Hf_over_x"], atol=1e-7)
    res = g.fmaximal_residual(np.array([math.sqrt(3)]))
    assert res == pytest.approx(golden["tilted_plane_residual_sqrt3"], abs=1e-7)


def test_tilted_plane_weighted_divergence():
    g = tilted_plane()
    x = np.array([[0.5], [1.0], [-1.7]])
    fd = g.weighted_divergence_check(x)
    exact = -g.density.weight(x) * g.grad_f_dot_normal(x)
    np.testing.assert_allclose(fd, exact, atol=1e-6)
    assert np.all(np.abs(fd) > 1e-3)


def test_example_weighted_divergence_vanishes():
    g = example_graph(2)
    pts = np.random.default_rng(3).uniform(-3, 3, size=(50, 2))
    assert np.max(np.abs(g.weighted_divergence_check(pts))) < 1e-5


def test_hyperbolic_angle_function(golden):
    g = example_graph(1)
    assert g.hyperbolic_angle_function(np.array([0.0])) == pytest.approx(golden["example_theta_origin"], rel=1e-14)
    x = np.linspace(0, 4.7, 95)[:, None]
    theta = g.hyperbolic_angle_function(x)
    assert np.all(np.diff(theta) > 0)
    # cosh(theta) = sqrt(1 + e^{x^2}), i.e. theta = asinh(e^{x^2/2}), which is unbounded
    np.testing.assert_allclose(theta, np.arcsinh(np.exp(x[:, 0] ** 2 / 2)), rtol=1e-13)
    np.testing.assert_allclose(theta, g.hyperbolic_angle_function(-x))
    via_normals = hyperbolic_angle(g.normal(x), np.array([0.0, 1.0]))
    np.testing.assert_allclose(theta, via_normals, atol=1e-10)


def test_calibration_values(golden):
    g = example_graph(1)
    x0 = np.array([0.0])
    assert g.calibration_value(x0) == pytest.approx(1.0, abs=1e-12)
    slice_val = g.calibration_value(x0, frame=g.slice_frame(x0))
    assert abs(slice_val) == pytest.approx(golden["example_slice_calibration_origin"], rel=1e-14)
    x = np.array([[1.3, -0.4]])
    g2 = example_graph(2)
    cosh_theta = np.cosh(g2.hyperbolic_angle_function(x))
    assert abs(g2.calibration_value(x, frame=g2.slice_frame(x))[0]) == pytest.approx(cosh_theta[0], rel=1e-12)


def test_calibration_rejects_bad_frame():
    g = example_graph(2)
    with pytest.raises(FrameError):
        g.calibration_value(np.zeros(2), frame=np.array([[1.0, 0, 0], [1.0, 0, 0]]))
    with pytest.raises(FrameError):
        g.calibration_value(np.zeros(2), frame=np.eye(3))


def test_divergence_crosscheck_catches_wrong_hessian():
    bad = FunctionField(
        1,
        lambda x: 0.25 * x[..., 0] ** 2,
        gradient=lambda x: 0.5 * x,
        hessian=lambda x: np.full(x.shape + (1,), 3.0),
    )
    with pytest.raises(OracleMismatchError):
        SpacelikeGraph(bad).divergence(np.array([0.3]))


def test_translation_and_normalisation():
    g = slice_graph(1, 2.5)
    assert g.translated(-2.5).field.value(np.zeros(1)) == 0.0
    assert g.origin_normalized().field.value(np.array([4.0])) == 0.0


def test_gradient_bound():
    b = certify_gradient_bound(slice_graph(2), 0.01)
    assert b.sup_gradient == 0.0
    assert b.K_apriori == pytest.approx(0.99 / math.sqrt(1 - 0.99**2))
    with pytest.raises(CertificateError):
        certify_gradient_bound(example_graph(1), 0.01)
    with pytest.raises(CertificateError):
        GradientBound(delta=0.0, sup_gradient=0.0, evidence="")


def test_eps_sl_threshold():
    # the example's defect 1/(1+e^{x^2}) falls below EPS_SL just beyond |x| = 4.79
    g = example_graph(1)
    assert g.spacelike_check(np.array([4.7]))
    assert not g.spacelike_check(np.array([4.9]))
    assert 1 / (1 + math.exp(4.9**2)) < EPS_SL
