import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fmaximal.errors import CausalityError, DimensionError
from fmaximal.lorentz import (
    CausalClass,
    causal_classify,
    hyperbolic_angle,
    is_future_directed,
    lorentz_gram_schmidt,
    lorentz_inner,
    lorentz_norm,
    safe_arccosh,
    same_timelike_cone,
    volume_form,
)

finite = st.floats(-50, 50, allow_nan=False, allow_infinity=False)


def vectors(dim=3):
    return st.lists(finite, min_size=dim, max_size=dim).map(np.array)


def test_inner_products():
    assert lorentz_inner([1, 0, 0], [1, 0, 0]) == 1.0
    assert lorentz_inner([0, 0, 1], [0, 0, 1]) == -1.0
    assert lorentz_inner([1, 0, 2], [0, 1, 0]) == 0.0


def test_inner_rejects_mismatched_lengths():
    with pytest.raises(DimensionError):
        lorentz_inner([1, 0], [1, 0, 0])


@pytest.mark.parametrize(
    "v, expected",
    [
        ([1, 0, 0], CausalClass.SPACELIKE),
        ([1, 0, 1], CausalClass.LIGHTLIKE),
        ([0, 0, 1], CausalClass.TIMELIKE),
    ],
)
def test_causal_classify(v, expected):
    assert causal_classify(v) is expected


def test_lightlike_tolerance_scales_with_size():
    big = 1e6
    assert causal_classify([big, 0, big * (1 + 1e-16)]) is CausalClass.LIGHTLIKE


@pytest.mark.parametrize("v, expected", [([3, 4, 0], 5.0), ([0, 0, 2], 2.0), ([1, 0, 1], 0.0)])
def test_norm(v, expected):
    assert lorentz_norm(v) == pytest.approx(expected, abs=1e-15)


def test_same_cone():
    assert same_timelike_cone([0, 0, 1], [0, 0, 2])
    assert not same_timelike_cone([0, 0, 1], [0, 0, -1])
    assert same_timelike_cone([1, 0, 2], [0, 0, 1])
    with pytest.raises(CausalityError):
        same_timelike_cone([1, 0, 0], [0, 0, 1])


def test_hyperbolic_angle_values(golden):
    assert hyperbolic_angle([0, 0, 1], [0, 0, 1]) == 0.0
    assert hyperbolic_angle([0, 0, 3], [0, 0, 5]) == 0.0
    val = hyperbolic_angle([math.sinh(1), 0, math.cosh(1)], [0, 0, 1])
    assert val == pytest.approx(golden["hyperbolic_angle_boost1"], abs=1e-12)


def test_hyperbolic_angle_rejects_opposite_cones():
    with pytest.raises(CausalityError):
        hyperbolic_angle([0, 0, 1], [0, 0, -1])


def test_safe_arccosh_clamp():
    assert safe_arccosh(1 - 1e-12) == 0.0
    with pytest.raises(CausalityError):
        safe_arccosh(0.99)


def test_volume_form_basics():
    e = np.eye(3)
    assert volume_form(*e) == 1.0
    assert volume_form(e[0], e[0], e[2]) == 0.0
    v = [np.array([1.0, 2, 3]), np.array([0.5, -1, 2]), np.array([3.0, 1, -1])]
    assert volume_form(v[1], v[0], v[2]) == pytest.approx(-volume_form(*v))


@given(vectors(), vectors())
def test_inner_symmetric(x, y):
    assert lorentz_inner(x, y) == lorentz_inner(y, x)


@given(vectors(), vectors(), vectors(), finite)
def test_inner_bilinear(x, y, z, a):
    lhs = lorentz_inner(a * x + y, z)
    rhs = a * lorentz_inner(x, z) + lorentz_inner(y, z)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-6)


@given(st.floats(0, 5), st.floats(0, 5), st.floats(0, 2 * math.pi))
def test_reverse_cauchy_schwarz(a, b, phi):
    # two future unit vectors: <x,y> <= -1, equality iff x = y
    x = np.array([math.sinh(a), 0.0, math.cosh(a)])
    y = np.array([math.sinh(b) * math.cos(phi), math.sinh(b) * math.sin(phi), math.cosh(b)])
    assert lorentz_inner(x, y) <= -1 + 1e-12
    assert hyperbolic_angle(x, y) >= 0


@settings(max_examples=50)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_gram_schmidt_gives_orthonormal_spacelike(n, seed):
    rng = np.random.default_rng(seed)
    vs = np.zeros((n, n + 1))
    vs[:, :n] = np.eye(n) + 0.1 * rng.standard_normal((n, n))
    vs[:, n] = 0.5 * rng.uniform(-1, 1, n) / math.sqrt(n)
    frame = lorentz_gram_schmidt(vs)
    gram = np.array([[lorentz_inner(a, b) for b in frame] for a in frame])
    assert np.allclose(gram, np.eye(n), atol=1e-10)


def test_future_directed():
    assert is_future_directed([0.5, 0, 1])
    assert not is_future_directed([0.5, 0, -1])
