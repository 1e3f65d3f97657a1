"""Numerics for spacelike graphs in Gauss space times a Lorentzian line:
f-mean curvature, Gaussian-weighted volumes, calibration fluxes and a
Calabi-Bernstein style rigidity check."""

__version__ = "0.1.0"

from .density import GaussianDensity
from .graph import GradientBound, SpacelikeGraph, certify_gradient_bound
from .fields import FunctionField, ScalarField
from .lorentz import (
    CausalClass,
    causal_classify,
    hyperbolic_angle,
    lorentz_inner,
    lorentz_norm,
    same_timelike_cone,
    volume_form,
)
from .solutions import (
    bernstein_family_scan,
    example_graph,
    example_u,
    hyperbolic_graph,
    radial_member,
    slice_graph,
    translation_member,
)

__all__ = [
    "CausalClass",
    "FunctionField",
    "GaussianDensity",
    "GradientBound",
    "ScalarField",
    "SpacelikeGraph",
    "bernstein_family_scan",
    "causal_classify",
    "certify_gradient_bound",
    "example_graph",
    "example_u",
    "hyperbolic_angle",
    "hyperbolic_graph",
    "lorentz_inner",
    "lorentz_norm",
    "radial_member",
    "same_timelike_cone",
    "slice_graph",
    "translation_member",
    "volume_form",
]
