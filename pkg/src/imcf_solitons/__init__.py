"""Homothetic solitons of the inverse mean curvature flow: geometry, checks and examples."""

from .catalog import ExpectedFacts, catalog_get, catalog_list
from .curves import SolitonCurve, classify_family, icsf_residual, nu_eval, sample_curve
from .errors import SolitonError
from .flow import FlowState, flow_convex_curve, flow_sphere, homothety_deviation
from .geometry import Immersion, Interval, Jet2, fd_jet, geometry_at
from .lagrangian import (
    equivariant_soliton,
    hopf_product,
    lagrangian_angle,
    lagrangian_residual,
    legendrian_residual,
    power_curve,
    product_immersion,
    pseudoumbilical_residual,
)
from .verifier import SolitonReport, estimate_velocity, pinching_ratio, scan, soliton_residual

__version__ = "0.1.0"
