"""Utility-region toolkit.

Interference mappings, nonlinear spectral radii, feasibility and
weak-Pareto queries, inverse-Z convexity certificates, weighted
sum-rate maximization, and a deterministic synthetic-network generator.

All matrices are dense numpy arrays; rates are natural-log units
(nats); indices in returned structures are 0-based.
"""

from ._urt import (
    conjecture,
    convexity_probe,
    det2_screen,
    eigenpair,
    feasible,
    generate_scenario,
    is_inverse_z,
    min_shift,
    norm_eval,
    radial_boundary,
    radius,
    rate_membership,
    recover_power,
    sample_boundary,
    sinr_membership,
    spectral_radius,
    sumrate,
    zcompat,
)

__all__ = [
    "conjecture",
    "convexity_probe",
    "det2_screen",
    "eigenpair",
    "feasible",
    "generate_scenario",
    "is_inverse_z",
    "min_shift",
    "norm_eval",
    "radial_boundary",
    "radius",
    "rate_membership",
    "recover_power",
    "sample_boundary",
    "sinr_membership",
    "spectral_radius",
    "sumrate",
    "zcompat",
]

__version__ = "0.1.0"
