"""Focused weighted-average least squares estimation.

Thin Python facade over the compiled core: semi-orthogonalization of the
auxiliary regressors, plug-in AMSE weight selection on the unit box,
competing model-averaging estimators, prior-based shrinkage weights, and
the Monte Carlo designs.
"""

from ._core import (
    ConfigError,
    DataError,
    NumericError,
    PriorFamily,
    amse_quadratic,
    estimate,
    gen_basic,
    gen_irf,
    minimize_box,
    prior_weight,
    risk_basic,
    scalar_optimal_weight,
    semi_orthogonalize,
)

__all__ = [
    "ConfigError",
    "DataError",
    "NumericError",
    "PriorFamily",
    "amse_quadratic",
    "estimate",
    "gen_basic",
    "gen_irf",
    "minimize_box",
    "prior_weight",
    "risk_basic",
    "scalar_optimal_weight",
    "semi_orthogonalize",
]

__version__ = "1.0.0"
