"""High quantile estimation with Generalized Weibull tail approximations.

The package covers the Box-Cox building blocks (``core``), reference tail
models (``models``), deterministic penultimate approximations (``approx``),
the order-statistic estimators (``estimators``), their Gaussian limits
(``asymptotics``) and a Monte Carlo laboratory with a CLI (``simlab``).
"""

from .approx import PenultimateApprox, a_gw, a_loggw, anchor, approx_eval, g_gw, g_loggw, nu, prob_error
from .core import h, h_inv, kappa
from .errors import (
    ConfigurationError,
    DataFileError,
    DegenerateSpacing,
    DomainError,
    HighQuantError,
    NonpositiveThreshold,
    NumericError,
)
from .estimators import (
    KSchedule,
    TailEstimate,
    estimate,
    estimate_gp,
    estimate_gw,
    estimate_loggw,
    make_schedule,
    quantile_at,
    default_schedule,
    stability_profile,
)
from .models import MODEL_NAMES, TailModel, make_model

__version__ = "0.1.0"

__all__ = [
    "PenultimateApprox", "a_gw", "a_loggw", "anchor", "approx_eval", "g_gw", "g_loggw", "nu",
    "prob_error", "h", "h_inv", "kappa", "ConfigurationError", "DataFileError",
    "DegenerateSpacing", "DomainError", "HighQuantError", "NonpositiveThreshold", "NumericError",
    "KSchedule", "TailEstimate", "estimate", "estimate_gp", "estimate_gw", "estimate_loggw",
    "make_schedule", "quantile_at", "default_schedule", "stability_profile", "MODEL_NAMES",
    "TailModel", "make_model",
]
