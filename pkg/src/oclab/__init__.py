"""Exact q-expansion tools for p-adic overconvergence of Eisenstein quotients."""

from .arith import INF, ParameterError, bernoulli, padic_val, sigma_power
from .eisenstein import Params, eisenstein_series, estar, lift_F, params
from .qseries import QSeries, apply_U, apply_V, eta_quotient_fp, invert, min_val

__version__ = "0.1.0"

__all__ = [
    "INF", "ParameterError", "bernoulli", "padic_val", "sigma_power",
    "Params", "eisenstein_series", "estar", "lift_F", "params",
    "QSeries", "apply_U", "apply_V", "eta_quotient_fp", "invert", "min_val",
]
