"""Discrete-choice estimation and inference for the study pipeline."""

from .attenuation import AttenuationConfig, AttenuationCurve, attenuation_monte_carlo
from .design import RegressionSpec, build_design
from .mnl import MnlFit, amemiya_compare, fit_mnl
from .probit import ProbitFit, SeparationError, average_marginal_effects, fit_probit
from .stats import correlation_matrix, pearson_with_p, standardize

__all__ = [
    "AttenuationConfig",
    "AttenuationCurve",
    "MnlFit",
    "ProbitFit",
    "RegressionSpec",
    "SeparationError",
    "amemiya_compare",
    "attenuation_monte_carlo",
    "average_marginal_effects",
    "build_design",
    "correlation_matrix",
    "fit_mnl",
    "fit_probit",
    "pearson_with_p",
    "standardize",
]
