"""Belief-hedging measurement of ambiguity attitudes, end to end.

Layers, bottom up:

* :mod:`beliefhedge.core` - events, beliefs, neo-additive weights, and the
  closed-form hedge identities for the two attitude indices.
* :mod:`beliefhedge.elicitation` - adaptive bisection questionnaire with the
  incentive-compatible payout pre-commitment.
* :mod:`beliefhedge.simulate` - synthetic respondents for recovery studies.
* :mod:`beliefhedge.estimate` - per-individual interval-censored MLE.
* :mod:`beliefhedge.econ` - probit / multinomial logit, marginal effects,
  robust covariance, correlations, attenuation Monte Carlo.
* :mod:`beliefhedge.pipeline` - classification, covariates, filters, and the
  end-to-end synthetic study.
* :mod:`beliefhedge.tables` - publication-style table emission with parsers.
* :mod:`beliefhedge.service` - HTTP session service for the browser client.
"""

__version__ = "0.1.0"

from .core import (
    AmbiguityProfile,
    BeliefVector,
    EventPartition,
    NeoAdditiveWeighting,
    decision_weight,
    hedge_pair_sums,
    indicates_aversion,
    intercept_from_profile,
    linear_weight,
    moment_indices,
    profile_from_weighting,
    weighting_from_two_points,
)
from .elicitation import (
    ChoiceRecord,
    ElicitationSession,
    MatchingInterval,
    run_session,
    start_session,
)
from .estimate import (
    EstimationConfig,
    EstimationResult,
    estimate_individual,
    grid_search_oracle,
    interval_loglik,
    interval_loglik_gradient,
    recover_population,
)
from .simulate import PopulationSpec, SyntheticAgent, TruncatedNormal, sample_population, simulate_panel

__all__ = [
    "AmbiguityProfile",
    "BeliefVector",
    "ChoiceRecord",
    "ElicitationSession",
    "EstimationConfig",
    "EstimationResult",
    "EventPartition",
    "MatchingInterval",
    "NeoAdditiveWeighting",
    "PopulationSpec",
    "SyntheticAgent",
    "TruncatedNormal",
    "decision_weight",
    "estimate_individual",
    "grid_search_oracle",
    "hedge_pair_sums",
    "indicates_aversion",
    "intercept_from_profile",
    "interval_loglik",
    "interval_loglik_gradient",
    "linear_weight",
    "moment_indices",
    "profile_from_weighting",
    "recover_population",
    "run_session",
    "sample_population",
    "simulate_panel",
    "start_session",
    "weighting_from_two_points",
]
