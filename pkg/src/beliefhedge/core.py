"""Events, beliefs, neo-additive decision weights, and the hedge identities.

The measurement design partitions the value of a reference investment at a
fixed horizon into three singular events (low / medium / high) and bets on
those together with their three complements.  Because complementary
subjective probabilities sum to one, averaging over the six events makes the
unknown beliefs cancel, which is what lets the two attitude indices be read
off the matching probabilities directly:

* aversion  = 1/2 - mean of the six matching probabilities
* sensitivity = (sum over composite events) - (sum over singular events)

Both identities are exact when matching probabilities equal the unclipped
linear decision weight of the true beliefs.  Clamping to [0, 1] is applied
only when producing decision weights; the indices themselves are defined on
the unclipped linear parameters so the algebra stays exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

SINGULAR_EVENTS = ("low", "medium", "high")
COMPOSITE_EVENTS = ("medium_or_high", "low_or_high", "low_or_medium")
#: Canonical ordering used everywhere arrays are exchanged: the three
#: singular events followed by their complements in matching order.
EVENT_ORDER = SINGULAR_EVENTS + COMPOSITE_EVENTS

COMPLEMENT = {
    "low": "medium_or_high",
    "medium": "low_or_high",
    "high": "low_or_medium",
    "medium_or_high": "low",
    "low_or_high": "medium",
    "low_or_medium": "high",
}

_COMPOSITE_MEMBERS = {
    "medium_or_high": ("medium", "high"),
    "low_or_high": ("low", "high"),
    "low_or_medium": ("low", "medium"),
}

_SIMPLEX_TOL = 1e-12


@dataclass(frozen=True)
class EventPartition:
    """Three-way partition of the investment's final value.

    ``cutoffs`` are the two thresholds separating low / medium / high
    outcomes (currency units of the underlying investment).
    """

    cutoffs: tuple[float, float] = (950.0, 1100.0)
    stake_text: str = "20 euros"

    def __post_init__(self) -> None:
        lo, hi = self.cutoffs
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValueError(f"cutoffs must be finite and increasing, got {self.cutoffs}")

    @property
    def singular_events(self) -> tuple[str, str, str]:
        return SINGULAR_EVENTS

    @property
    def composite_events(self) -> tuple[str, str, str]:
        return COMPOSITE_EVENTS

    @property
    def events(self) -> tuple[str, ...]:
        return EVENT_ORDER

    def complement(self, event: str) -> str:
        _check_event(event)
        return COMPLEMENT[event]

    def members(self, composite: str) -> tuple[str, str]:
        if composite not in _COMPOSITE_MEMBERS:
            raise ValueError(f"not a composite event: {composite!r}")
        return _COMPOSITE_MEMBERS[composite]

    def describe(self, event: str) -> str:
        """Human-readable description of the bet, for questionnaire screens."""
        _check_event(event)
        lo, hi = self.cutoffs
        texts = {
            "low": f"worth less than {lo:g}",
            "medium": f"worth between {lo:g} and {hi:g}",
            "high": f"worth more than {hi:g}",
            "low_or_medium": f"worth at most {hi:g}",
            "medium_or_high": f"worth at least {lo:g}",
            "low_or_high": f"worth less than {lo:g} or more than {hi:g}",
        }
        return f"the investment is {texts[event]} at the horizon"


@dataclass(frozen=True)
class BeliefVector:
    """Subjective probabilities of the three singular events in one wave."""

    p: tuple[float, float, float]
    wave: int | str = 0

    def __post_init__(self) -> None:
        if len(self.p) != 3:
            raise ValueError("belief vector needs exactly three probabilities")
        if any(x < 0 for x in self.p):
            raise ValueError(f"negative belief in {self.p}")
        if abs(sum(self.p) - 1.0) > _SIMPLEX_TOL:
            raise ValueError(f"beliefs must sum to 1, got {sum(self.p)!r}")

    def probability(self, event: str) -> float:
        """Probability of a singular or composite event under these beliefs."""
        _check_event(event)
        if event in SINGULAR_EVENTS:
            return self.p[SINGULAR_EVENTS.index(event)]
        a, b = _COMPOSITE_MEMBERS[event]
        return self.p[SINGULAR_EVENTS.index(a)] + self.p[SINGULAR_EVENTS.index(b)]

    def probabilities(self) -> dict[str, float]:
        return {e: self.probability(e) for e in EVENT_ORDER}


@dataclass(frozen=True)
class NeoAdditiveWeighting:
    """Decision weights linear in probability, clamped to [0, 1].

    ``slope`` is the sensitivity: how strongly weights track changes in
    subjective probability.  ``intercept`` shifts all weights up or down.
    """

    intercept: float
    slope: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.intercept) and math.isfinite(self.slope)):
            raise ValueError("weighting parameters must be finite")


@dataclass(frozen=True)
class AmbiguityProfile:
    """Structural parameters of one decision maker.

    ``error_sd`` is the standard deviation of the additive decision error
    between the model's weight and the behaviorally revealed matching value.
    Zero is allowed for noiseless synthetic respondents; estimation keeps a
    strictly positive floor.
    """

    aversion: float
    sensitivity: float
    error_sd: float = 0.0

    def __post_init__(self) -> None:
        if not all(map(math.isfinite, (self.aversion, self.sensitivity, self.error_sd))):
            raise ValueError("profile parameters must be finite")
        if self.sensitivity < 0:
            raise ValueError(f"sensitivity must be >= 0, got {self.sensitivity}")
        if self.error_sd < 0:
            raise ValueError(f"error_sd must be >= 0, got {self.error_sd}")

    @property
    def intercept(self) -> float:
        return intercept_from_profile(self.aversion, self.sensitivity)

    def weighting(self) -> NeoAdditiveWeighting:
        return NeoAdditiveWeighting(self.intercept, self.sensitivity)


def _check_event(event: str) -> None:
    if event not in COMPLEMENT:
        raise ValueError(f"unknown event id: {event!r} (expected one of {EVENT_ORDER})")


def _check_probability(p: float) -> None:
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"probability outside [0, 1]: {p!r}")


def linear_weight(p: float, weighting: NeoAdditiveWeighting) -> float:
    """Unclipped linear weight ``intercept + slope * p``.

    This is the quantity the attitude indices are defined on, and the latent
    value the decision-error model perturbs; it may fall outside [0, 1].
    """
    _check_probability(p)
    return weighting.intercept + weighting.slope * p


def decision_weight(p: float, weighting: NeoAdditiveWeighting) -> float:
    """Decision weight of an event with subjective probability ``p``."""
    return min(1.0, max(0.0, linear_weight(p, weighting)))


def intercept_from_profile(aversion: float, sensitivity: float) -> float:
    """Intercept implied by (aversion, sensitivity) under the six-event hedge.

    Averaging the subjective probabilities of three singular events and their
    complements always gives 1/2, so aversion = 1/2 - (intercept + slope/2),
    i.e. intercept = (1 - slope)/2 - aversion.
    """
    return (1.0 - sensitivity) / 2.0 - aversion


def profile_from_weighting(
    weighting: NeoAdditiveWeighting, error_sd: float = 0.0
) -> AmbiguityProfile:
    """Inverse of :func:`intercept_from_profile`; round-trips exactly."""
    aversion = (1.0 - weighting.slope) / 2.0 - weighting.intercept
    return AmbiguityProfile(aversion, weighting.slope, error_sd)


def weighting_from_two_points(
    p1: float, w1: float, p2: float, w2: float
) -> NeoAdditiveWeighting:
    """Fit the linear weighting through two (probability, weight) points.

    Solves intercept + slope * p = w at both points; this is the worked
    two-investor construction where implied weights at two belief levels pin
    down both attitude parameters.
    """
    _check_probability(p1)
    _check_probability(p2)
    if p1 == p2:
        raise ValueError("the two probabilities must differ")
    slope = (w2 - w1) / (p2 - p1)
    return NeoAdditiveWeighting(w1 - slope * p1, slope)


def _require_all_events(m: Mapping[str, float]) -> None:
    for event in EVENT_ORDER:
        if event not in m:
            raise ValueError(f"missing matching probability for event {event!r}")
    for event, value in m.items():
        _check_event(event)
        if not (0.0 <= value <= 1.0):
            raise ValueError(f"matching probability for {event!r} outside [0, 1]: {value!r}")


def moment_indices(m: Mapping[str, float]) -> tuple[float, float]:
    """Closed-form attitude indices from six matching probabilities.

    Returns ``(aversion, sensitivity)``.  Exact whenever ``m`` equals the
    unclipped linear weight of the true beliefs: the belief terms cancel in
    both the mean and the composite-minus-singular contrast.
    """
    _require_all_events(m)
    mean = sum(m[e] for e in EVENT_ORDER) / 6.0
    aversion = 0.5 - mean
    sensitivity = sum(m[e] for e in COMPOSITE_EVENTS) - sum(m[e] for e in SINGULAR_EVENTS)
    return aversion, sensitivity


def hedge_pair_sums(m: Mapping[str, float]) -> dict[str, float]:
    """Sum of matching probabilities for each complementary pair.

    Keyed by singular event.  A neutral, noiseless respondent produces 1.0
    for every pair; under the linear weighting every pair sums to
    ``2 * intercept + slope``.
    """
    _require_all_events(m)
    return {e: m[e] + m[COMPLEMENT[e]] for e in SINGULAR_EVENTS}


def indicates_aversion(pair_sum: float) -> bool:
    """True when a complementary pair sum below 100% flags ambiguity aversion."""
    return pair_sum < 1.0
