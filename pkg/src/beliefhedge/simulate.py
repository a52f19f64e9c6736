"""Synthetic respondents with known structural parameters.

An agent's latent matching value for an event is the unclipped linear weight
of its subjective probability plus a normal decision error drawn once per
(event, wave).  Answering every bisection question in a wave against that
single realized value is exactly the data-generating process the
interval-censored likelihood assumes; it also produces the boundary
intervals and set-monotonicity violations seen in real respondents, because
the latent value is free to leave [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .core import (
    EVENT_ORDER,
    AmbiguityProfile,
    BeliefVector,
    EventPartition,
    linear_weight,
)
from .elicitation import MatchingInterval, SessionResult, run_session, start_session


@dataclass(frozen=True)
class TruncatedNormal:
    """Sampling distribution for one structural parameter."""

    mean: float
    sd: float
    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not self.sd > 0:
            raise ValueError(f"sd must be positive, got {self.sd}")
        if not self.lower < self.upper:
            raise ValueError(f"degenerate truncation [{self.lower}, {self.upper}]")

    def sample(self, rng: np.random.Generator, size: int | None = None):
        a = (self.lower - self.mean) / self.sd
        b = (self.upper - self.mean) / self.sd
        return stats.truncnorm.rvs(a, b, loc=self.mean, scale=self.sd, size=size, random_state=rng)


@dataclass(frozen=True)
class PopulationSpec:
    """How to draw a heterogeneous population of synthetic agents.

    The parameter distributions are implementer defaults for recovery
    experiments, not field-calibrated values.  Beliefs are Dirichlet draws
    (normalized positive gammas), independent across waves.
    """

    count: int
    aversion: TruncatedNormal = TruncatedNormal(0.15, 0.25, -1.0, 1.0)
    sensitivity: TruncatedNormal = TruncatedNormal(0.6, 0.3, 0.0, 1.5)
    error_sd: TruncatedNormal = TruncatedNormal(0.1, 0.05, 0.005, 0.5)
    belief_alpha: tuple[float, float, float] = (2.0, 2.0, 2.0)
    waves: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError("count must be >= 0")
        if self.waves < 1:
            raise ValueError("waves must be >= 1")
        if any(a <= 0 for a in self.belief_alpha):
            raise ValueError("belief_alpha entries must be positive")


class SyntheticAgent:
    """One simulated decision maker with a fixed profile and per-wave beliefs.

    The realized matching value m(event, wave) is drawn at construction and
    reused for every question of that (event, wave), so a wave's transcript is
    internally consistent with a single latent value.
    """

    def __init__(
        self,
        agent_id: str,
        profile: AmbiguityProfile,
        beliefs: dict[int | str, BeliefVector],
        rng: np.random.Generator,
    ) -> None:
        self.agent_id = agent_id
        self.profile = profile
        self.beliefs = beliefs
        weighting = profile.weighting()
        self.m: dict[tuple[int | str, str], float] = {}
        for wave in sorted(beliefs, key=str):
            belief = beliefs[wave]
            for event in EVENT_ORDER:
                noise = profile.error_sd * rng.standard_normal() if profile.error_sd > 0 else 0.0
                self.m[(wave, event)] = linear_weight(belief.probability(event), weighting) + noise

    def answer(self, event: str, wave: int | str, q: float) -> bool:
        """True iff the agent prefers the ambiguous bet to the lottery at q.

        Exact ties resolve to the lottery (probability zero under the
        continuous error model).
        """
        if not (0.0 < q < 1.0):
            raise ValueError(f"offered lottery probability must be in (0, 1), got {q}")
        key = (wave, event)
        if key not in self.m:
            raise ValueError(f"unknown event/wave for this agent: {key}")
        return self.m[key] > q

    def responder(self, wave: int | str):
        """Adapter with the (event, q) signature the elicitation engine drives."""
        return lambda event, q: self.answer(event, wave, q)


def sample_population(spec: PopulationSpec) -> list[SyntheticAgent]:
    """Reproducible population draw; each agent owns an independent stream."""
    root = np.random.SeedSequence(spec.seed)
    agents: list[SyntheticAgent] = []
    for i, child in enumerate(root.spawn(spec.count)):
        rng = np.random.default_rng(child)
        profile = AmbiguityProfile(
            aversion=float(spec.aversion.sample(rng)),
            sensitivity=float(spec.sensitivity.sample(rng)),
            error_sd=float(spec.error_sd.sample(rng)),
        )
        beliefs = {
            wave: BeliefVector(tuple(rng.dirichlet(spec.belief_alpha)), wave=wave)
            for wave in range(1, spec.waves + 1)
        }
        agents.append(SyntheticAgent(f"agent-{i:04d}", profile, beliefs, rng))
    return agents


@dataclass
class Panel:
    """Simulated interval dataset grouped by respondent, with known truths."""

    intervals: dict[str, list[MatchingInterval]]
    truths: dict[str, AmbiguityProfile] = field(default_factory=dict)
    results: dict[tuple[str, int | str], SessionResult] = field(default_factory=dict)

    def to_jsonl(self) -> str:
        from .elicitation import transcript_lines

        chunks = []
        for (respondent, wave), result in sorted(self.results.items(), key=lambda kv: (kv[0][0], str(kv[0][1]))):
            chunks.extend(transcript_lines(respondent, result, wave))
        return "\n".join(chunks) + "\n"


def simulate_panel(
    agents: list[SyntheticAgent],
    waves: int,
    depth: int,
    seed: int = 0,
    partition: EventPartition | None = None,
) -> Panel:
    """Run every agent through a depth-d session per wave.

    Session seeds derive from (seed, agent index, wave index), so redrawing
    with the same seed reproduces the dataset byte for byte.
    """
    if waves < 1:
        raise ValueError("waves must be >= 1")
    if partition is None:
        partition = EventPartition()
    panel = Panel(intervals={}, truths={})
    root = np.random.SeedSequence(seed)
    for i, agent in enumerate(agents):
        agent_seq = np.random.SeedSequence(entropy=root.entropy, spawn_key=(i,))
        panel.truths[agent.agent_id] = agent.profile
        collected: list[MatchingInterval] = []
        for w, wave_seq in enumerate(agent_seq.spawn(waves), start=1):
            if w not in agent.beliefs:
                raise ValueError(f"agent {agent.agent_id} has no beliefs for wave {w}")
            session_seed = int(wave_seq.generate_state(1, dtype=np.uint64)[0] >> 1)
            session = start_session(
                partition, depth=depth, seed=session_seed, respondent=agent.agent_id, wave=w
            )
            result = run_session(session, agent.responder(w))
            collected.extend(result.intervals)
            panel.results[(agent.agent_id, w)] = result
        panel.intervals[agent.agent_id] = collected
    return panel


def neutral_agent(
    beliefs_by_wave: dict[int | str, tuple[float, float, float]],
    error_sd: float = 0.0,
    seed: int = 0,
    agent_id: str = "neutral",
) -> SyntheticAgent:
    """Convenience constructor for an ambiguity-neutral test respondent."""
    profile = AmbiguityProfile(0.0, 1.0, error_sd)
    beliefs = {w: BeliefVector(p, wave=w) for w, p in beliefs_by_wave.items()}
    return SyntheticAgent(agent_id, profile, beliefs, np.random.default_rng(seed))
