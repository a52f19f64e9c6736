"""Interval likelihood and the per-individual maximum-likelihood estimator."""

import math

import numpy as np
import pytest

from beliefhedge.core import AmbiguityProfile, BeliefVector, EVENT_ORDER, EventPartition
from beliefhedge.elicitation import MatchingInterval, run_session, start_session
from beliefhedge.estimate import (
    EstimationConfig,
    IntervalDataError,
    estimate_individual,
    grid_search_oracle,
    interval_loglik,
    interval_loglik_gradient,
    recover_population,
)
from beliefhedge.simulate import PopulationSpec, neutral_agent, sample_population, simulate_panel

PART = EventPartition()
UNIFORM = {1: BeliefVector((1 / 3, 1 / 3, 1 / 3), wave=1)}


def full_wave(bounds_by_event, wave=1):
    return [MatchingInterval(e, wave, *bounds_by_event[e]) for e in EVENT_ORDER]


def flat_intervals(lb, ub, wave=1):
    return full_wave({e: (lb, ub) for e in EVENT_ORDER}, wave)


def agent_panel(agent, waves, depth, seed=0):
    intervals = []
    for w in waves:
        session = start_session(PART, depth=depth, seed=seed + w, respondent="a", wave=w)
        result = run_session(session, agent.responder(w))
        intervals.extend(result.intervals)
    return intervals


class TestIntervalLoglik:
    def test_fully_censored_contributes_zero(self):
        profile = AmbiguityProfile(0.1, 0.5, 0.1)
        assert interval_loglik(profile, UNIFORM, flat_intervals(0.0, 1.0)) == 0.0

    def test_textbook_unit_value(self):
        # weight exactly 0.5 at the uniform singular + one composite setup:
        # neutral profile puts W(low)=1/3; instead pin W=0.5 via beliefs
        profile = AmbiguityProfile(0.0, 1.0, 0.1)
        beliefs = {1: BeliefVector((0.5, 0.25, 0.25), wave=1)}
        intervals = [MatchingInterval("low", 1, 0.4, 0.6)]
        expected = math.log(
            0.5 * (1 + math.erf(1 / math.sqrt(2))) - 0.5 * (1 + math.erf(-1 / math.sqrt(2)))
        )
        got = interval_loglik(profile, beliefs, intervals)
        assert got == pytest.approx(expected, abs=1e-12)
        assert got == pytest.approx(math.log(0.6826894921), abs=1e-9)

    def test_never_positive(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            lb = rng.uniform(0, 0.9)
            ub = lb + rng.uniform(0.01, 1 - lb)
            profile = AmbiguityProfile(rng.uniform(-0.5, 0.5), rng.uniform(0, 1.5), rng.uniform(0.01, 0.4))
            value = interval_loglik(profile, UNIFORM, flat_intervals(round(lb, 3), round(ub, 3)))
            assert value <= 0.0
            if not (lb == 0.0 and ub == 1.0):
                assert value < 0.0

    def test_sigma_must_be_positive(self):
        with pytest.raises(ValueError):
            interval_loglik(AmbiguityProfile(0.0, 1.0, 0.0), UNIFORM, flat_intervals(0.2, 0.4))

    def test_empty_intervals_rejected(self):
        with pytest.raises(IntervalDataError):
            interval_loglik(AmbiguityProfile(0.0, 1.0, 0.1), UNIFORM, [])

    def test_missing_belief_wave_rejected(self):
        with pytest.raises(ValueError, match="wave"):
            interval_loglik(AmbiguityProfile(0.0, 1.0, 0.1), UNIFORM, flat_intervals(0.2, 0.4, wave=9))

    def test_true_parameters_beat_perturbed_on_large_panel(self):
        spec = PopulationSpec(count=30, waves=2, seed=4)
        agents = sample_population(spec)
        panel = simulate_panel(agents, waves=2, depth=6, seed=1)
        better = 0
        for agent in agents:
            truth = AmbiguityProfile(
                agent.profile.aversion, agent.profile.sensitivity, max(agent.profile.error_sd, 0.01)
            )
            shifted = AmbiguityProfile(
                float(np.clip(truth.aversion + 0.3, -1, 1)), truth.sensitivity, truth.error_sd
            )
            ll_true = interval_loglik(truth, agent.beliefs, panel.intervals[agent.agent_id])
            ll_shift = interval_loglik(shifted, agent.beliefs, panel.intervals[agent.agent_id])
            better += ll_true > ll_shift
        assert better >= 27  # decisively favors the generating parameters


class TestGradient:
    def test_matches_central_differences_at_interior_points(self):
        rng = np.random.default_rng(123)
        h = 1e-6
        checked = 0
        while checked < 20:
            profile = AmbiguityProfile(
                rng.uniform(-0.4, 0.4), rng.uniform(0.3, 1.2), rng.uniform(0.05, 0.3)
            )
            p1 = rng.dirichlet((3, 3, 3))
            p2 = rng.dirichlet((3, 3, 3))
            beliefs = {1: BeliefVector(tuple(p1), wave=1), 2: BeliefVector(tuple(p2), wave=2)}
            targets = {
                (w, e): profile.intercept
                + profile.sensitivity * BeliefVector(tuple(p), wave=w).probability(e)
                for w, p in ((1, p1), (2, p2))
                for e in EVENT_ORDER
            }
            if not all(0.05 < t < 0.95 for t in targets.values()):
                continue
            intervals = [
                MatchingInterval(
                    e,
                    w,
                    round(max(0.01, t - rng.uniform(0.05, 0.2)), 3),
                    round(min(0.99, t + rng.uniform(0.05, 0.2)), 3),
                )
                for (w, e), t in targets.items()
            ]
            checked += 1

            g_av, g_s, g_sigma, g_bel = interval_loglik_gradient(profile, beliefs, intervals)

            def ll(av=profile.aversion, s=profile.sensitivity, sg=profile.error_sd, bel=beliefs):
                return interval_loglik(AmbiguityProfile(av, s, sg), bel, intervals)

            fd_av = (ll(av=profile.aversion + h) - ll(av=profile.aversion - h)) / (2 * h)
            fd_s = (ll(s=profile.sensitivity + h) - ll(s=profile.sensitivity - h)) / (2 * h)
            fd_sg = (ll(sg=profile.error_sd + h) - ll(sg=profile.error_sd - h)) / (2 * h)
            assert g_av == pytest.approx(fd_av, rel=1e-5)
            assert g_s == pytest.approx(fd_s, rel=1e-5)
            assert g_sigma == pytest.approx(fd_sg, rel=1e-5)
            for w, p in ((1, p1), (2, p2)):
                for coord in (0, 1):
                    delta = np.zeros(3)
                    delta[coord] = h
                    delta[2] = -h
                    plus = dict(beliefs)
                    plus[w] = BeliefVector(tuple(p + delta), wave=w)
                    minus = dict(beliefs)
                    minus[w] = BeliefVector(tuple(p - delta), wave=w)
                    fd = (ll(bel=plus) - ll(bel=minus)) / (2 * h)
                    assert g_bel[w][coord] == pytest.approx(fd, rel=1e-5)


class TestEstimateIndividual:
    def test_neutral_low_noise_recovery(self):
        agent = neutral_agent({w: (0.2, 0.3, 0.5) for w in (1, 2, 3)}, error_sd=0.02, seed=3)
        intervals = agent_panel(agent, waves=(1, 2, 3), depth=6, seed=100)
        result = estimate_individual(intervals, EstimationConfig(seed=0))
        assert result.converged
        assert abs(result.profile.aversion) < 0.02
        assert abs(result.profile.sensitivity - 1.0) < 0.1

    def test_always_bet_pins_aversion_at_lower_bound(self):
        session = start_session(PART, depth=5, seed=1)
        result_session = run_session(session, lambda e, q: True)
        result = estimate_individual(list(result_session.intervals), EstimationConfig(seed=0))
        assert result.profile.aversion == -1.0
        assert result.boundary["aversion"]

    def test_wave_relabeling_invariance(self):
        agent = neutral_agent({w: (0.25, 0.35, 0.4) for w in (1, 2)}, error_sd=0.05, seed=8)
        intervals = agent_panel(agent, waves=(1, 2), depth=5, seed=40)
        relabeled = [
            MatchingInterval(iv.event, {1: "first", 2: "second"}[iv.wave], iv.lb, iv.ub)
            for iv in intervals
        ]
        a = estimate_individual(intervals, EstimationConfig(seed=0))
        b = estimate_individual(relabeled, EstimationConfig(seed=0))
        assert a.profile == b.profile
        assert a.loglik == b.loglik

    def test_reported_loglik_matches_reevaluation(self):
        agent = neutral_agent({1: (0.3, 0.3, 0.4)}, error_sd=0.08, seed=2)
        intervals = agent_panel(agent, waves=(1,), depth=5, seed=7)
        result = estimate_individual(intervals, EstimationConfig(seed=0))
        again = interval_loglik(result.profile, result.beliefs, intervals)
        assert result.loglik == pytest.approx(again, abs=1e-8)

    def test_multistart_objective_monotone_in_starts(self):
        agent = neutral_agent({1: (0.2, 0.5, 0.3)}, error_sd=0.1, seed=5)
        intervals = agent_panel(agent, waves=(1,), depth=5, seed=9)
        best = -np.inf
        for starts in (1, 2, 4, 8):
            result = estimate_individual(intervals, EstimationConfig(n_starts=starts, seed=99))
            assert result.loglik >= best - 1e-9
            best = max(best, result.loglik)

    def test_sigma_shrinks_toward_floor_with_depth_for_noiseless_agent(self):
        agent = neutral_agent({1: (0.25, 0.35, 0.4)}, error_sd=0.0, seed=0)
        sigmas = []
        for depth in (3, 5, 7):
            intervals = agent_panel(agent, waves=(1,), depth=depth, seed=21)
            result = estimate_individual(intervals, EstimationConfig(seed=0))
            sigmas.append(result.profile.error_sd)
        assert sigmas[2] <= sigmas[1] + 1e-6 <= sigmas[0] + 2e-6
        assert sigmas[2] < 0.05

    def test_incomplete_wave_rejected(self):
        intervals = flat_intervals(0.2, 0.4)[:-1]
        with pytest.raises(IntervalDataError):
            estimate_individual(intervals)

    def test_duplicate_event_rejected(self):
        intervals = flat_intervals(0.2, 0.4)
        intervals.append(MatchingInterval("low", 1, 0.1, 0.3))
        with pytest.raises(IntervalDataError):
            estimate_individual(intervals)


class TestRecoverPopulation:
    def test_empty_dataset(self):
        results, frame = recover_population({})
        assert results == {}
        assert frame.empty

    def test_failures_do_not_abort_batch(self):
        agent = neutral_agent({1: (0.3, 0.3, 0.4)}, error_sd=0.05, seed=1)
        good = agent_panel(agent, waves=(1,), depth=4, seed=3)
        dataset = {"ok": good, "broken": good[:-1]}
        results, frame = recover_population(dataset, EstimationConfig(n_starts=2, seed=0))
        assert set(results) == {"ok"}
        broken_row = frame[frame["respondent"] == "broken"].iloc[0]
        assert "missing" in broken_row["error"]

    def test_mae_reported_against_truths(self):
        spec = PopulationSpec(count=6, waves=1, seed=13)
        agents = sample_population(spec)
        panel = simulate_panel(agents, waves=1, depth=5, seed=5)
        _, frame = recover_population(
            panel.intervals, EstimationConfig(n_starts=2, seed=0), truths=panel.truths
        )
        assert "abs_err_aversion" in frame.columns
        assert (frame["abs_err_aversion"] >= 0).all()

    def test_deeper_elicitation_weakly_reduces_error(self):
        spec = PopulationSpec(count=25, waves=1, seed=17)
        agents = sample_population(spec)
        maes = []
        for depth in (3, 6):
            panel = simulate_panel(agents, waves=1, depth=depth, seed=6)
            _, frame = recover_population(
                panel.intervals, EstimationConfig(n_starts=3, seed=0), truths=panel.truths
            )
            maes.append(frame["abs_err_aversion"].mean())
        assert maes[1] <= maes[0] + 0.01


class TestGridOracle:
    def test_oracle_agrees_with_optimizer_on_clean_agent(self):
        agent = neutral_agent({1: (0.25, 0.35, 0.4)}, error_sd=0.03, seed=4)
        intervals = agent_panel(agent, waves=(1,), depth=6, seed=31)
        oracle = grid_search_oracle(intervals, EstimationConfig(seed=0))
        mle = estimate_individual(intervals, EstimationConfig(seed=0))
        # grid resolution is ~0.04 in aversion; agreement within grid spacing
        assert abs(oracle["aversion"] - mle.profile.aversion) < 0.05
        assert abs(oracle["sensitivity"] - mle.profile.sensitivity) < 0.08
        assert mle.loglik >= oracle["loglik"] - 1e-6
