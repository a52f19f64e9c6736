"""Per-individual maximum likelihood from interval-censored matching data.

Each completed wave contributes six observed intervals [lb, ub] on the
latent matching values m = W + e, with W the (clamped) decision weight of
the event's subjective probability and e a normal decision error.  The
likelihood of one interval is Prob[lb <= m <= ub]; intervals touching 0 or 1
are treated as one-sided censored because the latent value lives on the
whole real line while probes stay inside [0, 1].

Structural parameters (aversion, sensitivity, error_sd) are shared across
waves; each wave carries two free belief coordinates as nuisance parameters.
Optimization runs in an unconstrained transformed space (sigmoid maps for
the box-bounded parameters, a normalized-exponential map for the simplex)
with multi-start seeded at the closed-form moment estimates, because the
clamped weight creates flat likelihood regions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
import pandas as pd
from scipy import optimize
from scipy.special import expit, log_ndtr, logit

from .core import (
    EVENT_ORDER,
    AmbiguityProfile,
    BeliefVector,
    intercept_from_profile,
    moment_indices,
)
from .elicitation import MatchingInterval

_EVENT_INDEX = {e: i for i, e in enumerate(EVENT_ORDER)}
#: Maps the three singular probabilities to all six event probabilities.
_EVENT_MATRIX = np.array(
    [
        [1.0, 0.0, 0.0],  # low
        [0.0, 1.0, 0.0],  # medium
        [0.0, 0.0, 1.0],  # high
        [0.0, 1.0, 1.0],  # medium_or_high
        [1.0, 0.0, 1.0],  # low_or_high
        [1.0, 1.0, 0.0],  # low_or_medium
    ]
)
_LOG_FLOOR = -745.0
_LOG_SQRT_2PI = 0.5 * np.log(2.0 * np.pi)


@dataclass(frozen=True)
class EstimationConfig:
    """Bounds, tolerances, and multi-start policy for one estimation."""

    aversion_limit: float = 1.0
    sensitivity_max: float = 1.5
    sigma_min: float = 0.005
    sigma_max: float = 0.5
    belief_floor: float = 0.001
    n_starts: int = 8
    jitter: float = 1.0
    gradient_tol: float = 1e-7
    step_tol: float = 1e-12
    max_iterations: int = 300
    seed: int = 0

    def __post_init__(self) -> None:
        if self.sigma_min <= 0:
            raise ValueError("sigma_min must be > 0")
        if self.belief_floor < 0:
            raise ValueError("belief_floor must be >= 0")
        if self.n_starts < 1:
            raise ValueError("n_starts must be >= 1")
        if not self.sigma_min < self.sigma_max:
            raise ValueError("sigma bounds must be increasing")


@dataclass
class EstimationResult:
    """Point estimate plus nuisance beliefs and optimizer diagnostics."""

    profile: AmbiguityProfile
    beliefs: dict[int | str, BeliefVector]
    loglik: float
    converged: bool
    boundary: dict[str, bool]
    start_dispersion: float
    n_converged_starts: int


class IntervalDataError(ValueError):
    """Malformed interval input (missing events, duplicate events, no waves)."""


@dataclass(frozen=True)
class _FlatIntervals:
    """Interval data unpacked into parallel arrays for vectorized evaluation.

    Waves keep their order of first appearance, which makes results exactly
    invariant to relabeling wave ids.
    """

    wave_ids: tuple
    lb: np.ndarray
    ub: np.ndarray
    wave_idx: np.ndarray
    event_idx: np.ndarray

    @property
    def n_waves(self) -> int:
        return len(self.wave_ids)


def _flatten(intervals: Sequence[MatchingInterval], require_complete: bool = False) -> _FlatIntervals:
    if not intervals:
        raise IntervalDataError("empty interval set")
    wave_ids: list = []
    seen: dict = {}
    lb, ub, wave_idx, event_idx = [], [], [], []
    for iv in intervals:
        if iv.wave not in seen:
            seen[iv.wave] = set()
            wave_ids.append(iv.wave)
        if iv.event in seen[iv.wave]:
            raise IntervalDataError(
                f"duplicate interval for event {iv.event!r} in wave {iv.wave!r}"
            )
        seen[iv.wave].add(iv.event)
        lb.append(iv.lb)
        ub.append(iv.ub)
        wave_idx.append(wave_ids.index(iv.wave))
        event_idx.append(_EVENT_INDEX[iv.event])
    if require_complete:
        for wave, events in seen.items():
            missing = [e for e in EVENT_ORDER if e not in events]
            if missing:
                raise IntervalDataError(f"wave {wave!r} is missing events {missing}")
    return _FlatIntervals(
        tuple(wave_ids),
        np.asarray(lb, dtype=float),
        np.asarray(ub, dtype=float),
        np.asarray(wave_idx),
        np.asarray(event_idx),
    )


def _log_interval_prob(a, b):
    """log P(a < Z < b) for standard normal Z; either side may be infinite.

    Reflects into the lower tail where ``log_ndtr`` is accurate, and floors
    the result so degenerate parameter points stay finite for the optimizer.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    with np.errstate(invalid="ignore"):
        swap = (a + b) > 0  # nan (doubly censored) compares False
    a2 = np.where(swap, -b, a)
    b2 = np.where(swap, -a, b)
    la = log_ndtr(a2)
    lb = log_ndtr(b2)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = lb + np.log1p(-np.exp(la - lb))
    out = np.where(np.isnan(out), _LOG_FLOOR, out)
    return np.maximum(out, _LOG_FLOOR)


def _log_pdf(z):
    out = np.full(np.shape(z), -np.inf)
    finite = np.isfinite(z)
    zf = np.asarray(z)[finite]
    out[finite] = -0.5 * zf * zf - _LOG_SQRT_2PI
    return out


def _loglik_core(
    aversion: float,
    sensitivity: float,
    sigma: float,
    beliefs: np.ndarray,
    flat: _FlatIntervals,
    want_grad: bool,
):
    """Log-likelihood (and optionally its gradient) on flattened intervals.

    ``beliefs`` is (n_waves, 3).  The gradient is with respect to (aversion,
    sensitivity, sigma) and the full belief matrix treated as unconstrained.
    """
    intercept = intercept_from_profile(aversion, sensitivity)
    rows = _EVENT_MATRIX[flat.event_idx]  # (N, 3)
    event_p = np.einsum("nj,nj->n", beliefs[flat.wave_idx], rows)
    raw = intercept + sensitivity * event_p
    weight = np.clip(raw, 0.0, 1.0)
    interior = (raw > 0.0) & (raw < 1.0)

    a = np.where(flat.lb <= 0.0, -np.inf, (flat.lb - weight) / sigma)
    b = np.where(flat.ub >= 1.0, np.inf, (flat.ub - weight) / sigma)
    logp = _log_interval_prob(a, b)
    total = float(np.sum(logp))
    if not want_grad:
        return total, None

    # phi(z)/P ratios in log space; exponent capped so flat regions stay finite
    ratio_a = np.exp(np.minimum(_log_pdf(a) - logp, 30.0))
    ratio_b = np.exp(np.minimum(_log_pdf(b) - logp, 30.0))
    za = np.where(np.isfinite(a), a, 0.0)
    zb = np.where(np.isfinite(b), b, 0.0)

    dl_dw = (ratio_a - ratio_b) / sigma
    dl_dsigma = np.sum((za * ratio_a - zb * ratio_b) / sigma)
    dw = dl_dw * interior
    g_aversion = float(np.sum(dw * (-1.0)))
    g_sensitivity = float(np.sum(dw * (event_p - 0.5)))
    g_beliefs = np.zeros_like(beliefs)
    np.add.at(g_beliefs, flat.wave_idx, (dw * sensitivity)[:, None] * rows)
    return total, (g_aversion, g_sensitivity, float(dl_dsigma), g_beliefs)


def _belief_matrix(
    beliefs: Mapping[int | str, BeliefVector] | Iterable[BeliefVector], flat: _FlatIntervals
) -> np.ndarray:
    if isinstance(beliefs, Mapping):
        rows = {w: np.asarray(v.p, dtype=float) for w, v in beliefs.items()}
    else:
        rows = {v.wave: np.asarray(v.p, dtype=float) for v in beliefs}
    missing = [w for w in flat.wave_ids if w not in rows]
    if missing:
        raise ValueError(f"no beliefs supplied for waves {missing}")
    return np.array([rows[w] for w in flat.wave_ids])


def interval_loglik(
    profile: AmbiguityProfile,
    beliefs: Mapping[int | str, BeliefVector] | Iterable[BeliefVector],
    intervals: Sequence[MatchingInterval],
) -> float:
    """Sum of log interval probabilities under the censored normal model."""
    if profile.error_sd <= 0:
        raise ValueError("error_sd must be > 0 for likelihood evaluation")
    flat = _flatten(intervals)
    b = _belief_matrix(beliefs, flat)
    total, _ = _loglik_core(profile.aversion, profile.sensitivity, profile.error_sd, b, flat, False)
    return total


def interval_loglik_gradient(
    profile: AmbiguityProfile,
    beliefs: Mapping[int | str, BeliefVector] | Iterable[BeliefVector],
    intervals: Sequence[MatchingInterval],
) -> tuple[float, float, float, dict[int | str, np.ndarray]]:
    """Analytic gradient of :func:`interval_loglik`.

    Returns (d/d aversion, d/d sensitivity, d/d sigma, per-wave belief
    gradients).  Belief gradients are reduced to the two free coordinates
    under the convention p3 = 1 - p1 - p2.
    """
    flat = _flatten(intervals)
    b = _belief_matrix(beliefs, flat)
    _, grad = _loglik_core(
        profile.aversion, profile.sensitivity, profile.error_sd, b, flat, True
    )
    g_av, g_s, g_sigma, g_beliefs = grad
    reduced = {
        w: np.array([g_beliefs[i, 0] - g_beliefs[i, 2], g_beliefs[i, 1] - g_beliefs[i, 2]])
        for i, w in enumerate(flat.wave_ids)
    }
    return g_av, g_s, g_sigma, reduced


# ---------------------------------------------------------------------------
# Unconstrained reparameterization
# ---------------------------------------------------------------------------


class _Transform:
    """Bijection between the box/simplex parameter space and R^(3 + 2W)."""

    def __init__(self, config: EstimationConfig, n_waves: int) -> None:
        self.c = config
        self.n_waves = n_waves

    @property
    def size(self) -> int:
        return 3 + 2 * self.n_waves

    def to_params(self, u: np.ndarray):
        c = self.c
        aversion = -c.aversion_limit + 2 * c.aversion_limit * expit(u[0])
        sensitivity = c.sensitivity_max * expit(u[1])
        sigma = c.sigma_min + (c.sigma_max - c.sigma_min) * expit(u[2])
        logits = u[3:].reshape(self.n_waves, 2)
        z = np.column_stack([logits, np.zeros(self.n_waves)])
        z = z - z.max(axis=1, keepdims=True)
        q = np.exp(z)
        q /= q.sum(axis=1, keepdims=True)
        beliefs = c.belief_floor + (1.0 - 3.0 * c.belief_floor) * q
        return aversion, sensitivity, sigma, beliefs, q

    def from_params(self, aversion, sensitivity, sigma, beliefs) -> np.ndarray:
        c = self.c
        eps = 1e-6

        def _squash(x, lo, hi):
            frac = np.clip((x - lo) / (hi - lo), eps, 1 - eps)
            return logit(frac)

        u = np.empty(self.size)
        u[0] = _squash(aversion, -c.aversion_limit, c.aversion_limit)
        u[1] = _squash(sensitivity, 0.0, c.sensitivity_max)
        u[2] = _squash(sigma, c.sigma_min, c.sigma_max)
        span = 1.0 - 3.0 * c.belief_floor
        for i, p in enumerate(np.atleast_2d(beliefs)):
            q = np.clip((np.asarray(p) - c.belief_floor) / span, 1e-9, None)
            u[3 + 2 * i] = np.log(q[0] / q[2])
            u[4 + 2 * i] = np.log(q[1] / q[2])
        return u

    def negloglik_and_grad(self, u: np.ndarray, flat: _FlatIntervals):
        c = self.c
        aversion, sensitivity, sigma, beliefs, q = self.to_params(u)
        total, grad = _loglik_core(aversion, sensitivity, sigma, beliefs, flat, True)
        g_av, g_s, g_sigma, g_beliefs = grad
        e0, e1, e2 = expit(u[0]), expit(u[1]), expit(u[2])
        gu = np.empty(self.size)
        gu[0] = g_av * 2 * c.aversion_limit * e0 * (1 - e0)
        gu[1] = g_s * c.sensitivity_max * e1 * (1 - e1)
        gu[2] = g_sigma * (c.sigma_max - c.sigma_min) * e2 * (1 - e2)
        span = 1.0 - 3.0 * c.belief_floor
        for i in range(self.n_waves):
            gp = g_beliefs[i]
            qi = q[i]
            # softmax jacobian for logits (a, b, 0)
            inner = float(gp @ qi)
            gu[3 + 2 * i] = span * qi[0] * (gp[0] - inner)
            gu[4 + 2 * i] = span * qi[1] * (gp[1] - inner)
        return -total, -gu


# ---------------------------------------------------------------------------
# Starting values
# ---------------------------------------------------------------------------


def _moment_start(flat: _FlatIntervals, config: EstimationConfig):
    """Closed-form start: moment indices on midpoints, beliefs by inversion."""
    mids_all = 0.5 * (flat.lb + flat.ub)
    mids = np.full((flat.n_waves, 6), 0.5)
    mids[flat.wave_idx, flat.event_idx] = mids_all
    per_wave = [moment_indices(dict(zip(EVENT_ORDER, row))) for row in mids]
    aversion = float(np.clip(np.mean([x[0] for x in per_wave]), -0.95 * config.aversion_limit,
                             0.95 * config.aversion_limit))
    sensitivity = float(np.clip(np.mean([x[1] for x in per_wave]), 0.02 * config.sensitivity_max,
                                0.98 * config.sensitivity_max))
    intercept = intercept_from_profile(aversion, sensitivity)
    beliefs = np.empty((flat.n_waves, 3))
    resid = []
    for i, mid in enumerate(mids):
        if sensitivity >= 0.2:
            p = (mid[:3] - intercept) / sensitivity
            p = np.clip(p, 0.02, None)
            p = p / p.sum()
        else:
            p = np.array([1 / 3, 1 / 3, 1 / 3])
        beliefs[i] = p
        predicted = intercept + sensitivity * (_EVENT_MATRIX @ p)
        resid.append(mid - predicted)
    rms = float(np.sqrt(np.mean(np.square(np.concatenate(resid)))))
    sigma = float(np.clip(max(rms, 0.02), 1.2 * config.sigma_min, 0.9 * config.sigma_max))
    return aversion, sensitivity, sigma, beliefs


# ---------------------------------------------------------------------------
# Estimation driver
# ---------------------------------------------------------------------------


def _candidate_key(loglik: float, params: np.ndarray):
    """Ties in the objective break toward smaller sigma, then lexicographic."""
    return (-loglik, params[2], *params[:2], *params[3:])


def estimate_individual(
    intervals: Sequence[MatchingInterval],
    config: EstimationConfig | None = None,
) -> EstimationResult:
    """Maximize the pooled interval likelihood for one respondent.

    Structural parameters are shared across waves; beliefs are free per wave.
    Multi-start begins at the moment estimates with jittered restarts; the
    best converged optimum wins, with deterministic tie-breaking.  If no
    start converges the best-found point is returned with ``converged=False``.
    """
    config = config or EstimationConfig()
    flat = _flatten(intervals, require_complete=True)
    transform = _Transform(config, flat.n_waves)

    u0 = transform.from_params(*_moment_start(flat, config))
    rng = np.random.default_rng(config.seed)
    candidates = []  # (loglik, u_solution, success)
    for k in range(config.n_starts):
        u_start = u0 if k == 0 else u0 + rng.normal(0.0, config.jitter, size=u0.size)
        res = optimize.minimize(
            transform.negloglik_and_grad,
            u_start,
            args=(flat,),
            jac=True,
            method="L-BFGS-B",
            options={
                "maxiter": config.max_iterations,
                "ftol": config.step_tol,
                "gtol": config.gradient_tol,
            },
        )
        candidates.append((-float(res.fun), res.x, bool(res.success)))

    converged = [c for c in candidates if c[2]]
    pool = converged or candidates
    objective_values = [c[0] for c in converged]

    def sort_key(cand):
        ll, u, _ = cand
        aversion, sensitivity, sigma, beliefs, _ = transform.to_params(u)
        stacked = np.concatenate([[aversion, sensitivity, sigma], beliefs.ravel()])
        return _candidate_key(round(ll, 9), stacked)

    _, best_u, _ = min(pool, key=sort_key)
    aversion, sensitivity, sigma, beliefs, _ = transform.to_params(best_u)

    # Snap parameters that the sigmoid map cannot reach exactly onto their
    # bounds when doing so does not cost likelihood; flat or monotone edges
    # (e.g. a respondent who always chose the bet) end up pinned and flagged.
    def _ll(av, se, sg, bel):
        return _loglik_core(av, se, sg, bel, flat, False)[0]

    current = _ll(aversion, sensitivity, sigma, beliefs)
    c = config
    for name, bounds in (
        ("aversion", (-c.aversion_limit, c.aversion_limit)),
        ("sensitivity", (0.0, c.sensitivity_max)),
        ("error_sd", (c.sigma_min, c.sigma_max)),
    ):
        for bound in bounds:
            trial = {
                "aversion": (bound, sensitivity, sigma),
                "sensitivity": (aversion, bound, sigma),
                "error_sd": (aversion, sensitivity, bound),
            }[name]
            if _ll(*trial, beliefs) >= current - 1e-9:
                aversion, sensitivity, sigma = trial
                current = _ll(aversion, sensitivity, sigma, beliefs)
                break

    final_ll = _ll(aversion, sensitivity, sigma, beliefs)
    tol = {
        "aversion": max(1e-9, 2e-6 * c.aversion_limit),
        "sensitivity": max(1e-9, 1e-6 * c.sensitivity_max),
        "error_sd": max(1e-9, 1e-6 * (c.sigma_max - c.sigma_min)),
    }
    boundary = {
        "aversion": min(abs(aversion - c.aversion_limit), abs(aversion + c.aversion_limit))
        <= tol["aversion"],
        "sensitivity": min(abs(sensitivity), abs(sensitivity - c.sensitivity_max))
        <= tol["sensitivity"],
        "error_sd": min(abs(sigma - c.sigma_min), abs(sigma - c.sigma_max)) <= tol["error_sd"],
    }
    dispersion = float(max(objective_values) - min(objective_values)) if len(objective_values) > 1 else 0.0
    belief_vectors = {
        w: BeliefVector(tuple(np.asarray(beliefs[i]) / np.sum(beliefs[i])), wave=w)
        for i, w in enumerate(flat.wave_ids)
    }
    return EstimationResult(
        profile=AmbiguityProfile(float(aversion), float(sensitivity), float(sigma)),
        beliefs=belief_vectors,
        loglik=float(final_ll),
        converged=bool(converged),
        boundary=boundary,
        start_dispersion=dispersion,
        n_converged_starts=len(converged),
    )


def recover_population(
    dataset: Mapping[str, Sequence[MatchingInterval]],
    config: EstimationConfig | None = None,
    truths: Mapping[str, AmbiguityProfile] | None = None,
) -> tuple[dict[str, EstimationResult], pd.DataFrame]:
    """Independent per-respondent estimation over a whole dataset.

    Per-respondent failures are recorded in the output frame instead of
    aborting the batch.  When known truths are supplied the frame carries
    absolute errors so recovery experiments can summarize directly.
    """
    config = config or EstimationConfig()
    results: dict[str, EstimationResult] = {}
    rows = []
    for respondent, intervals in dataset.items():
        row: dict = {"respondent": respondent}
        try:
            result = estimate_individual(intervals, config)
        except (IntervalDataError, ValueError) as exc:
            row.update({"error": str(exc), "converged": False})
            rows.append(row)
            continue
        results[respondent] = result
        row.update(
            {
                "aversion": result.profile.aversion,
                "sensitivity": result.profile.sensitivity,
                "error_sd": result.profile.error_sd,
                "loglik": result.loglik,
                "converged": result.converged,
                "boundary": ",".join(k for k, v in result.boundary.items() if v),
                "start_dispersion": result.start_dispersion,
                "error": "",
            }
        )
        if truths is not None and respondent in truths:
            truth = truths[respondent]
            row["abs_err_aversion"] = abs(result.profile.aversion - truth.aversion)
            row["abs_err_sensitivity"] = abs(result.profile.sensitivity - truth.sensitivity)
        rows.append(row)
    return results, pd.DataFrame(rows)


def recovery_summary(frame: pd.DataFrame) -> dict[str, float]:
    """Mean absolute errors of a recovery run against known truths."""
    ok = frame[frame["error"] == ""]
    return {
        "mae_aversion": float(ok["abs_err_aversion"].mean()),
        "mae_sensitivity": float(ok["abs_err_sensitivity"].mean()),
        "n": int(len(ok)),
    }


def grid_search_oracle(
    intervals: Sequence[MatchingInterval],
    config: EstimationConfig | None = None,
    grid_shape: tuple[int, int, int] = (50, 50, 20),
) -> dict[str, float]:
    """Brute-force likelihood maximization on a dense parameter grid.

    Beliefs are pinned at the moment-initialized values so the search runs
    over (aversion, sensitivity, error_sd) only.  This is the independent
    pilot oracle used to calibrate recovery expectations for the optimizer;
    it shares only the likelihood kernel with the estimation path.
    """
    config = config or EstimationConfig()
    flat = _flatten(intervals, require_complete=True)
    _, _, _, beliefs = _moment_start(flat, config)

    n_a, n_s, n_g = grid_shape
    aa = np.linspace(-config.aversion_limit, config.aversion_limit, n_a)
    ss = np.linspace(0.0, config.sensitivity_max, n_s)
    gg = np.linspace(config.sigma_min, config.sigma_max, n_g)

    event_p = np.einsum(
        "nj,nj->n", beliefs[flat.wave_idx], _EVENT_MATRIX[flat.event_idx]
    )  # (N,)
    intercept = (1.0 - ss[None, :]) / 2.0 - aa[:, None]  # (A, S)
    raw = intercept[:, :, None] + ss[None, :, None] * event_p[None, None, :]
    weight = np.clip(raw, 0.0, 1.0)[:, :, None, :]  # (A, S, 1, N)
    sigma = gg[None, None, :, None]
    a = np.where(flat.lb <= 0.0, -np.inf, (flat.lb - weight) / sigma)
    b = np.where(flat.ub >= 1.0, np.inf, (flat.ub - weight) / sigma)
    logp = _log_interval_prob(a, b).sum(axis=3)  # (A, S, G)
    best = int(np.argmax(logp))
    ia, is_, ig = np.unravel_index(best, logp.shape)
    return {
        "aversion": float(aa[ia]),
        "sensitivity": float(ss[is_]),
        "error_sd": float(gg[ig]),
        "loglik": float(logp[ia, is_, ig]),
    }


def results_to_frame(results: Mapping[str, EstimationResult]) -> pd.DataFrame:
    """Delimited-table view of estimation results (one row per respondent)."""
    rows = []
    for respondent, r in results.items():
        rows.append(
            {
                "respondent": respondent,
                "aversion": r.profile.aversion,
                "sensitivity": r.profile.sensitivity,
                "error_sd": r.profile.error_sd,
                "loglik": r.loglik,
                "converged": r.converged,
                "boundary": ",".join(k for k, v in r.boundary.items() if v),
            }
        )
    return pd.DataFrame(rows)
