"""Data ingestion, occupational classification, covariates, and filters.

Input files are plain delimited tables with a documented header schema; the
original panel provider's proprietary layout is deliberately not reproduced.

employment history (one row per respondent-year):
    respondent, year, status, employees_supervised, age, female, married,
    children, education
  status vocabulary (closed):
    employee, on_call_employee, temp_staffer            -> employee variants
    self_employed, freelancer, independent_professional -> self-employed
    incorporated_director, majority_shareholder_director-> incorporated
    unemployed, not_working                             -> not working
  education levels: below_upper_secondary, upper_secondary, tertiary

covariates (one row per respondent):
    respondent,
    risk_qual_2018, risk_ce1_2018 .. risk_ce5_2018, and the 2020 variants,
    opt1 .. opt6 (1-5 scale; reversal handled by the builder),
    num_financial_2018, num_financial_2020,
    num_probability_2018, num_probability_2020,
    num_basic_2019, num_basic_2020

Attitude estimates join on ``respondent`` from the estimator's results table.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import pandas as pd
from scipy.special import ndtr

from .econ import RegressionSpec, average_marginal_effects, fit_probit, pearson_with_p, standardize
from .estimate import EstimationConfig, recover_population
from .simulate import PopulationSpec, TruncatedNormal, sample_population, simulate_panel

EMPLOYEE_STATUSES = frozenset({"employee", "on_call_employee", "temp_staffer"})
SELF_EMPLOYED_STATUSES = frozenset({"self_employed", "freelancer", "independent_professional"})
INCORPORATED_STATUSES = frozenset({"incorporated_director", "majority_shareholder_director"})
NON_WORKING_STATUSES = frozenset({"unemployed", "not_working"})
ALL_STATUSES = EMPLOYEE_STATUSES | SELF_EMPLOYED_STATUSES | INCORPORATED_STATUSES | NON_WORKING_STATUSES

DEFAULT_WINDOW = (2018, 2021)

_PRIORITY = {"incorporated": 3, "self_employed": 2, "employee": 1, "not_working": 0}


def status_group(status: str) -> str:
    if status in INCORPORATED_STATUSES:
        return "incorporated"
    if status in SELF_EMPLOYED_STATUSES:
        return "self_employed"
    if status in EMPLOYEE_STATUSES:
        return "employee"
    if status in NON_WORKING_STATUSES:
        return "not_working"
    raise ValueError(f"unknown employment status code: {status!r}")


def classify_occupation(
    history: pd.DataFrame,
    mode: str = "working-age",
    window: tuple[int, int] = DEFAULT_WINDOW,
) -> str:
    """Occupation label for one respondent from their employment history.

    Priority: ever incorporated > ever self-employed (never incorporated) >
    ever employee.  Working-age mode restricts to the observation window and
    ages strictly between 20 and 65; extended mode uses the full history and
    ages above 20 ("ever observed" semantics).  Respondents never observed
    working under the mode's restrictions are ``excluded``.  When a year
    carries several statuses the highest-priority one counts.
    """
    if history.empty:
        raise ValueError("history must be nonempty")
    if mode not in ("working-age", "extended"):
        raise ValueError(f"unknown mode {mode!r}")
    rows = history.copy()
    rows["group"] = rows["status"].map(status_group)
    if mode == "working-age":
        lo, hi = window
        rows = rows[(rows["year"] >= lo) & (rows["year"] <= hi)]
        rows = rows[(rows["age"] > 20) & (rows["age"] < 65)]
    else:
        rows = rows[rows["age"] > 20]
    if rows.empty:
        return "excluded"
    best = rows["group"].map(_PRIORITY).max()
    if best == _PRIORITY["not_working"]:
        return "excluded"
    return {v: k for k, v in _PRIORITY.items()}[best]


def growth_flags(
    history: pd.DataFrame, window: tuple[int, int] = DEFAULT_WINDOW
) -> tuple[bool, bool]:
    """(employment_growth, employer) flags within the observation window.

    Growth means the mean first difference of employees supervised across
    successive observed years is strictly positive; employer means at least
    one supervised employee in any window year.
    """
    lo, hi = window
    rows = history[(history["year"] >= lo) & (history["year"] <= hi)]
    counts = (
        rows.dropna(subset=["employees_supervised"])
        .sort_values("year")
        .groupby("year")["employees_supervised"]
        .max()
    )
    employer = bool((counts >= 1).any())
    if len(counts) < 2:
        return False, employer
    growth = bool(np.mean(np.diff(counts.to_numpy(dtype=float))) > 0)
    return growth, employer


def necessity_flag(history: pd.DataFrame) -> bool:
    """True when the status observed immediately before the first
    entrepreneurial observation was unemployment (necessity entrant)."""
    statuses = history.sort_values("year")["status"].to_list()
    for i, status in enumerate(statuses):
        if status_group(status) in ("self_employed", "incorporated"):
            return i > 0 and statuses[i - 1] == "unemployed"
    return False


# ---------------------------------------------------------------------------
# Covariate builders.  Components are standardized against the reference
# sample (all rows of the supplied frame), combined, and averaged over the
# available measurement years.  Missing components fall back to the mean of
# what is available, with the row flagged.
# ---------------------------------------------------------------------------


def risk_aversion_index(frame: pd.DataFrame) -> tuple[pd.Series, pd.Series]:
    """Composite risk-aversion index from the 2018 and 2020 measurements.

    Per year: z-score the (negated) qualitative willingness item and the
    (negated) mean certainty equivalent, combine with weights 0.53 / 0.47,
    then average the available years.  Returns (index, flagged).
    """
    yearly = []
    complete = pd.Series(True, index=frame.index)
    for year in (2018, 2020):
        qual_col = f"risk_qual_{year}"
        ce_cols = [f"risk_ce{i}_{year}" for i in range(1, 6)]
        qual = -frame[qual_col] if qual_col in frame else pd.Series(np.nan, index=frame.index)
        if all(c in frame for c in ce_cols):
            quant = -frame[ce_cols].mean(axis=1)
        else:
            quant = pd.Series(np.nan, index=frame.index)
        z_qual = _safe_standardize(qual)
        z_quant = _safe_standardize(quant)
        combined = 0.53 * z_qual + 0.47 * z_quant
        one_sided = z_qual.isna() ^ z_quant.isna()
        combined[one_sided] = z_qual[one_sided].fillna(z_quant[one_sided])
        complete &= z_qual.notna() & z_quant.notna()
        yearly.append(combined)
    index = pd.concat(yearly, axis=1).mean(axis=1)
    return index, ~complete


def optimism_index(items: pd.DataFrame, reversed_items: Sequence[int]) -> pd.Series:
    """Mean of six 1-5 items after reversing the masked ones (v -> 6 - v).

    ``reversed_items`` holds 1-based item positions.  Filler items must be
    dropped upstream; all six items are required and range-checked.
    """
    if items.shape[1] != 6:
        raise ValueError(f"expected six item columns, got {items.shape[1]}")
    values = items.to_numpy(dtype=float)
    if np.isnan(values).any():
        raise ValueError("all six optimism items must be present")
    if ((values < 1) | (values > 5)).any():
        raise ValueError("optimism items must lie on the 1-5 scale")
    adjusted = values.copy()
    for pos in reversed_items:
        adjusted[:, pos - 1] = 6.0 - adjusted[:, pos - 1]
    return pd.Series(adjusted.mean(axis=1), index=items.index)


def cognitive_index(frame: pd.DataFrame) -> tuple[pd.Series, pd.Series]:
    """Equal-weighted numeracy index from correct-answer counts.

    Per component (financial, probability, basic): z-score each measurement,
    average the two measurements; the index is the unweighted mean across
    the three components.  Rows missing a whole component use the mean of
    the rest and are flagged.
    """
    components = {
        "financial": ("num_financial_2018", "num_financial_2020"),
        "probability": ("num_probability_2018", "num_probability_2020"),
        "basic": ("num_basic_2019", "num_basic_2020"),
    }
    parts = []
    for cols in components.values():
        measures = []
        for col in cols:
            series = frame[col] if col in frame else pd.Series(np.nan, index=frame.index)
            measures.append(_safe_standardize(series))
        parts.append(pd.concat(measures, axis=1).mean(axis=1))
    stacked = pd.concat(parts, axis=1)
    if stacked.isna().all(axis=None):
        raise ValueError("no cognitive components observed")
    index = stacked.mean(axis=1)
    return index, stacked.isna().any(axis=1)


def _safe_standardize(series: pd.Series) -> pd.Series:
    if series.notna().sum() == 0:
        return series
    return standardize(series)


# ---------------------------------------------------------------------------
# Sample filters and outcome redefinitions
# ---------------------------------------------------------------------------

FILTER_NAMES = ("drop-necessity", "drop-other-entrepreneurs", "drop-on-call-temp")


def sample_filters(
    rows: pd.DataFrame, filters: Iterable[str], outcome: str | None = None
) -> pd.DataFrame:
    """Apply named robustness filters to an analysis table.

    drop-necessity: necessity entrepreneurs leave the redefined outcome (their
    occupation is recoded to employee; the sample size is unchanged).
    drop-other-entrepreneurs: when estimating one entrepreneur type, the other
    type leaves the sample entirely (requires ``outcome``).
    drop-on-call-temp: employees observed only on-call / as temp staff leave
    the sample (requires an ``on_call_temp_only`` flag column).
    """
    out = rows.copy()
    for name in filters:
        if name == "drop-necessity":
            mask = out["necessity"].astype(bool) & out["occupation"].isin(
                ["self_employed", "incorporated"]
            )
            out.loc[mask, "occupation"] = "employee"
        elif name == "drop-other-entrepreneurs":
            if outcome not in ("self_employed", "incorporated"):
                raise ValueError("drop-other-entrepreneurs needs outcome = self_employed | incorporated")
            other = "incorporated" if outcome == "self_employed" else "self_employed"
            out = out[out["occupation"] != other]
        elif name == "drop-on-call-temp":
            if "on_call_temp_only" not in out.columns:
                raise ValueError("drop-on-call-temp needs an on_call_temp_only column")
            out = out[~out["on_call_temp_only"].astype(bool)]
        else:
            raise ValueError(f"unknown filter {name!r} (available: {FILTER_NAMES})")
    return out


def duration_correlation(entrants: pd.DataFrame) -> pd.DataFrame:
    """Correlation of spell duration with each attitude, per entrepreneur type.

    ``entrants`` needs columns occupation, duration_years, aversion,
    sensitivity, restricted to within-panel entrants whose spell start is
    observed.  Fewer than 3 entrants of a type is an error.
    """
    rows = []
    for occupation, grp in entrants.groupby("occupation"):
        if len(grp) < 3:
            raise ValueError(f"fewer than 3 entrants for {occupation!r}")
        for attitude in ("aversion", "sensitivity"):
            r, p = pearson_with_p(grp["duration_years"], grp[attitude])
            rows.append({"occupation": occupation, "attitude": attitude, "r": r, "p": p})
    return pd.DataFrame(rows)


# ---------------------------------------------------------------------------
# Analysis table assembly
# ---------------------------------------------------------------------------

STANDARDIZED_COLUMNS = ("aversion", "sensitivity", "risk_aversion", "optimism", "cognitive")
CONTROL_COLUMNS = (
    "risk_aversion",
    "optimism",
    "cognitive",
    "upper_secondary",
    "tertiary",
    "age",
    "female",
    "married",
    "children",
)


def build_analysis_table(
    history: pd.DataFrame,
    attitudes: pd.DataFrame,
    covariates: pd.DataFrame | None = None,
    mode: str = "working-age",
    window: tuple[int, int] = DEFAULT_WINDOW,
    reversed_optimism_items: Sequence[int] = (4, 5, 6),
) -> pd.DataFrame:
    """One row per classified respondent with standardized regressors.

    Occupation labels come from the mode's classification; preference and
    cognitive indices are standardized against all classified respondents
    (the extended-sample convention: subgroup means stay free).  Demographics
    come from the latest in-window history row.
    """
    rows = []
    for respondent, hist in history.groupby("respondent"):
        label = classify_occupation(hist, mode=mode, window=window)
        if label == "excluded":
            continue
        hist_sorted = hist.sort_values("year")
        latest = hist_sorted.iloc[-1]
        growth, employer = growth_flags(hist, window)
        statuses = set(hist_sorted["status"])
        education = latest.get("education", "below_upper_secondary")
        rows.append(
            {
                "respondent": respondent,
                "occupation": label,
                "employment_growth": growth,
                "employer": employer,
                "necessity": necessity_flag(hist_sorted),
                "on_call_temp_only": statuses <= (
                    {"on_call_employee", "temp_staffer"} | NON_WORKING_STATUSES
                ),
                "age": float(latest["age"]),
                "female": float(latest.get("female", 0.0)),
                "married": float(latest.get("married", 0.0)),
                "children": float(latest.get("children", 0.0)),
                "upper_secondary": float(education == "upper_secondary"),
                "tertiary": float(education == "tertiary"),
            }
        )
    table = pd.DataFrame(rows).set_index("respondent")
    table = table.join(attitudes.set_index("respondent")[["aversion", "sensitivity"]], how="inner")

    if covariates is not None:
        cov = covariates.set_index("respondent").reindex(table.index)
        risk, risk_flag = risk_aversion_index(cov)
        table["risk_aversion"] = risk
        opt_cols = [f"opt{i}" for i in range(1, 7)]
        if all(c in cov.columns for c in opt_cols):
            table["optimism"] = optimism_index(cov[opt_cols], reversed_optimism_items)
        cog, cog_flag = cognitive_index(cov)
        table["cognitive"] = cog
        table["covariate_flagged"] = risk_flag | cog_flag
    for col in STANDARDIZED_COLUMNS:
        if col in table.columns:
            table[col] = standardize(table[col])
    return table.reset_index()


def emit_tables(
    table: pd.DataFrame,
    fits: Sequence[tuple[str, object, pd.DataFrame]] = (),
) -> dict[str, str]:
    """Render the three publication-style tables for an analysis table.

    ``fits`` holds (label, probit fit, marginal-effects frame) triples for
    the regression columns.  Returns rendered TSV text keyed by table kind;
    every emitter has a matching parser in :mod:`beliefhedge.tables`.
    """
    from .econ import correlation_matrix
    from .tables import ame_column, emit_correlations, emit_descriptives, emit_regression_table

    value_cols = [c for c in STANDARDIZED_COLUMNS if c in table.columns]
    binary_cols = {"upper_secondary", "tertiary", "female", "married"}
    value_cols += [c for c in (*binary_cols, "age", "children") if c in table.columns]
    out = {
        "descriptives": emit_descriptives(
            table, "occupation", value_cols, binary_cols=binary_cols
        ),
        "correlations": emit_correlations(correlation_matrix(table, value_cols)),
    }
    if fits:
        columns = [ame_column(label, fit, ame) for label, fit, ame in fits]
        terms = sorted({t for c in columns for t in c["rows"]})
        out["regressions"] = emit_regression_table(columns, terms)
    return out


def occupation_probit(
    table: pd.DataFrame,
    outcome: str,
    regressors: Sequence[str] = ("aversion", "sensitivity"),
    controls: Sequence[str] = (),
):
    """Probit of one occupation indicator on attitudes (plus controls).

    Returns (fit, ame_table) with robust standard errors throughout.
    """
    data = table.copy()
    data["y"] = (data["occupation"] == outcome).astype(float)
    binary = frozenset(
        c for c in (*regressors, *controls)
        if c in ("female", "married", "upper_secondary", "tertiary")
    )
    spec = RegressionSpec("y", tuple((*regressors, *controls)), binary=binary, robust=True)
    fit = fit_probit(spec, data)
    ame = average_marginal_effects(fit, data)
    return fit, ame


# ---------------------------------------------------------------------------
# Fully synthetic study generation and the end-to-end sign experiment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SyntheticStudyConfig:
    """Generative model tying true attitudes to occupational choice."""

    n_respondents: int = 300
    waves: int = 1
    depth: int = 4
    incorporation_intercept: float = -1.0
    incorporation_aversion_slope: float = -2.0
    self_employment_intercept: float = -1.2
    self_employment_sensitivity_slope: float = 1.0
    population: PopulationSpec | None = None
    seed: int = 0

    def population_spec(self) -> PopulationSpec:
        if self.population is not None:
            return self.population
        return PopulationSpec(
            count=self.n_respondents,
            error_sd=TruncatedNormal(0.05, 0.02, 0.005, 0.2),
            waves=self.waves,
            seed=self.seed,
        )


def synthetic_study(config: SyntheticStudyConfig):
    """Simulate agents, elicit panels, and draw occupations from true attitudes.

    Occupations follow probit-style propensities in the *standardized true*
    attitudes: higher aversion lowers incorporated entry, higher sensitivity
    raises self-employment.  Returns (panel, truth_frame) where truth_frame
    carries respondent, occupation, and the generative attitudes.
    """
    spec = config.population_spec()
    agents = sample_population(spec)
    panel = simulate_panel(agents, waves=spec.waves, depth=config.depth, seed=config.seed + 1)
    rng = np.random.default_rng(np.random.SeedSequence((config.seed, 2)))
    aversion = np.array([a.profile.aversion for a in agents])
    sensitivity = np.array([a.profile.sensitivity for a in agents])
    z_av = (aversion - aversion.mean()) / aversion.std()
    z_se = (sensitivity - sensitivity.mean()) / sensitivity.std()
    p_inc = ndtr(config.incorporation_intercept + config.incorporation_aversion_slope * z_av)
    p_self = ndtr(config.self_employment_intercept + config.self_employment_sensitivity_slope * z_se)
    u = rng.random((len(agents), 2))
    occupation = np.where(u[:, 0] < p_inc, "incorporated",
                          np.where(u[:, 1] < p_self, "self_employed", "employee"))
    truth = pd.DataFrame(
        {
            "respondent": [a.agent_id for a in agents],
            "occupation": occupation,
            "true_aversion": aversion,
            "true_sensitivity": sensitivity,
        }
    )
    return panel, truth


def sign_recovery_replication(
    seed: int,
    config: SyntheticStudyConfig | None = None,
    estimation: EstimationConfig | None = None,
) -> float:
    """One end-to-end replication: simulate, estimate, assemble, fit probit.

    Returns the AME of standardized estimated aversion on incorporated entry;
    the generative model makes the true effect negative.
    """
    config = config or SyntheticStudyConfig()
    config = dataclasses.replace(config, seed=seed)
    estimation = estimation or EstimationConfig(n_starts=2, seed=seed)
    panel, truth = synthetic_study(config)
    _, est_frame = recover_population(panel.intervals, estimation)
    merged = truth.merge(
        est_frame[est_frame["error"] == ""][["respondent", "aversion", "sensitivity"]],
        on="respondent",
    )
    for col in ("aversion", "sensitivity"):
        merged[col] = standardize(merged[col])
    _, ame = occupation_probit(merged, outcome="incorporated")
    return float(ame.loc["aversion", "ame"])
