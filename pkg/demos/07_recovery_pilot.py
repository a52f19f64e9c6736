#!/usr/bin/env python3
"""Pilot run calibrating the recovery benchmark frozen into the test suite.

Simulates the reference panel (200 respondents, default population, 2 waves,
depth 5), estimates every respondent twice:

  1. the production path: multi-start gradient optimization over
     (aversion, sensitivity, error_sd) plus per-wave beliefs;
  2. the independent oracle: brute-force 50 x 50 x 20 grid search over the
     three structural parameters with moment-initialized beliefs held fixed.

The oracle's mean absolute errors are the yardstick: the acceptance suite
asserts the production path stays within 1.25x of them.  Re-run this script
after changing the estimator and update the frozen constants in
tests/test_acceptance.py if the yardstick itself moves.
"""

import time

from beliefhedge.estimate import (
    EstimationConfig,
    grid_search_oracle,
    recover_population,
    recovery_summary,
)
from beliefhedge.simulate import PopulationSpec, sample_population, simulate_panel

PANEL_SEED = 777
POPULATION_SEED = 20250810


def reference_panel():
    spec = PopulationSpec(count=200, waves=2, seed=POPULATION_SEED)
    return simulate_panel(sample_population(spec), waves=2, depth=5, seed=PANEL_SEED)


def main() -> None:
    panel = reference_panel()
    config = EstimationConfig(seed=0)

    t0 = time.time()
    _, frame = recover_population(panel.intervals, config, truths=panel.truths)
    mle = recovery_summary(frame)
    t_mle = time.time() - t0
    print(f"optimizer path: {t_mle:.1f}s")
    print(f"  MAE aversion    = {mle['mae_aversion']:.6f}")
    print(f"  MAE sensitivity = {mle['mae_sensitivity']:.6f}")

    t0 = time.time()
    err_av = err_se = 0.0
    for respondent, intervals in panel.intervals.items():
        oracle = grid_search_oracle(intervals, config)
        truth = panel.truths[respondent]
        err_av += abs(oracle["aversion"] - truth.aversion)
        err_se += abs(oracle["sensitivity"] - truth.sensitivity)
    n = len(panel.intervals)
    t_oracle = time.time() - t0
    print(f"grid-search oracle: {t_oracle:.1f}s")
    print(f"  MAE aversion    = {err_av / n:.6f}")
    print(f"  MAE sensitivity = {err_se / n:.6f}")
    print()
    print("frozen yardstick for tests/test_acceptance.py:")
    print(f"  ORACLE_MAE_AVERSION = {err_av / n:.6f}")
    print(f"  ORACLE_MAE_SENSITIVITY = {err_se / n:.6f}")
    print(f"  ratio aversion    = {mle['mae_aversion'] / (err_av / n):.3f}")
    print(f"  ratio sensitivity = {mle['mae_sensitivity'] / (err_se / n):.3f}")


if __name__ == "__main__":
    main()
