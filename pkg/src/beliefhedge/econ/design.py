"""Regression specification and design-matrix assembly."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class RegressionSpec:
    """Outcome, regressors, and inference options for one model.

    ``binary`` marks indicator regressors whose marginal effects are the
    average effect of a discrete 0-to-1 change rather than a derivative.
    """

    outcome: str
    regressors: tuple[str, ...]
    binary: frozenset[str] = field(default_factory=frozenset)
    robust: bool = True
    add_intercept: bool = True

    def __post_init__(self) -> None:
        if len(set(self.regressors)) != len(self.regressors):
            raise ValueError("duplicate regressor columns")
        if self.outcome in self.regressors:
            raise ValueError("outcome column may not appear among regressors")
        unknown = self.binary - set(self.regressors)
        if unknown:
            raise ValueError(f"binary flags for unknown regressors: {sorted(unknown)}")

    @property
    def columns(self) -> list[str]:
        names = list(self.regressors)
        return (["intercept"] + names) if self.add_intercept else names


def build_design(
    spec: RegressionSpec,
    data: pd.DataFrame,
    check_rank: bool = True,
    numeric_outcome: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """(X, y) arrays for a spec, with the intercept column prepended.

    Rejects rank-deficient designs so every coefficient is identified; the
    check is skipped when evaluating an already-fitted model on new data.
    Categorical outcomes (multinomial models) pass ``numeric_outcome=False``
    to keep the raw labels.
    """
    missing = [c for c in (spec.outcome, *spec.regressors) if c not in data.columns]
    if missing:
        raise ValueError(f"columns not in data: {missing}")
    y = data[spec.outcome].to_numpy()
    if numeric_outcome:
        y = np.asarray(y, dtype=float)
        if not np.all(np.isfinite(y)):
            raise ValueError("outcome contains non-finite values")
    X = np.asarray(data.loc[:, list(spec.regressors)], dtype=float)
    if spec.add_intercept:
        X = np.column_stack([np.ones(len(X)), X])
    if not np.all(np.isfinite(X)):
        raise ValueError("design contains non-finite values; drop or impute first")
    if check_rank and np.linalg.matrix_rank(X) < X.shape[1]:
        raise ValueError("rank-deficient design matrix")
    return X, y
