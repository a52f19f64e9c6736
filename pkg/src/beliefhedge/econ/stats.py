"""Standardization and pairwise correlations with p-values."""

from __future__ import annotations

import numpy as np
import pandas as pd
from scipy import stats


def standardize(values, reference=None, ddof: int = 0):
    """Z-score ``values`` using the mean and SD of ``reference``.

    With no reference the values standardize themselves.  Values outside the
    reference sample are transformed with the reference mean/SD, so subsample
    means need not be zero.  Uses the population (divide-by-n) SD convention
    by default; pass ``ddof=1`` for the sample convention.  NaNs pass through
    and are ignored when computing the reference moments.
    """
    values = pd.Series(values, dtype=float)
    ref = values if reference is None else pd.Series(reference, dtype=float)
    mean = ref.mean()
    sd = ref.std(ddof=ddof)
    if not np.isfinite(sd) or sd == 0:
        raise ValueError("reference sample has zero variance")
    return (values - mean) / sd


def pearson_with_p(x, y) -> tuple[float, float]:
    """Pearson r with the two-sided p-value from the t transform.

    Pairs with a missing side are dropped; fewer than 3 complete pairs is an
    error because the t transform needs n - 2 > 0.
    """
    x = pd.Series(x, dtype=float)
    y = pd.Series(y, dtype=float)
    mask = x.notna() & y.notna()
    n = int(mask.sum())
    if n < 3:
        raise ValueError(f"need at least 3 complete pairs, got {n}")
    xv = x[mask].to_numpy()
    yv = y[mask].to_numpy()
    if np.std(xv) == 0 or np.std(yv) == 0:
        raise ValueError("zero variance in one of the columns")
    r = float(np.corrcoef(xv, yv)[0, 1])
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return r, 0.0
    t = r * np.sqrt((n - 2) / (1.0 - r * r))
    p = 2.0 * float(stats.t.sf(abs(t), df=n - 2))
    return r, p


def correlation_matrix(data: pd.DataFrame, columns: list[str]) -> pd.DataFrame:
    """Matrix of (r, p) pairs over the listed columns, pairwise complete.

    Returned frame holds ``(r, p)`` tuples; the diagonal is (1.0, 0.0).
    """
    out = pd.DataFrame(index=columns, columns=columns, dtype=object)
    for i, a in enumerate(columns):
        for j, b in enumerate(columns):
            if j > i:
                continue
            if i == j:
                out.loc[a, b] = (1.0, 0.0)
            else:
                r, p = pearson_with_p(data[a], data[b])
                out.loc[a, b] = (r, p)
                out.loc[b, a] = (r, p)
    return out
