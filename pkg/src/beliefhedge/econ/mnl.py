"""Multinomial logit by Newton's method, with the probit comparison diagnostic."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import optimize, stats

from .design import RegressionSpec, build_design
from .probit import ProbitFit, SeparationError


def _utilities(B: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Choice probabilities (n, C) with the base category in column 0."""
    eta = np.column_stack([np.zeros(len(X)), X @ B])
    eta -= eta.max(axis=1, keepdims=True)
    num = np.exp(eta)
    return num / num.sum(axis=1, keepdims=True)


def mnl_loglik(vec: np.ndarray, X: np.ndarray, codes: np.ndarray, n_alt: int) -> float:
    B = vec.reshape(X.shape[1], n_alt, order="F")
    P = _utilities(B, X)
    return float(np.sum(np.log(P[np.arange(len(codes)), codes])))


def mnl_score(vec: np.ndarray, X: np.ndarray, codes: np.ndarray, n_alt: int) -> np.ndarray:
    B = vec.reshape(X.shape[1], n_alt, order="F")
    P = _utilities(B, X)
    onehot = np.zeros_like(P)
    onehot[np.arange(len(codes)), codes] = 1.0
    resid = (onehot - P)[:, 1:]  # non-base columns
    return (X.T @ resid).ravel(order="F")


def _score_rows(vec, X, codes, n_alt):
    """Per-observation score rows (n, K * n_alt) for the sandwich meat."""
    B = vec.reshape(X.shape[1], n_alt, order="F")
    P = _utilities(B, X)
    onehot = np.zeros_like(P)
    onehot[np.arange(len(codes)), codes] = 1.0
    resid = (onehot - P)[:, 1:]
    return np.einsum("na,nk->nak", resid, X).reshape(len(X), -1)


def _information(vec, X, codes, n_alt):
    """Negative Hessian of the log-likelihood, (K*n_alt, K*n_alt)."""
    K = X.shape[1]
    B = vec.reshape(K, n_alt, order="F")
    P = _utilities(B, X)[:, 1:]
    A = np.zeros((K * n_alt, K * n_alt))
    for a in range(n_alt):
        for b in range(n_alt):
            w = P[:, a] * ((1.0 if a == b else 0.0) - P[:, b])
            A[a * K : (a + 1) * K, b * K : (b + 1) * K] = X.T @ (w[:, None] * X)
    return A


@dataclass
class MnlFit:
    """Fitted multinomial logit; base-category coefficients are identically 0."""

    spec: RegressionSpec
    names: list[str]
    categories: list  # base first
    params: pd.DataFrame  # rows: regressor names, columns: non-base categories
    cov: np.ndarray
    loglik: float
    n: int

    @property
    def base_category(self):
        return self.categories[0]

    def se_frame(self) -> pd.DataFrame:
        K = len(self.names)
        se = np.sqrt(np.diag(self.cov))
        return pd.DataFrame(
            {cat: se[i * K : (i + 1) * K] for i, cat in enumerate(self.categories[1:])},
            index=self.names,
        )

    def predicted_probabilities(self, X: np.ndarray) -> np.ndarray:
        return _utilities(self.params.to_numpy(), X)


def fit_mnl(
    spec: RegressionSpec,
    data: pd.DataFrame,
    base_category,
    categories: list | None = None,
) -> MnlFit:
    """Maximum-likelihood softmax-choice coefficients against an omitted base."""
    X, _ = build_design(spec, data, numeric_outcome=False)
    y_values = data[spec.outcome]
    observed = list(pd.unique(y_values))
    if categories is None:
        categories = observed
    for cat in categories:
        if (y_values == cat).sum() == 0:
            raise ValueError(f"empty outcome category: {cat!r}")
    if base_category not in categories:
        raise ValueError(f"base category {base_category!r} not among categories")
    if len(categories) < 2:
        raise ValueError("need at least two outcome categories")
    extra = set(observed) - set(categories)
    if extra:
        raise ValueError(f"outcome values outside declared categories: {sorted(extra)}")

    ordered = [base_category] + sorted((c for c in categories if c != base_category), key=str)
    code_of = {c: i for i, c in enumerate(ordered)}
    codes = y_values.map(code_of).to_numpy()
    n_alt = len(ordered) - 1
    K = X.shape[1]

    vec = np.zeros(K * n_alt)
    ll = mnl_loglik(vec, X, codes, n_alt)
    fallback = False
    for _ in range(200):
        g = mnl_score(vec, X, codes, n_alt)
        A = _information(vec, X, codes, n_alt)
        try:
            delta = np.linalg.solve(A, g)
        except np.linalg.LinAlgError:
            fallback = True
            break
        step = 1.0
        new_ll = mnl_loglik(vec + delta, X, codes, n_alt)
        while new_ll < ll and step > 1e-8:
            step /= 2.0
            new_ll = mnl_loglik(vec + step * delta, X, codes, n_alt)
        vec = vec + step * delta
        if np.max(np.abs(vec)) > 1e3:
            raise SeparationError("coefficient norm exceeded 1e3; outcome looks separable")
        ll = new_ll
        if np.max(np.abs(mnl_score(vec, X, codes, n_alt))) < 1e-8:
            break
    if fallback:
        res = optimize.minimize(
            lambda v: -mnl_loglik(v, X, codes, n_alt),
            vec,
            jac=lambda v: -mnl_score(v, X, codes, n_alt),
            method="BFGS",
            options={"maxiter": 1000},
        )
        vec = res.x
        ll = -float(res.fun)

    A = _information(vec, X, codes, n_alt)
    bread = np.linalg.inv(A)
    if spec.robust:
        S = _score_rows(vec, X, codes, n_alt)
        cov = bread @ (S.T @ S) @ bread
    else:
        cov = bread
    B = vec.reshape(K, n_alt, order="F")
    params = pd.DataFrame({cat: B[:, i] for i, cat in enumerate(ordered[1:])}, index=spec.columns)
    return MnlFit(
        spec=spec,
        names=spec.columns,
        categories=ordered,
        params=params,
        cov=cov,
        loglik=ll,
        n=len(codes),
    )


def mnl_z_and_p(fit: MnlFit) -> tuple[pd.DataFrame, pd.DataFrame]:
    se = fit.se_frame()
    z = fit.params / se
    p = 2.0 * z.abs().apply(lambda col: stats.norm.sf(col))
    return z, pd.DataFrame(p, index=z.index, columns=z.columns)


def amemiya_compare(
    probit_fit: ProbitFit, mnl_fit: MnlFit, alternative=None
) -> pd.Series:
    """Probit-to-logit coefficient ratios for one alternative against the base.

    A diagnostic, not an estimator: with well-identified coefficients the
    ratios cluster near the conventional 0.6 conversion factor.  Regressors
    with a zero logit coefficient are omitted (ratio undefined).
    """
    if alternative is None:
        if len(mnl_fit.categories) != 2:
            raise ValueError("pass `alternative=` when the MNL has more than two categories")
        alternative = mnl_fit.categories[1]
    if alternative not in mnl_fit.params.columns:
        raise ValueError(f"alternative {alternative!r} not in the MNL fit")
    if probit_fit.names != mnl_fit.names:
        raise ValueError(
            f"regressor sets differ: probit {probit_fit.names} vs mnl {mnl_fit.names}"
        )
    logit_coef = mnl_fit.params[alternative]
    probit_coef = pd.Series(probit_fit.params, index=probit_fit.names)
    keep = logit_coef != 0.0
    return (probit_coef[keep] / logit_coef[keep]).rename("probit_over_logit")
