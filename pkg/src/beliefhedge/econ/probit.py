"""Probit maximum likelihood with robust covariance and marginal effects."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import optimize, stats
from scipy.special import log_ndtr, ndtr

from .design import RegressionSpec, build_design

_LOG_SQRT_2PI = 0.5 * np.log(2.0 * np.pi)


class SeparationError(RuntimeError):
    """The outcome is (quasi-)separable; probit coefficients diverge."""


def _log_pdf(z):
    return -0.5 * z * z - _LOG_SQRT_2PI


def probit_loglik(beta: np.ndarray, X: np.ndarray, y: np.ndarray) -> float:
    eta = X @ beta
    return float(np.sum(y * log_ndtr(eta) + (1.0 - y) * log_ndtr(-eta)))


def _lambdas(beta, X, y):
    """Generalized residuals: score_i = lambda_i * x_i."""
    eta = X @ beta
    lp = _log_pdf(eta)
    mills_pos = np.exp(lp - log_ndtr(eta))   # phi/Phi
    mills_neg = np.exp(lp - log_ndtr(-eta))  # phi/(1-Phi)
    return y * mills_pos - (1.0 - y) * mills_neg, eta


def probit_score(beta: np.ndarray, X: np.ndarray, y: np.ndarray) -> np.ndarray:
    lam, _ = _lambdas(beta, X, y)
    return X.T @ lam


def _information(beta, X, y):
    """Negative Hessian (observed information); positive definite for probit."""
    lam, eta = _lambdas(beta, X, y)
    w = lam * (lam + eta)
    return X.T @ (w[:, None] * X)


@dataclass
class ProbitFit:
    """Fitted probit model with (optionally sandwich) covariance."""

    spec: RegressionSpec
    names: list[str]
    params: np.ndarray
    cov: np.ndarray
    loglik: float
    n: int
    mean_outcome: float
    iterations: int

    @property
    def se(self) -> np.ndarray:
        return np.sqrt(np.diag(self.cov))

    @property
    def z(self) -> np.ndarray:
        return self.params / self.se

    @property
    def p(self) -> np.ndarray:
        return 2.0 * stats.norm.sf(np.abs(self.z))

    def coefficients(self) -> pd.Series:
        return pd.Series(self.params, index=self.names)

    def linear_index(self, X: np.ndarray) -> np.ndarray:
        return X @ self.params

    def predicted_probabilities(self, X: np.ndarray) -> np.ndarray:
        return ndtr(self.linear_index(X))

    def summary_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"coef": self.params, "se": self.se, "z": self.z, "p": self.p}, index=self.names
        )


def fit_probit(spec: RegressionSpec, data: pd.DataFrame) -> ProbitFit:
    """Newton iterations with analytic score and Hessian, step-halving search.

    Falls back to BFGS if the information matrix loses positive definiteness
    numerically.  Sandwich covariance (bread = inverse Hessian, meat = summed
    score outer products) when ``spec.robust`` is set.
    """
    X, y = build_design(spec, data)
    uniq = np.unique(y)
    if not np.all(np.isin(uniq, (0.0, 1.0))) or len(uniq) < 2:
        raise ValueError("outcome must be binary with both classes present")

    beta = np.zeros(X.shape[1])
    ll = probit_loglik(beta, X, y)
    iterations = 0
    prev_step = np.inf
    fallback = False
    for iterations in range(1, 101):
        g = probit_score(beta, X, y)
        A = _information(beta, X, y)
        try:
            delta = np.linalg.solve(A, g)
        except np.linalg.LinAlgError:
            fallback = True
            break
        step = 1.0
        new_ll = probit_loglik(beta + delta, X, y)
        while new_ll < ll and step > 1e-8:
            step /= 2.0
            new_ll = probit_loglik(beta + step * delta, X, y)
        beta = beta + step * delta
        if np.max(np.abs(beta)) > 1e3:
            raise SeparationError("coefficient norm exceeded 1e3; outcome looks separable")
        sign = 2.0 * y - 1.0
        step_norm = float(np.linalg.norm(step * delta))
        if np.all(sign * (X @ beta) > 0) and step_norm >= prev_step:
            raise SeparationError("perfect classification with non-decreasing steps")
        prev_step = step_norm
        ll = new_ll
        if np.max(np.abs(probit_score(beta, X, y))) < 1e-8:
            break
    if fallback:
        res = optimize.minimize(
            lambda b: -probit_loglik(b, X, y),
            beta,
            jac=lambda b: -probit_score(b, X, y),
            method="BFGS",
            options={"maxiter": 500},
        )
        beta = res.x
        ll = -float(res.fun)
        iterations += int(res.nit)

    A = _information(beta, X, y)
    bread = np.linalg.inv(A)
    if spec.robust:
        lam, _ = _lambdas(beta, X, y)
        scores = X * lam[:, None]
        meat = scores.T @ scores
        cov = bread @ meat @ bread
    else:
        cov = bread
    return ProbitFit(
        spec=spec,
        names=spec.columns,
        params=beta,
        cov=cov,
        loglik=ll,
        n=len(y),
        mean_outcome=float(np.mean(y)),
        iterations=iterations,
    )


def average_marginal_effects(
    fit: ProbitFit, data: pd.DataFrame, spec: RegressionSpec | None = None
) -> pd.DataFrame:
    """Average marginal effects with delta-method standard errors.

    Continuous regressors get the mean derivative of the fitted probability;
    regressors flagged binary get the average effect of a discrete 0-to-1
    change.  The intercept carries no marginal effect, so an intercept-only
    model yields an empty table.
    """
    spec = spec or fit.spec
    if spec.columns != fit.names:
        raise ValueError(
            f"spec regressors {spec.columns} do not match the fitted model's {fit.names}"
        )
    X, _ = build_design(spec, data, check_rank=False)
    beta = fit.params
    eta = X @ beta
    phi = np.exp(_log_pdf(eta))
    n = len(eta)
    offset = 1 if spec.add_intercept else 0
    rows = []
    for k, name in enumerate(spec.regressors):
        j = k + offset
        if name in spec.binary:
            X1 = X.copy()
            X0 = X.copy()
            X1[:, j] = 1.0
            X0[:, j] = 0.0
            eta1 = X1 @ beta
            eta0 = X0 @ beta
            ame = float(np.mean(ndtr(eta1) - ndtr(eta0)))
            grad = (X1.T @ np.exp(_log_pdf(eta1)) - X0.T @ np.exp(_log_pdf(eta0))) / n
        else:
            ame = float(np.mean(phi) * beta[j])
            grad = beta[j] * (X.T @ (-eta * phi)) / n
            grad[j] += float(np.mean(phi))
        se = float(np.sqrt(grad @ fit.cov @ grad))
        z = ame / se if se > 0 else np.nan
        p = 2.0 * float(stats.norm.sf(abs(z))) if np.isfinite(z) else np.nan
        rows.append({"term": name, "ame": ame, "se": se, "z": z, "p": p})
    return pd.DataFrame(rows, columns=["term", "ame", "se", "z", "p"]).set_index("term")
