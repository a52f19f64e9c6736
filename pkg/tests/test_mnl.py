"""Multinomial logit and the probit-comparison diagnostic."""

import numpy as np
import pandas as pd
import pytest
from scipy import optimize
from scipy.special import ndtr

from beliefhedge.econ import RegressionSpec, amemiya_compare, fit_mnl, fit_probit
from beliefhedge.econ.mnl import mnl_loglik, mnl_score


def simulate_mnl(n, coef_by_category, seed=0):
    """coef_by_category: {category: (intercept, slope_x, slope_z)}; base has zeros."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    z = rng.standard_normal(n)
    categories = list(coef_by_category)
    utilities = np.column_stack(
        [
            coef_by_category[c][0] + coef_by_category[c][1] * x + coef_by_category[c][2] * z
            for c in categories
        ]
    )
    gumbel = rng.gumbel(size=(n, len(categories)))
    choice = np.argmax(utilities + gumbel, axis=1)
    return pd.DataFrame({"x": x, "z": z, "choice": [categories[i] for i in choice]})


class TestFitMnl:
    def test_two_category_equals_binary_logit(self):
        frame = simulate_mnl(4_000, {"base": (0, 0, 0), "alt": (0.4, 0.9, -0.6)}, seed=1)
        spec = RegressionSpec("choice", ("x", "z"))
        fit = fit_mnl(spec, frame, base_category="base")
        # independent binary-logit oracle via generic optimization
        X = np.column_stack([np.ones(len(frame)), frame["x"], frame["z"]])
        y = (frame["choice"] == "alt").to_numpy(float)

        def neg_loglik(beta):
            eta = X @ beta
            return -float(np.sum(y * eta - np.logaddexp(0.0, eta)))

        oracle = optimize.minimize(neg_loglik, np.zeros(3), method="BFGS", tol=1e-12)
        np.testing.assert_allclose(fit.params["alt"].to_numpy(), oracle.x, atol=1e-6)

    def test_recovers_known_coefficients_four_categories(self):
        truth = {
            "base": (0.0, 0.0, 0.0),
            "a": (0.3, 0.8, -0.2),
            "b": (-0.4, -0.5, 0.6),
            "c": (0.1, 0.2, 0.4),
        }
        frame = simulate_mnl(20_000, truth, seed=2)
        fit = fit_mnl(RegressionSpec("choice", ("x", "z")), frame, base_category="base")
        se = fit.se_frame()
        for cat in ("a", "b", "c"):
            for term, true_value in zip(fit.names, truth[cat]):
                got = fit.params.loc[term, cat]
                assert abs(got - true_value) < 3 * se.loc[term, cat]

    def test_category_permutation_permutes_blocks(self):
        frame = simulate_mnl(3_000, {"base": (0, 0, 0), "a": (0.3, 0.5, 0.0), "b": (-0.2, 0.0, 0.4)}, seed=3)
        fit1 = fit_mnl(RegressionSpec("choice", ("x", "z")), frame, base_category="base")
        relabeled = frame.assign(choice=frame["choice"].map({"base": "base", "a": "zz", "b": "b"}))
        fit2 = fit_mnl(RegressionSpec("choice", ("x", "z")), relabeled, base_category="base")
        np.testing.assert_allclose(
            fit1.params["a"].to_numpy(), fit2.params["zz"].to_numpy(), atol=1e-8
        )
        np.testing.assert_allclose(
            fit1.params["b"].to_numpy(), fit2.params["b"].to_numpy(), atol=1e-8
        )

    def test_empty_category_rejected(self):
        frame = simulate_mnl(500, {"base": (0, 0, 0), "a": (0.3, 0.5, 0.0)}, seed=4)
        with pytest.raises(ValueError, match="empty"):
            fit_mnl(
                RegressionSpec("choice", ("x", "z")),
                frame,
                base_category="base",
                categories=["base", "a", "ghost"],
            )

    def test_fitted_probabilities_sum_to_one(self):
        frame = simulate_mnl(2_000, {"base": (0, 0, 0), "a": (0.3, 0.5, 0.0), "b": (0, 0.2, 0.4)}, seed=5)
        fit = fit_mnl(RegressionSpec("choice", ("x", "z")), frame, base_category="base")
        X = np.column_stack([np.ones(len(frame)), frame["x"], frame["z"]])
        P = fit.predicted_probabilities(X)
        np.testing.assert_allclose(P.sum(axis=1), 1.0, atol=1e-12)
        assert np.all(P > 0)

    def test_score_matches_finite_differences(self):
        frame = simulate_mnl(400, {"base": (0, 0, 0), "a": (0.2, 0.4, -0.1), "b": (0, 0.1, 0.3)}, seed=6)
        X = np.column_stack([np.ones(len(frame)), frame["x"], frame["z"]])
        ordered = ["base", "a", "b"]
        codes = frame["choice"].map({c: i for i, c in enumerate(ordered)}).to_numpy()
        rng = np.random.default_rng(1)
        h = 1e-6
        for _ in range(10):
            vec = rng.normal(0, 0.4, size=6)
            g = mnl_score(vec, X, codes, 2)
            for j in range(6):
                e = np.zeros(6)
                e[j] = h
                fd = (mnl_loglik(vec + e, X, codes, 2) - mnl_loglik(vec - e, X, codes, 2)) / (2 * h)
                assert g[j] == pytest.approx(fd, rel=1e-5, abs=1e-7)


class TestAmemiyaCompare:
    def test_ratios_near_conventional_conversion_factor(self):
        rng = np.random.default_rng(7)
        n = 50_000
        x = rng.standard_normal(n)
        z = rng.standard_normal(n)
        eta = 0.4 + 0.8 * x - 0.6 * z
        y = (rng.random(n) < ndtr(eta)).astype(float)
        frame = pd.DataFrame({"x": x, "z": z, "y": y, "choice": np.where(y > 0, "one", "zero")})
        probit = fit_probit(RegressionSpec("y", ("x", "z")), frame)
        mnl = fit_mnl(RegressionSpec("choice", ("x", "z")), frame, base_category="zero")
        ratios = amemiya_compare(probit, mnl)
        assert ((ratios > 0.45) & (ratios < 0.75)).all()

    def test_zero_coefficient_reported_absent(self):
        frame = simulate_mnl(1_000, {"base": (0, 0, 0), "a": (0.3, 0.5, 0.0)}, seed=8)
        frame["y"] = (frame["choice"] == "a").astype(float)
        probit = fit_probit(RegressionSpec("y", ("x", "z")), frame)
        mnl = fit_mnl(RegressionSpec("choice", ("x", "z")), frame, base_category="base")
        doctored = mnl.params.copy()
        doctored.loc["z", "a"] = 0.0
        mnl.params = doctored
        ratios = amemiya_compare(probit, mnl)
        assert "z" not in ratios.index
        assert "x" in ratios.index

    def test_mismatched_regressors_rejected(self):
        frame = simulate_mnl(1_000, {"base": (0, 0, 0), "a": (0.3, 0.5, 0.0)}, seed=9)
        frame["y"] = (frame["choice"] == "a").astype(float)
        probit = fit_probit(RegressionSpec("y", ("x",)), frame)
        mnl = fit_mnl(RegressionSpec("choice", ("x", "z")), frame, base_category="base")
        with pytest.raises(ValueError, match="differ"):
            amemiya_compare(probit, mnl)

    def test_multicategory_requires_alternative(self):
        frame = simulate_mnl(1_000, {"base": (0, 0, 0), "a": (0.3, 0.5, 0.0), "b": (0, 0.1, 0.2)}, seed=10)
        frame["y"] = (frame["choice"] == "a").astype(float)
        probit = fit_probit(RegressionSpec("y", ("x", "z")), frame)
        mnl = fit_mnl(RegressionSpec("choice", ("x", "z")), frame, base_category="base")
        with pytest.raises(ValueError, match="alternative"):
            amemiya_compare(probit, mnl)
        ratios = amemiya_compare(probit, mnl, alternative="a")
        assert len(ratios) > 0
