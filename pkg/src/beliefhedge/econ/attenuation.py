"""Monte Carlo demonstration of attenuation bias from noisy measurement.

Adding classical measurement error to a regressor and refitting shrinks the
average marginal effect toward zero; the curve over the noise grid is the
mechanism that can turn a real effect into a null result when the measure is
noisy.  The same outcome draw is reused across noise levels within each
repetition, so adjacent grid points are paired comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.special import ndtr

from .design import RegressionSpec
from .probit import average_marginal_effects, fit_probit


@dataclass(frozen=True)
class AttenuationConfig:
    """True data-generating coefficients, noise grid, and repetition count."""

    coefficients: dict[str, float] = field(
        default_factory=lambda: {"intercept": 0.2, "x": 0.8, "z": 0.5}
    )
    noisy_regressor: str = "x"
    noise_sds: tuple[float, ...] = (0.0, 0.5, 1.0, 2.0, 4.0, 8.0)
    n: int = 2000
    repetitions: int = 500
    seed: int = 0

    def __post_init__(self) -> None:
        if "intercept" not in self.coefficients:
            raise ValueError("coefficients must include 'intercept'")
        if self.noisy_regressor not in self.coefficients or self.noisy_regressor == "intercept":
            raise ValueError(f"noisy_regressor {self.noisy_regressor!r} not a slope coefficient")
        if self.repetitions < 1 or self.n < 10:
            raise ValueError("need repetitions >= 1 and n >= 10")
        if any(t < 0 for t in self.noise_sds):
            raise ValueError("noise SDs must be >= 0")

    @property
    def regressor_names(self) -> list[str]:
        return [k for k in self.coefficients if k != "intercept"]


@dataclass
class AttenuationCurve:
    """Per-repetition AMEs of the noisy regressor across the noise grid."""

    noise_sds: tuple[float, ...]
    ames: np.ndarray  # (repetitions, len(noise_sds))

    def table(self) -> pd.DataFrame:
        mean = self.ames.mean(axis=0)
        se = self.ames.std(axis=0, ddof=1) / np.sqrt(len(self.ames))
        return pd.DataFrame({"noise_sd": self.noise_sds, "mean_ame": mean, "mc_se": se})

    def step_se(self) -> np.ndarray:
        """MC standard errors of the paired differences between adjacent noise levels."""
        diffs = np.diff(self.ames, axis=1)
        return diffs.std(axis=0, ddof=1) / np.sqrt(len(self.ames))


def attenuation_monte_carlo(config: AttenuationConfig | None = None) -> AttenuationCurve:
    """Refit the probit under increasing measurement noise on one regressor."""
    config = config or AttenuationConfig()
    names = config.regressor_names
    beta = np.array([config.coefficients["intercept"]] + [config.coefficients[k] for k in names])
    spec = RegressionSpec("y", tuple(names), robust=False)
    noisy_idx = names.index(config.noisy_regressor)

    root = np.random.SeedSequence(config.seed)
    ames = np.empty((config.repetitions, len(config.noise_sds)))
    for r, child in enumerate(root.spawn(config.repetitions)):
        rng = np.random.default_rng(child)
        X = rng.standard_normal((config.n, len(names)))
        eta = beta[0] + X @ beta[1:]
        y = (rng.random(config.n) < ndtr(eta)).astype(float)
        noise = rng.standard_normal(config.n)
        for t, tau in enumerate(config.noise_sds):
            observed = X.copy()
            observed[:, noisy_idx] = X[:, noisy_idx] + tau * noise
            frame = pd.DataFrame(observed, columns=names)
            frame["y"] = y
            fit = fit_probit(spec, frame)
            ame = average_marginal_effects(fit, frame)
            ames[r, t] = ame.loc[config.noisy_regressor, "ame"]
    return AttenuationCurve(config.noise_sds, ames)
