"""Product-of-univariate-Gaussians anomaly detector.

The model is fit on traffic believed to be normal: per-feature mean and
population variance.  A sample's score is the product of the univariate
densities, and anything scoring below a threshold epsilon, chosen as a low
quantile of the training scores, is flagged.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, InsufficientDataError, LengthError

# Keeps near-constant features from producing zero variance; scaled so the
# floor tracks the magnitude of the data.
VARIANCE_FLOOR_SCALE = 1e-12


@dataclass(frozen=True)
class FeatureVector:
    """Per-interval traffic volume of one port, both directions."""

    rx_bytes: float
    tx_bytes: float

    def as_array(self) -> np.ndarray:
        return np.array([self.rx_bytes, self.tx_bytes], dtype=np.float64)


@dataclass(frozen=True)
class GaussianModel:
    mu: np.ndarray
    sigma2: np.ndarray
    epsilon: float | None = None
    quantile: float | None = None

    @property
    def n_features(self) -> int:
        return self.mu.shape[0]


@dataclass(frozen=True)
class AnomalyReport:
    flags: np.ndarray
    probabilities: np.ndarray
    epsilon: float

    def flagged_indices(self) -> np.ndarray:
        return np.flatnonzero(self.flags)


def as_feature_matrix(samples) -> np.ndarray:
    """Coerce samples to a float (m, k) matrix.

    Accepts a 1-D array (one feature per sample), a 2-D array, or a sequence
    of FeatureVector / tuples.
    """
    if isinstance(samples, np.ndarray):
        arr = samples.astype(np.float64, copy=False)
    else:
        rows = [
            s.as_array() if isinstance(s, FeatureVector) else np.asarray(s, dtype=np.float64)
            for s in samples
        ]
        arr = np.array(rows, dtype=np.float64) if rows else np.empty((0, 1))
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise LengthError(f"expected samples of shape (m,) or (m, k), got {arr.shape}")
    return arr


def fit(samples) -> GaussianModel:
    """Estimate per-feature mean and population variance.

    Variances use the 1/m denominator and are floored at
    ``VARIANCE_FLOOR_SCALE * (1 + mu**2)`` so constant features stay usable.

    Raises:
        InsufficientDataError: fewer than 2 samples.
        DataError: non-finite values.
    """
    x = as_feature_matrix(samples)
    if x.shape[0] < 2:
        raise InsufficientDataError(f"need at least 2 samples to fit, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise DataError("training samples contain non-finite values")
    mu = x.mean(axis=0)
    sigma2 = np.mean((x - mu) ** 2, axis=0)
    sigma2 = np.maximum(sigma2, VARIANCE_FLOOR_SCALE * (1.0 + mu**2))
    mu.setflags(write=False)
    sigma2.setflags(write=False)
    return GaussianModel(mu=mu, sigma2=sigma2)


def log_probabilities(model: GaussianModel, samples) -> np.ndarray:
    """Log density of each sample under the model, summed over features."""
    x = as_feature_matrix(samples)
    if x.shape[1] != model.n_features:
        raise LengthError(
            f"model has {model.n_features} features, samples have {x.shape[1]}"
        )
    z2 = (x - model.mu) ** 2 / model.sigma2
    return -0.5 * np.sum(z2 + np.log(2.0 * math.pi * model.sigma2), axis=1)


def probabilities(model: GaussianModel, samples) -> np.ndarray:
    return np.exp(log_probabilities(model, samples))


def probability(model: GaussianModel, sample) -> float:
    """Density of a single sample (product over independent features)."""
    if isinstance(sample, FeatureVector):
        x = sample.as_array()
    else:
        x = np.atleast_1d(np.asarray(sample, dtype=np.float64))
    return float(probabilities(model, x[None, :])[0])


def select_threshold(train_probabilities, quantile: float = 0.01) -> float:
    """Empirical lower quantile of the training probabilities.

    With m sorted values the threshold is ``sorted[floor(quantile * (m-1))]``,
    so it always coincides with an observed probability.
    """
    p = np.asarray(train_probabilities, dtype=np.float64).ravel()
    if p.size == 0:
        raise InsufficientDataError("cannot select a threshold from zero probabilities")
    if not 0.0 <= quantile <= 1.0:
        raise DataError(f"quantile must lie in [0, 1], got {quantile}")
    return float(np.quantile(p, quantile, method="lower"))


def calibrate(model: GaussianModel, train_samples, quantile: float = 0.01) -> GaussianModel:
    """Return a copy of the model with epsilon picked from training scores."""
    eps = select_threshold(probabilities(model, train_samples), quantile)
    return dataclasses.replace(model, epsilon=eps, quantile=quantile)


def detect(model: GaussianModel, samples) -> AnomalyReport:
    """Flag every sample scoring strictly below the model's epsilon.

    Comparison happens in probability space; scores too small to represent
    underflow to 0.0 and are still flagged whenever epsilon is positive.
    """
    if model.epsilon is None:
        raise ValueError("model has no threshold; run calibrate() first")
    probs = probabilities(model, samples)
    flags = probs < model.epsilon
    probs.setflags(write=False)
    flags.setflags(write=False)
    return AnomalyReport(flags=flags, probabilities=probs, epsilon=model.epsilon)
