"""Rank standardization and threshold estimators of extreme dependence."""
from __future__ import annotations

from dataclasses import dataclass
import warnings

import numpy as np
from scipy.stats import rankdata


class DegenerateSampleWarning(UserWarning):
    """A transformed coordinate carries no information."""


@dataclass(frozen=True)
class ThresholdPlan:
    """First-stage (k1) and second-stage (k2) exceedance counts."""

    k1: int
    k2: int

    def __post_init__(self):
        if not 1 <= self.k2 <= self.k1:
            raise ValueError(f"need 1 <= k2 <= k1, got k1={self.k1}, k2={self.k2}")

    def check(self, n: int) -> None:
        if self.k1 > n:
            raise ValueError(f"k1={self.k1} exceeds the sample size {n}")


PRESETS = {
    "paper-1000": ThresholdPlan(200, 100),
    "paper-5000": ThresholdPlan(500, 200),
}


def frechet2_transform(raw) -> np.ndarray:
    """Columnwise empirical transform to unit Frechet(2) margins.

    Ranks count the observations less than or equal to each value.
    """
    X = np.asarray(raw, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n = X.shape[0]
    if n < 2:
        raise ValueError("need at least two observations")
    ranks = rankdata(X, method="max", axis=0)
    return (-np.log(ranks / (n + 1))) ** -0.5


def pareto2_transform(pairs) -> np.ndarray:
    """Columnwise rank transform to standard Pareto(2); ties keep input order."""
    T = np.asarray(pairs, dtype=float)
    N = T.shape[0]
    if N < 2:
        raise ValueError("need at least two rows")
    ranks = rankdata(T, method="ordinal", axis=0)
    return (1 - ranks / (N + 1)) ** -0.5


@dataclass(frozen=True)
class AngularSample:
    radii: np.ndarray
    angles: np.ndarray

    @property
    def n(self) -> int:
        return self.radii.shape[0]

    def top(self, k: int) -> np.ndarray:
        """Indices of the k largest radii (ties resolved by input order)."""
        if not 1 <= k <= self.n:
            raise ValueError(f"k={k} must lie in [1, {self.n}]")
        return np.argsort(-self.radii, kind="stable")[:k]


def angular(pairs) -> AngularSample:
    X = np.asarray(pairs, dtype=float)
    R = np.linalg.norm(X, axis=1)
    if np.any(R == 0):
        raise ValueError("angular decomposition of a zero row")
    return AngularSample(R, X / R[:, None])


def estimate_sigma_max_pair(s: AngularSample, k: int) -> float:
    w = s.angles[s.top(k)]
    return float(2.0 / k * np.sum(np.max(w**2, axis=1)))


def estimate_sigma_univ(s: AngularSample, coordinate: int, k: int) -> float:
    w = s.angles[s.top(k), coordinate]
    return float(2.0 / k * np.sum(w**2))


def estimate_sigma_max_scaled(pairs, a: float, k2: int) -> float:
    """Scaling of max(X_i, a X_m), reweighted for the total mass 1 + a^2."""
    if a <= 1:
        raise ValueError("a must exceed 1")
    X = np.asarray(pairs, dtype=float) * np.array([1.0, a])
    s = angular(X)
    w = s.angles[s.top(k2)]
    return float((a * a + 1) / k2 * np.sum(np.max(w**2, axis=1)))


def _t_rows(xi, xm, c1, c2):
    first = np.maximum(c1 * xi, xm) - c1 * xi
    second = (1 + c2) * xm + c2 * xi - c2 * np.maximum(xi, xm)
    return np.column_stack([first, second])


def _check_constants(c1, c2):
    if not 0 < c1 <= 1:
        raise ValueError("c1 must lie in (0, 1]")
    if c2 <= 0:
        raise ValueError("c2 must be positive")


def transform_T(pairs, c1: float, c2: float, k1: int) -> np.ndarray:
    """Keep the k1 largest-radius rows of (x_i, x_m) and apply the pair map."""
    _check_constants(c1, c2)
    X = np.asarray(pairs, dtype=float)
    keep = angular(X).top(k1)
    keep.sort()
    return _t_rows(X[keep, 0], X[keep, 1], c1, c2)


def transform_T_kappa(data, i: int, m: int, kappa, c1: float, c2: float, k1: int) -> np.ndarray:
    """Pair map applied to the increments of X_i, X_m over max of ``kappa``.

    Rows where the conditioning maximum dominates both coordinates are dropped.
    """
    _check_constants(c1, c2)
    kappa = list(kappa)
    if {i, m} & set(kappa) or i == m:
        raise ValueError("conditioning set overlaps the pair")
    X = np.asarray(data, dtype=float)
    if not kappa:
        return transform_T(X[:, [i, m]], c1, c2, k1)
    cols = [i, m] + kappa
    keep = angular(X[:, cols]).top(k1)
    keep.sort()
    sub = X[keep]
    base = sub[:, kappa].max(axis=1)
    t3 = np.column_stack([np.maximum(base, sub[:, i]) - base, np.maximum(base, sub[:, m]) - base])
    t3 = t3[np.any(t3 > 0, axis=1)]
    return _t_rows(t3[:, 0], t3[:, 1], c1, c2)


def estimate_sigma_T(T, k2: int) -> float:
    """Extreme dependence of the Pareto-standardized transformed pair.

    Averages ``2 w1 w2`` over the ``min(k2, N)`` largest radii.
    """
    T = np.asarray(T, dtype=float)
    N = T.shape[0]
    if N < 2:
        raise ValueError("need at least two transformed rows")
    if np.any(np.ptp(T, axis=0) == 0):
        warnings.warn("constant transformed coordinate; returning 0", DegenerateSampleWarning)
        return 0.0
    s = angular(pareto2_transform(T))
    k = min(k2, N)
    w = s.angles[s.top(k)]
    return float(2.0 / k * np.sum(w[:, 0] * w[:, 1]))


def estimate_sigma_pair(pairs, k: int) -> float:
    """Extreme dependence of a standardized pair from its top-k angles."""
    s = angular(pairs)
    w = s.angles[s.top(k)]
    return float(2.0 / k * np.sum(w[:, 0] * w[:, 1]))
