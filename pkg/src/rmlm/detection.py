"""Detection matrices and the pairwise max-weighted-path algorithms."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .estimation import (
    ThresholdPlan,
    angular,
    estimate_sigma_T,
    estimate_sigma_max_pair,
    estimate_sigma_max_scaled,
    estimate_sigma_univ,
    transform_T,
)


@dataclass(frozen=True)
class EpsilonConfig:
    eps1: float = 0.25
    eps2: float = 0.01
    eps3: float = 0.07
    eps4: float = 0.01
    eps5: float = 0.07
    eps6: float = 0.2
    a: float = 1.0001

    def __post_init__(self):
        if self.a <= 1:
            raise ValueError("a must exceed 1")
        for name in ("eps1", "eps2", "eps3", "eps4", "eps5", "eps6"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


@dataclass
class DetectionMatrices:
    """Pairwise statistics; entry (i, m) refers to the ordered pair."""

    C1: np.ndarray
    D1: np.ndarray
    D2: np.ndarray
    D3: np.ndarray
    D4: np.ndarray
    diagnostics: list[str] = field(default_factory=list)

    @property
    def d(self) -> int:
        return self.C1.shape[0]

    def as_dict(self) -> dict[str, np.ndarray]:
        return {"C1": self.C1, "D1": self.D1, "D2": self.D2, "D3": self.D3, "D4": self.D4}


def _pair_stats(X, i, m, plan: ThresholdPlan, a: float):
    """Statistics for both orders of the unordered pair (i, m)."""
    pair = X[:, [i, m]]
    s = angular(pair)
    radicand = (estimate_sigma_univ(s, 0, plan.k1) + estimate_sigma_univ(s, 1, plan.k1)
                - estimate_sigma_max_pair(s, plan.k1))
    c1 = min(0.1 + float(np.sqrt(max(radicand, 0.0))), 0.8)
    smax = estimate_sigma_max_pair(s, plan.k2)
    out = {}
    for src, (p, q) in (((i, m), (0, 1)), ((m, i), (1, 0))):
        xy = pair[:, [p, q]]
        d1 = (estimate_sigma_max_scaled(xy, a, plan.k2) - smax - a * a + 1) / (a * a - 1)
        d2 = estimate_sigma_T(transform_T(xy, c1, 1 / c1, plan.k1), plan.k2)
        d3 = estimate_sigma_T(transform_T(xy, 0.1 * c1, 1 / c1, plan.k1), plan.k2) - d2
        out[src] = (c1, d1, d2, d3, smax)
    return out


def build_detection_matrices(data, plan: ThresholdPlan, a: float = 1.0001,
                             threads: int = 1) -> DetectionMatrices:
    """Estimate C1 and D1..D4 for every ordered pair of columns.

    ``data`` should already have Frechet(2) margins. Failures on single pairs
    leave NaN entries and a diagnostics line.
    """
    X = np.asarray(data, dtype=float)
    n, d = X.shape
    if d < 2:
        raise ValueError("need at least two columns")
    plan.check(n)
    mats = [np.full((d, d), np.nan) for _ in range(5)]
    diagnostics = []

    def job(pair):
        try:
            return pair, _pair_stats(X, pair[0], pair[1], plan, a), None
        except (ValueError, FloatingPointError) as exc:
            return pair, None, str(exc)

    pairs = list(combinations(range(d), 2))
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(job, pairs))
    else:
        results = [job(p) for p in pairs]
    for (i, m), stats, err in results:
        if err is not None:
            diagnostics.append(f"pair ({i},{m}): {err}")
            continue
        for (r, c), vals in stats.items():
            for mat, v in zip(mats, vals):
                mat[r, c] = v
    return DetectionMatrices(*mats, diagnostics=diagnostics)


def algorithm_mwp(M: DetectionMatrices, eps: EpsilonConfig = EpsilonConfig()) -> np.ndarray:
    """Boolean matrix of pairs passing all four screening sets."""
    with np.errstate(invalid="ignore"):
        s1 = (M.D1 >= -eps.eps1) & (M.D1 - M.D1.T >= -eps.eps2)
        s2 = M.D2 > 1 - eps.eps3
        s3 = M.D2 > M.D2.T + eps.eps4
        s4 = M.D3 < eps.eps5 * M.C1
    P = s1 & s2 & s3 & s4
    np.fill_diagonal(P, False)
    return P


def algorithm_mwp_indist(M: DetectionMatrices, eps: EpsilonConfig = EpsilonConfig()):
    """MWP pairs plus strongly dependent pairs whose direction is unresolved."""
    P = algorithm_mwp(M, eps)
    with np.errstate(invalid="ignore"):
        strong = M.D4 < 1 + eps.eps6
    Pstar = ~P & strong
    np.fill_diagonal(Pstar, False)
    return P, Pstar


def edge_list(P, Pstar, labels) -> list[tuple[str, str, str]]:
    """Rows (source, target, kind): m -> i for P[i, m], undirected for P*.

    A pair that already has a directed edge gets no undirected one.
    """
    rows = []
    d = P.shape[0]
    for i in range(d):
        for m in range(d):
            if P[i, m]:
                rows.append((labels[m], labels[i], "directed"))
    for i, m in combinations(range(d), 2):
        if (Pstar[i, m] or Pstar[m, i]) and not (P[i, m] or P[m, i]):
            rows.append((labels[i], labels[m], "undirected"))
    return rows
