"""Population quantities of a max-linear vector with tail index 2."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hidden import check_observable
from .tropical import REL_TOL, ancestry_from_matrix, close, greater


class UndefinedDependenceError(ValueError):
    """A transformed pair has a coordinate whose spectral atoms all vanish."""


def sigma_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    return A @ A.T


def sigma_max(A, rows, scales=None) -> float:
    """Scaling of the componentwise maximum of the chosen rows.

    ``scales`` multiplies each chosen row before taking maxima.
    """
    A = np.asarray(A, dtype=float)
    rows = list(rows)
    if not rows:
        raise ValueError("need at least one row")
    sub = A[rows]
    if scales is not None:
        sub = sub * np.asarray(scales, dtype=float)[:, None]
    return float(np.sum(np.max(sub**2, axis=0)))


def exponent_measure(A, x) -> float:
    """Exponent measure of the complement of the box [0, x]."""
    A = np.asarray(A, dtype=float)
    x = np.asarray(x, dtype=float)
    if x.shape != (A.shape[0],) or np.any(x <= 0):
        raise ValueError("x must be a positive vector with one entry per row")
    return float(np.sum(np.max(A**2 / x[:, None] ** 2, axis=0)))


@dataclass(frozen=True)
class SpectralMeasure:
    atoms: np.ndarray  # d x K, unit columns
    masses: np.ndarray  # K

    @property
    def dimension(self) -> int:
        return self.atoms.shape[0]

    @property
    def probabilities(self) -> np.ndarray:
        return self.masses / self.masses.sum()


def spectral_measure(A) -> SpectralMeasure:
    """Atoms are the normalized nonzero columns, masses their squared norms."""
    A = np.asarray(A, dtype=float)
    norms = np.linalg.norm(A, axis=0)
    keep = norms > 0
    return SpectralMeasure(A[:, keep] / norms[keep], norms[keep] ** 2)


@dataclass(frozen=True)
class TransformSpec:
    """Pair (i, m) and the constants of the pair transformation."""

    i: int
    m: int
    c1: float
    c2: float
    c1_alt: float | None = None
    kappa: tuple[int, ...] = ()

    def __post_init__(self):
        if self.i == self.m:
            raise ValueError("pair needs two distinct nodes")
        if not 0 < self.c1 <= 1:
            raise ValueError("c1 must lie in (0, 1]")
        if self.c1_alt is not None and not 0 < self.c1_alt <= 1:
            raise ValueError("c1_alt must lie in (0, 1]")
        if self.c2 <= 0:
            raise ValueError("c2 must be positive")
        if {self.i, self.m} & set(self.kappa):
            raise ValueError("conditioning set overlaps the pair")


def _t_map(ti, tm, c1, c2):
    first = np.maximum(c1 * ti, tm) - c1 * ti
    second = (1 + c2) * tm + c2 * ti - c2 * np.maximum(ti, tm)
    return np.vstack([first, second])


def t_atoms(A, spec: TransformSpec) -> np.ndarray:
    """Unnormalized spectral atoms (2 x D) of the transformed pair."""
    A = np.asarray(A, dtype=float)
    return _t_map(A[spec.i], A[spec.m], spec.c1, spec.c2)


def t3_kappa_atoms(A, i: int, m: int, kappa) -> np.ndarray:
    """Atoms of the increments of i and m over the maximum of ``kappa``."""
    A = np.asarray(A, dtype=float)
    kappa = list(kappa)
    base = A[kappa].max(axis=0) if kappa else np.zeros(A.shape[1])
    return np.vstack([np.maximum(base, A[i]) - base, np.maximum(base, A[m]) - base])


def assumption_b_violations(A, i: int, m: int, kappa, observed=None, tol=REL_TOL) -> list[str]:
    """Human-readable list of failed conditioning assumptions (empty if fine)."""
    A = np.asarray(A, dtype=float)
    kappa = sorted(set(int(k) for k in kappa))
    if not kappa:
        return []
    anc = ancestry_from_matrix(A)
    closure = np.zeros(A.shape[0], dtype=bool)
    for k in kappa:
        closure |= anc[k]
        closure[k] = True
    out = []
    if closure[i] or closure[m]:
        out.append("pair lies in An(kappa)")
    if not check_observable(A, kappa, tol).representable:
        out.append("kappa is not representable on its own")
    if observed is not None:
        extra = sorted(set(int(o) for o in observed) & set(np.nonzero(closure)[0].tolist()) - set(kappa))
        if extra:
            out.append(f"observed ancestors of kappa outside kappa: {extra}")
        obs_mask = np.zeros(A.shape[0], dtype=bool)
        obs_mask[list(observed)] = True
    else:
        obs_mask = np.zeros(A.shape[0], dtype=bool)
        obs_mask[kappa + [i, m]] = True
    for u in np.nonzero(anc[i] & anc[m] & closure & ~obs_mask)[0]:
        good = any(
            (A[k, u] > 0)
            and anc[i, k] and anc[m, k]
            and close(A[k, k] * A[i, u], A[k, u] * A[i, k], tol)
            and close(A[k, k] * A[m, u], A[k, u] * A[m, k], tol)
            for k in kappa
        )
        if not good:
            out.append(f"hidden confounder {u} not routed through kappa")
    return out


def t_kappa_atoms(A, spec: TransformSpec, observed=None) -> np.ndarray:
    """Atoms of the transformed pair after removing the influence of ``kappa``."""
    problems = assumption_b_violations(A, spec.i, spec.m, spec.kappa, observed)
    if problems:
        raise ValueError("; ".join(problems))
    t3 = t3_kappa_atoms(A, spec.i, spec.m, spec.kappa)
    return _t_map(t3[0], t3[1], spec.c1, spec.c2)


def _cosine(atoms: np.ndarray) -> float:
    norms = np.linalg.norm(atoms, axis=1)
    if np.any(norms == 0):
        raise UndefinedDependenceError("a transformed coordinate has no mass")
    return float(np.dot(atoms[0] / norms[0], atoms[1] / norms[1]))


def population_sigma_T(A, spec: TransformSpec) -> float:
    """Extreme dependence of the Pareto-standardized transformed pair."""
    atoms = t_kappa_atoms(A, spec) if spec.kappa else t_atoms(A, spec)
    return _cosine(atoms)


def delta_c(A, spec: TransformSpec) -> float:
    """Change of the transformed dependence when c1 is replaced by ``c1_alt``."""
    if spec.c1_alt is None:
        raise ValueError("spec needs c1_alt")
    alt = TransformSpec(spec.i, spec.m, spec.c1_alt, spec.c2, None, spec.kappa)
    return abs(population_sigma_T(A, alt) - population_sigma_T(A, spec))


def cond1_check(A, i: int, m: int, a: float, tol: float = REL_TOL) -> tuple[bool, bool]:
    """(equality, strict inequality) of the two-node scaling condition."""
    if a <= 1:
        raise ValueError("a must exceed 1")
    base = sigma_max(A, [i, m])
    eq = close(sigma_max(A, [i, m], [1, a]), base + a * a - 1, tol)
    strict = greater(base + a * a - 1, sigma_max(A, [i, m], [a, 1]), tol)
    return bool(eq), bool(strict)


def cond2_check(A, i: int, m: int, kappa, a: float, tol: float = REL_TOL) -> tuple[bool, bool]:
    """Conditional analogue of :func:`cond1_check` given the set ``kappa``."""
    if a <= 1:
        raise ValueError("a must exceed 1")
    kappa = list(kappa)
    rows = [i, m] + kappa
    base = sigma_max(A, rows)
    lhs_eq = sigma_max(A, rows, [1, a] + [a] * len(kappa))
    rhs_eq = base + (a * a - 1) * sigma_max(A, [m] + kappa)
    lhs_st = sigma_max(A, rows, [a, 1] + [a] * len(kappa))
    rhs_st = base + (a * a - 1) * sigma_max(A, [i] + kappa)
    return bool(close(lhs_eq, rhs_eq, tol)), bool(greater(rhs_st, lhs_st, tol))


def clt_variance(A_pair) -> float:
    """Asymptotic variance of the thresholded extreme-dependence estimator."""
    P = np.asarray(A_pair, dtype=float)
    if P.shape[0] != 2:
        raise ValueError("expected a 2 x D matrix")
    sq = np.sum(P**2, axis=0)
    keep = sq > 0
    s12 = float(P[0] @ P[1])
    return float(2 * np.sum(P[0, keep] ** 2 * P[1, keep] ** 2 / sq[keep]) - s12**2)


def calibrated_c1(A, i: int, m: int) -> float:
    """Truncated scaling used as c1 for the pair (standardized A)."""
    radicand = max(sigma_max(A, [i]) + sigma_max(A, [m]) - sigma_max(A, [i, m]), 0.0)
    return min(0.1 + float(np.sqrt(radicand)), 0.8)


def pair_record(A, i: int, m: int, a: float = 1.0001, truth=None) -> dict:
    """Population summary of one ordered pair (standardized A)."""
    from .tropical import mwp_ground_truth

    c1 = calibrated_c1(A, i, m)
    spec = TransformSpec(i, m, c1, 1 / c1, 0.1 * c1)
    try:
        st = population_sigma_T(A, spec)
        dc = delta_c(A, spec)
    except UndefinedDependenceError:
        st = dc = None
    if truth is None:
        truth = mwp_ground_truth(A)
    return {
        "cond1": list(cond1_check(A, i, m, a)),
        "sigmaT": st,
        "deltaC": dc,
        "mwp_truth": bool(truth[i, m]),
        "c1": c1,
    }
