"""Observed subvectors of a max-linear model with hidden nodes.

Given the full ML matrix ``A`` and an observed index set ``O`` this module
decides whether ``X_O`` is itself a recursive max-linear vector on a DAG
over ``O`` and, if so, builds its reduced coefficient matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .tropical import REL_TOL, _max_weighted, ancestry_from_matrix, greater


class NotRepresentableError(ValueError):
    """The observed set violates the representability conditions."""

    def __init__(self, report: "ObservabilityReport"):
        self.report = report
        super().__init__(
            f"observed set is not representable ({len(report.violations)} violations)"
        )


def _observed_mask(d: int, O) -> np.ndarray:
    mask = np.zeros(d, dtype=bool)
    idx = sorted({int(o) for o in O})
    if not idx:
        raise ValueError("observed set must be nonempty")
    if idx[0] < 0 or idx[-1] >= d:
        raise IndexError("observed index out of range")
    mask[idx] = True
    return mask


def _lowest_ancestors(A, mask, i, want_observed, tol):
    anc = ancestry_from_matrix(A)
    cands = np.nonzero(anc[i] & (mask if want_observed else ~mask))[0]
    out = set()
    for j in cands:
        # observed nodes strictly between j and i
        mids = np.nonzero(mask & anc[i] & anc[:, j])[0]
        rival = max((A[i, k] * A[k, j] / A[k, k] for k in mids), default=0.0)
        if greater(A[i, j], rival, tol):
            out.add(int(j))
    return out


def lowest_observed_ancestors(A, O, i: int, tol: float = REL_TOL) -> frozenset[int]:
    """Observed ancestors j of i whose best path to i avoids other observed nodes."""
    A = np.asarray(A, dtype=float)
    mask = _observed_mask(A.shape[0], O)
    if not mask[i]:
        raise ValueError(f"node {i} is not observed")
    return frozenset(_lowest_ancestors(A, mask, i, True, tol))


def lowest_hidden_ancestors(A, O, i: int, tol: float = REL_TOL) -> frozenset[int]:
    """``{i}`` plus hidden ancestors whose best path to i avoids observed nodes."""
    A = np.asarray(A, dtype=float)
    mask = _observed_mask(A.shape[0], O)
    if not 0 <= i < A.shape[0]:
        raise IndexError(f"node index {i} out of range")
    return frozenset({int(i)} | _lowest_ancestors(A, mask, i, False, tol))


@dataclass
class Violation:
    clause: str
    nodes: tuple[int, ...]


@dataclass
class ObservabilityReport:
    representable: bool
    sources: frozenset[int]
    violations: list[Violation] = field(default_factory=list)

    def to_json(self, labels=None) -> dict:
        name = (lambda k: labels[k]) if labels is not None else (lambda k: k + 1)
        return {
            "representable": self.representable,
            "V0_O": [name(k) for k in sorted(self.sources)],
            "violations": [
                {"clause": v.clause, "nodes": [name(k) for k in v.nodes]}
                for v in self.violations
            ],
        }


def check_observable(A, O, tol: float = REL_TOL) -> ObservabilityReport:
    """Test whether ``X_O`` is a recursive max-linear vector.

    Every violated clause is reported. Clause tags:
    ``(i)(a)`` nodes (l, j, u): source l and observed j share hidden ancestor u;
    ``(i)(b)`` nodes (u, l, i): no max-weighted path u ~> l ~> i;
    ``(ii)(a)`` nodes (u, j, i) with j an ancestor of i;
    ``(ii)(b)`` nodes (u, i, j) for ancestrally unrelated i, j.
    """
    A = np.asarray(A, dtype=float)
    d = A.shape[0]
    mask = _observed_mask(d, O)
    anc = ancestry_from_matrix(A)
    obs = np.nonzero(mask)[0]
    mw = lambda u, m, i: bool(anc[m, u] and anc[i, m] and _max_weighted(A, u, m, i, tol))

    violations: list[Violation] = []
    sources = set()
    seen_pairs = set()
    for l in obs:
        if (anc[l] & mask).any():
            continue
        ok = True
        for j in obs:
            if j == l or anc[j, l]:
                continue
            shared = np.nonzero(anc[l] & anc[j])[0]
            if shared.size:
                ok = False
                key = (min(l, j), max(l, j))
                if key not in seen_pairs:
                    seen_pairs.add(key)
                    for u in shared:
                        violations.append(Violation("(i)(a)", (int(key[0]), int(key[1]), int(u))))
        for i in np.nonzero(mask & anc[:, l])[0]:
            for u in np.nonzero(anc[l])[0]:
                if not mw(u, l, i):
                    ok = False
                    violations.append(Violation("(i)(b)", (int(u), int(l), int(i))))
        if ok:
            sources.add(int(l))

    covered = np.zeros(d, dtype=bool)
    for l in sources:
        covered |= anc[l]
    for u in np.nonzero(~mask & ~covered)[0]:
        reached = [int(x) for x in obs if anc[x, u]]
        for i, j in combinations(reached, 2):
            if anc[i, j] or anc[j, i]:
                lo, hi = (i, j) if anc[i, j] else (j, i)  # hi is the ancestor
                if mw(u, hi, lo):
                    continue
                if any(mw(u, k, lo) and mw(u, k, hi) for k in np.nonzero(anc[hi] & mask)[0]):
                    continue
                violations.append(Violation("(ii)(a)", (int(u), hi, lo)))
            else:
                common = np.nonzero(anc[i] & anc[j] & mask)[0]
                if any(mw(u, k, i) and mw(u, k, j) for k in common):
                    continue
                violations.append(Violation("(ii)(b)", (int(u), i, j)))

    return ObservabilityReport(not violations, frozenset(sources), violations)


@dataclass
class ObservedModel:
    """Reduced model of an observed subvector.

    ``reduced[r, s]`` is the coefficient of observed node ``observed[s]`` in
    the equation of ``observed[r]``; ``innovations[r]`` lists the hidden
    indices whose innovations load on ``observed[r]`` directly.
    """

    full: np.ndarray
    observed: tuple[int, ...]
    reduced: np.ndarray
    innovations: tuple[frozenset[int], ...]

    def sigma_gap(self) -> float:
        """Largest absolute difference between the two covariance-like matrices."""
        lhs = self.reduced @ self.reduced.T
        rhs = (self.full @ self.full.T)[np.ix_(self.observed, self.observed)]
        return float(np.max(np.abs(lhs - rhs)))

    def sigma_consistent(self, tol: float = REL_TOL) -> bool:
        lhs = self.reduced @ self.reduced.T
        rhs = (self.full @ self.full.T)[np.ix_(self.observed, self.observed)]
        return bool(np.allclose(lhs, rhs, rtol=tol, atol=tol))


def reduced_matrix(A, O, tol: float = REL_TOL) -> ObservedModel:
    """Coefficient matrix of ``X_O`` as its own max-linear model.

    Raises :class:`NotRepresentableError` when the observed set fails the
    representability test.
    """
    A = np.asarray(A, dtype=float)
    report = check_observable(A, O, tol)
    if not report.representable:
        raise NotRepresentableError(report)
    mask = _observed_mask(A.shape[0], O)
    anc = ancestry_from_matrix(A)
    obs = [int(x) for x in np.nonzero(mask)[0]]
    pos = {o: r for r, o in enumerate(obs)}
    d = len(obs)
    red = np.zeros((d, d))
    innov = [frozenset()] * d
    # ancestors first: fewer proper ancestors means earlier generation
    for i in sorted(obs, key=lambda x: (int(anc[x].sum()), -x)):
        r = pos[i]
        hidden = frozenset({i} | _lowest_ancestors(A, mask, i, False, tol))
        innov[r] = hidden
        red[r, r] = np.sqrt(sum(A[i, k] ** 2 for k in hidden))
        low = _lowest_ancestors(A, mask, i, True, tol)
        for j in obs:
            if not anc[i, j]:
                continue
            vals = [A[i, k] / A[k, k] * red[pos[k], pos[j]]
                    for k in low if k == j or anc[k, j]]
            red[r, pos[j]] = max(vals, default=0.0)
    return ObservedModel(A, tuple(obs), red, tuple(innov))
