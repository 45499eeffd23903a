"""Max-times algebra, ML coefficient matrices and max-weighted paths.

An ML coefficient matrix ``A`` satisfies ``a_ij > 0`` exactly when j is i or
an ancestor of i, so every ancestry query below reads the support of ``A``.
"""
from __future__ import annotations

import numpy as np

from .graph import EdgeWeightDag

REL_TOL = 1e-9


def close(x, y, tol: float = REL_TOL):
    """Relative equality ``|x - y| <= tol * max(|x|, |y|)`` (elementwise)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.abs(x - y) <= tol * np.maximum(np.abs(x), np.abs(y))


def greater(x, y, tol: float = REL_TOL):
    """Strict ``x > y`` by more than ``tol`` times the larger magnitude."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return x - y > tol * np.maximum(np.abs(x), np.abs(y))


def max_times_product(A, B) -> np.ndarray:
    """``(A x_max B)_ij = max_k a_ik b_kj``; ``B`` may be a vector."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    vector = B.ndim == 1
    if vector:
        B = B[:, None]
    if A.ndim != 2 or A.shape[1] != B.shape[0]:
        raise ValueError(f"dimension mismatch: {A.shape} x {B.shape}")
    if np.any(A < 0) or np.any(B < 0):
        raise ValueError("max-times product needs nonnegative entries")
    out = np.max(A[:, :, None] * B[None, :, :], axis=1)
    return out[:, 0] if vector else out


def ml_matrix(dag: EdgeWeightDag) -> np.ndarray:
    """Maximal path weights ``a_ij`` over paths j ~> i, including ``c_jj``.

    One sweep in topological order: row i is the columnwise maximum of
    ``c_ii e_i`` and ``c_ik * A[k]`` over parents k.
    """
    C = dag.weights
    D = dag.node_count
    A = np.zeros((D, D))
    for i in dag.topological_order:
        row = np.zeros(D)
        row[i] = C[i, i]
        for k in np.nonzero(dag.adjacency[i])[0]:
            np.maximum(row, C[i, k] * A[k], out=row)
        A[i] = row
    return A


def standardize(A) -> np.ndarray:
    """Scale each row to unit Euclidean norm."""
    A = np.asarray(A, dtype=float)
    norms = np.linalg.norm(A, axis=1)
    if np.any(norms == 0):
        raise ValueError("cannot standardize a zero row")
    return A / norms[:, None]


def ancestry_from_matrix(A) -> np.ndarray:
    """``anc[i, j]`` iff j is a proper ancestor of i, read off the support."""
    anc = np.asarray(A) > 0
    anc = anc.copy()
    np.fill_diagonal(anc, False)
    return anc


def minimum_ml_dag(A, dag: EdgeWeightDag, tol: float = REL_TOL) -> list[tuple[int, int]]:
    """Edges (k, i) of ``dag`` that no longer path through a descendant of k beats."""
    A = np.asarray(A, dtype=float)
    anc = ancestry_from_matrix(A)
    kept = []
    for k, i in dag.edges:
        between = [l for l in dag.parents(i) if anc[l, k]]
        rival = max((A[i, l] * A[l, k] / A[l, l] for l in between), default=0.0)
        if greater(A[i, k], rival, tol):
            kept.append((k, i))
    return kept


def _max_weighted(A, u, m, i, tol):
    return close(A[m, m] * A[i, u], A[m, u] * A[i, m], tol)


def is_max_weighted(A, u: int, m: int, i: int, tol: float = REL_TOL) -> bool:
    """Whether the max-weighted path u ~> i can be routed through m.

    Requires u in An(m) and m a proper ancestor of i.
    """
    A = np.asarray(A, dtype=float)
    if A[m, u] <= 0:
        raise ValueError(f"node {u} is not in An({m})")
    if m == i or A[i, m] <= 0:
        raise ValueError(f"node {m} is not a proper ancestor of {i}")
    return bool(_max_weighted(A, u, m, i, tol))


def mwp_ground_truth(A, tol: float = REL_TOL) -> np.ndarray:
    """Boolean matrix of pairs (i, m) with the max-weighted path property.

    Pairs with no common ancestor are excluded (entry 0).
    """
    A = np.asarray(A, dtype=float)
    d = A.shape[0]
    support = A > 0
    out = np.zeros((d, d), dtype=bool)
    for i in range(d):
        for m in range(d):
            if i == m:
                continue
            shared = support[i] & support[m]
            if not shared.any():
                continue
            lhs = A[m, m] * A[i, shared]
            rhs = A[m, shared] * A[i, m]
            out[i, m] = bool(np.all(close(lhs, rhs, tol)))
    return out
