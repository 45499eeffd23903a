"""Brute-force reference implementations used only by the tests."""
from __future__ import annotations

from itertools import product

import numpy as np


def enumerate_paths(C: np.ndarray, j: int, i: int) -> list[list[int]]:
    """All directed paths j -> ... -> i, with C[child, parent] > 0 as edges."""
    D = C.shape[0]
    out = []

    def walk(path):
        node = path[-1]
        if node == i:
            out.append(list(path))
            return
        for child in range(D):
            if child != node and C[child, node] > 0:
                walk(path + [child])

    walk([j])
    return out


def path_weight_matrix(C: np.ndarray) -> np.ndarray:
    """Maximum over enumerated paths of c_jj times the edge weights."""
    D = C.shape[0]
    A = np.zeros((D, D))
    for i, j in product(range(D), repeat=2):
        best = 0.0
        for p in enumerate_paths(C, j, i):
            w = C[j, j]
            for a, b in zip(p, p[1:]):
                w *= C[b, a]
            best = max(best, w)
        A[i, j] = best
    return A


def reachability(C: np.ndarray) -> np.ndarray:
    """anc[i, j] iff a path j -> i exists, via repeated boolean squaring."""
    D = C.shape[0]
    R = (C > 0) & ~np.eye(D, dtype=bool)
    for _ in range(D):
        R = R | ((R.astype(int) @ R.astype(int)) > 0)
    return R


def mwp_by_paths(C: np.ndarray, tol=1e-9) -> np.ndarray:
    """MWP from explicit paths: every common ancestor's best path to i meets m."""
    A = path_weight_matrix(C)
    D = C.shape[0]
    out = np.zeros((D, D), dtype=bool)
    for i, m in product(range(D), repeat=2):
        if i == m:
            continue
        shared = [u for u in range(D) if A[i, u] > 0 and A[m, u] > 0]
        if not shared:
            continue
        ok = True
        for u in shared:
            best = A[i, u]
            through = max(
                (np.prod([C[b, a] for a, b in zip(p, p[1:])]) * C[u, u]
                 for p in enumerate_paths(C, u, i) if m in p),
                default=0.0,
            )
            if abs(best - through) > tol * best:
                ok = False
                break
        out[i, m] = ok
    return out
