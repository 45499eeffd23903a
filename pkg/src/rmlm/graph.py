"""Weighted DAGs, ancestry queries and well-ordering.

Nodes are stored 0-based. The ``labels`` tuple carries the 1-based (or
user supplied) names used in every file and report.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
import heapq

import numpy as np


class CycleError(ValueError):
    """Raised when an edge set contains a directed cycle."""


@dataclass(frozen=True, eq=False)
class EdgeWeightDag:
    """DAG with edge weights ``weights[i, k] = c_ik`` for the edge k -> i.

    The diagonal holds the innovation weights ``c_ii > 0``.
    """

    weights: np.ndarray
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=float, copy=True)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] == 0:
            raise ValueError("weights must be a non-empty square matrix")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be finite and nonnegative")
        if np.any(np.diag(w) <= 0):
            raise ValueError("diagonal weights c_ii must be positive")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        labels = tuple(str(x) for x in self.labels) or tuple(
            str(i + 1) for i in range(w.shape[0])
        )
        if len(labels) != w.shape[0] or len(set(labels)) != len(labels):
            raise ValueError("labels must be unique and match the node count")
        object.__setattr__(self, "labels", labels)
        # Triggers the cycle check eagerly.
        _ = self.topological_order

    @classmethod
    def from_edges(cls, node_count, edges, diagonal=None, labels=()):
        """Build from ``{(k, i): c_ik}`` meaning edge k -> i (0-based)."""
        w = np.zeros((node_count, node_count))
        np.fill_diagonal(w, 1.0 if diagonal is None else diagonal)
        for (k, i), c in dict(edges).items():
            if k == i:
                raise ValueError(f"self loop at node {k}")
            if c <= 0:
                raise ValueError(f"edge {k}->{i} must have positive weight")
            w[i, k] = c
        return cls(w, labels)

    @property
    def node_count(self) -> int:
        return self.weights.shape[0]

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Boolean matrix, ``adjacency[i, k]`` iff k is a parent of i."""
        adj = self.weights > 0
        np.fill_diagonal(adj, False)
        return adj

    @property
    def edges(self) -> list[tuple[int, int]]:
        """Edges as (parent, child) pairs sorted by child then parent."""
        child, parent = np.nonzero(self.adjacency)
        return [(int(k), int(i)) for i, k in zip(child, parent)]

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        """Parents before children, smallest index first among ties."""
        adj = self.adjacency
        indeg = adj.sum(axis=1).astype(int)
        heap = [i for i in range(self.node_count) if indeg[i] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            k = heapq.heappop(heap)
            order.append(k)
            for i in np.nonzero(adj[:, k])[0]:
                indeg[i] -= 1
                if indeg[i] == 0:
                    heapq.heappush(heap, int(i))
        if len(order) != self.node_count:
            raise CycleError("edge set contains a directed cycle")
        return tuple(order)

    @cached_property
    def ancestry(self) -> np.ndarray:
        """``ancestry[i, j]`` iff j is a proper ancestor of i."""
        d = self.node_count
        anc = np.zeros((d, d), dtype=bool)
        for i in self.topological_order:
            for k in np.nonzero(self.adjacency[i])[0]:
                anc[i, k] = True
                anc[i] |= anc[k]
        anc.setflags(write=False)
        return anc

    def _check(self, i: int) -> int:
        if not 0 <= int(i) < self.node_count:
            raise IndexError(f"node index {i} out of range")
        return int(i)

    def parents(self, i: int) -> frozenset[int]:
        return frozenset(np.nonzero(self.adjacency[self._check(i)])[0].tolist())

    def children(self, i: int) -> frozenset[int]:
        return frozenset(np.nonzero(self.adjacency[:, self._check(i)])[0].tolist())

    def ancestors(self, i: int) -> frozenset[int]:
        return frozenset(np.nonzero(self.ancestry[self._check(i)])[0].tolist())

    def descendants(self, i: int) -> frozenset[int]:
        return frozenset(np.nonzero(self.ancestry[:, self._check(i)])[0].tolist())

    def ancestors_of_set(self, nodes) -> frozenset[int]:
        """An(U): the set together with all of its ancestors."""
        out = set()
        for i in nodes:
            out.add(self._check(i))
            out |= self.ancestors(i)
        return frozenset(out)

    def is_well_ordered(self) -> bool:
        child, parent = np.nonzero(self.adjacency)
        return bool(np.all(parent > child))

    def relabel(self, order) -> "EdgeWeightDag":
        """New DAG whose node ``j`` is old node ``order[j]``."""
        order = np.asarray(order, dtype=int)
        w = self.weights[np.ix_(order, order)]
        return EdgeWeightDag(w, tuple(self.labels[k] for k in order))

    def restrict(self, nodes) -> "EdgeWeightDag":
        """Induced subgraph on ``nodes`` (kept in increasing index order)."""
        return self.relabel(sorted(int(k) for k in nodes))


def well_order(dag: EdgeWeightDag) -> tuple[np.ndarray, EdgeWeightDag]:
    """Relabel so that every parent has a larger index than its children.

    Sinks are numbered first, smallest original index first, so the result
    is deterministic and the identity on DAGs that are already well ordered.
    Returns ``(order, new_dag)`` where new node ``j`` is old node ``order[j]``.
    """
    adj = dag.adjacency
    outdeg = adj.sum(axis=0).astype(int)
    heap = [k for k in range(dag.node_count) if outdeg[k] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        i = heapq.heappop(heap)
        order.append(i)
        for k in np.nonzero(adj[i])[0]:
            outdeg[k] -= 1
            if outdeg[k] == 0:
                heapq.heappush(heap, int(k))
    if len(order) != dag.node_count:
        raise CycleError("edge set contains a directed cycle")
    order = np.array(order, dtype=int)
    return order, dag.relabel(order)
