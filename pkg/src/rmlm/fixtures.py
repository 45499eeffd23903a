"""Small named DAGs used in examples, tests and demos.

Edges are given with 1-based labels as ``(parent, child): weight``.
"""
from __future__ import annotations

from .graph import EdgeWeightDag


def _dag(d: int, edges: dict[tuple[int, int], float]) -> EdgeWeightDag:
    return EdgeWeightDag.from_edges(d, {(k - 1, i - 1): c for (k, i), c in edges.items()})


def chain3(c12: float = 0.8, c23: float = 0.5) -> EdgeWeightDag:
    """3 -> 2 -> 1."""
    return _dag(3, {(3, 2): c23, (2, 1): c12})


def triangle3(c12: float = 0.9, c23: float = 0.9, c13: float = 0.5) -> EdgeWeightDag:
    """3 -> 2 -> 1 plus the shortcut 3 -> 1.

    With the defaults the path 3 -> 2 -> 1 is max-weighted.
    """
    return _dag(3, {(3, 2): c23, (2, 1): c12, (3, 1): c13})


def confounder3(c13: float = 0.8, c23: float = 0.9) -> EdgeWeightDag:
    """Node 3 is a common parent of 1 and 2, no edge between them."""
    return _dag(3, {(3, 1): c13, (3, 2): c23})


FIGURE2_EDGES = {
    (7, 4): 0.9, (12, 10): 0.8, (5, 3): 0.5, (6, 3): 0.7, (4, 1): 0.8,
    (4, 2): 0.9, (12, 6): 0.3, (7, 2): 0.4, (7, 1): 0.3, (9, 7): 0.6,
    (9, 5): 0.5, (10, 6): 0.9, (10, 5): 0.6, (8, 7): 0.5,
    (11, 8): 0.7, (11, 9): 0.7,
}
FIGURE2_HIDDEN = (5, 7, 11, 12)


def figure2(with_node_11: bool = True) -> EdgeWeightDag:
    """Twelve-node DAG with hidden nodes 5, 7, 11, 12.

    Weights make 12 -> 10 -> 6, 12 -> 10 ~> 3, 7 -> 4 -> 1 and 7 -> 4 -> 2
    max-weighted. Without node 11 it stays in the graph as an isolated node.
    """
    edges = dict(FIGURE2_EDGES)
    if not with_node_11:
        edges = {e: c for e, c in edges.items() if e[0] != 11}
    return _dag(12, edges)


def figure2_observed() -> list[int]:
    """0-based observed indices of :func:`figure2`."""
    return [k - 1 for k in range(1, 13) if k not in FIGURE2_HIDDEN]


NAMED = {
    "chain": chain3,
    "triangle": triangle3,
    "triangle-direct": lambda: triangle3(c13=0.95),
    "confounder": confounder3,
    "figure2": figure2,
    "figure2-reduced": lambda: figure2(False),
}
