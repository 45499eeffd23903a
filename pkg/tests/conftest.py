import numpy as np
from hypothesis import strategies as st

from rmlm.graph import EdgeWeightDag


def labels1(nodes):
    """0-based index set to the 1-based labels used in examples."""
    return {k + 1 for k in nodes}


@st.composite
def random_dags(draw, max_nodes=8, well_ordered=True):
    """Random weighted DAG; when not well ordered the labels are shuffled."""
    d = draw(st.integers(1, max_nodes))
    seed = draw(st.integers(0, 2**32 - 1))
    p = draw(st.floats(0.0, 1.0))
    rng = np.random.default_rng(seed)
    w = np.triu(rng.random((d, d)) < p, k=1) * rng.uniform(0.2, 1.5, size=(d, d))
    np.fill_diagonal(w, rng.uniform(0.5, 1.5, size=d))
    if not well_ordered:
        perm = rng.permutation(d)
        w = w[np.ix_(perm, perm)]
    return EdgeWeightDag(w)
