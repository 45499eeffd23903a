import numpy as np
import pytest
from hypothesis import given, settings

from conftest import random_dags
from rmlm.fixtures import chain3, confounder3, figure2, triangle3
from rmlm.oracle import (
    TransformSpec, UndefinedDependenceError, calibrated_c1, clt_variance, cond1_check, cond2_check,
    delta_c, exponent_measure, population_sigma_T, sigma_matrix, sigma_max, spectral_measure,
    t3_kappa_atoms, t_atoms, t_kappa_atoms,
)
from rmlm.tropical import ml_matrix, mwp_ground_truth, standardize


def std(dag):
    return standardize(ml_matrix(dag))


def spec_for(A, i, m, kappa=()):
    c1 = calibrated_c1(A, i, m)
    return TransformSpec(i, m, c1, 1 / c1, 0.1 * c1, tuple(kappa))


def test_sigma_matrix():
    A = std(triangle3())
    S = sigma_matrix(A)
    np.testing.assert_allclose(np.diag(S), 1)
    assert S[0, 1] == pytest.approx(0.7710391945419439, rel=1e-12)
    assert np.array_equal(sigma_matrix(np.eye(3)), np.eye(3))


def test_sigma_max_examples():
    assert sigma_max(np.eye(2), [0, 1]) == 2
    assert sigma_max(std(triangle3()), [1]) == pytest.approx(1)
    assert sigma_max([[1, 0], [0.6, 0.8]], [0, 1]) == pytest.approx(1.64)
    with pytest.raises(ValueError):
        sigma_max(np.eye(2), [])


def test_exponent_measure_examples():
    assert exponent_measure(np.eye(2), [1, 1]) == 2
    row = standardize([[0.3, 0.5, 0.8]])[0]
    assert exponent_measure(np.vstack([row, row]), [1, 1]) == pytest.approx(1)
    assert exponent_measure(std(triangle3())[:2], [2, 1]) == pytest.approx(1.1013746401200275, rel=1e-12)
    with pytest.raises(ValueError):
        exponent_measure(np.eye(2), [1, 0])


@given(random_dags(max_nodes=8))
def test_spectral_masses_sum_to_dimension(dag):
    A = standardize(ml_matrix(dag))
    H = spectral_measure(A)
    assert H.masses.sum() == pytest.approx(dag.node_count)
    np.testing.assert_allclose(np.linalg.norm(H.atoms, axis=0), 1)
    assert H.probabilities.sum() == pytest.approx(1)


def test_t_atoms_examples():
    A = std(confounder3())
    # node 3's column only; a column outside both ancestries is zero
    B = np.hstack([A[:2], np.zeros((2, 1))])
    assert np.array_equal(t_atoms(B, TransformSpec(0, 1, 0.5, 2))[:, 3], [0, 0])
    T = t_atoms(np.eye(2), TransformSpec(0, 1, 0.5, 2))
    assert np.array_equal(T[:, 0], [0, 0])
    np.testing.assert_allclose((T / np.linalg.norm(T, axis=1)[:, None])[:, 1], [1, 1])


def test_t_atoms_proportional_under_mwp():
    A = std(triangle3())
    c1, c2 = 0.6, 1 / 0.6
    T = t_atoms(A, TransformSpec(0, 1, c1, c2))
    b = A[0, 1] / A[1, 1]
    np.testing.assert_allclose(T[0], (1 - c1 * b) * A[1])
    np.testing.assert_allclose(T[1], (1 + c2 * b) * A[1])


def test_kappa_atoms_examples():
    A = std(triangle3())
    spec = TransformSpec(0, 1, 0.5, 2)
    np.testing.assert_array_equal(t_kappa_atoms(A, spec), t_atoms(A, spec))
    F = std(figure2(False))
    nonzero = np.nonzero(t3_kappa_atoms(F, 1, 3, (7, 8, 9)).any(axis=0))[0] + 1
    assert nonzero.tolist() == [2, 4, 7]
    T = t_kappa_atoms(F, spec_for(F, 1, 3, (7, 8, 9)))
    assert set((np.nonzero(T.any(axis=0))[0] + 1).tolist()) <= {2, 4, 7}


def test_kappa_atoms_chain_keeps_hidden_middle():
    # 4 -> 3 -> 2 -> 1 with kappa = {4}: node 3 (hidden) keeps its column
    from rmlm.graph import EdgeWeightDag
    dag = EdgeWeightDag.from_edges(4, {(3, 2): 0.7, (2, 1): 0.8, (1, 0): 0.9})
    A = std(dag)
    T3 = t3_kappa_atoms(A, 0, 1, (3,))
    assert T3[:, 3].tolist() == [0, 0]
    assert np.all(T3[1, 1:3] > 0)


def test_kappa_assumption_violation():
    A = std(triangle3())
    with pytest.raises(ValueError):
        t_kappa_atoms(A, TransformSpec(0, 2, 0.5, 2, kappa=(1,)))


def test_population_sigma_T_examples():
    assert population_sigma_T(std(chain3()), spec_for(std(chain3()), 0, 1)) == pytest.approx(1, abs=1e-12)
    D3 = std(confounder3())
    assert population_sigma_T(D3, spec_for(D3, 0, 1)) < 1 - 1e-3
    assert population_sigma_T(np.eye(2), TransformSpec(0, 1, 0.5, 2)) == pytest.approx(1)


def test_population_sigma_T_zero_row():
    # i has all the mass of m: first transformed coordinate vanishes
    A = np.array([[1.0, 0.1], [0.0, 0.05]])
    with pytest.raises(UndefinedDependenceError):
        population_sigma_T(A, TransformSpec(0, 1, 0.5, 2))


def test_cond1_examples():
    A = std(triangle3())
    assert cond1_check(A, 0, 1, 1.0001) == (True, True)
    assert cond1_check(np.eye(2), 0, 1, 1.0001) == (True, False)
    assert cond1_check(A, 1, 0, 1.0001)[0] is False


def test_cond2_reduces_to_cond1():
    A = std(triangle3())
    assert cond2_check(A, 0, 1, (), 1.5) == cond1_check(A, 0, 1, 1.5)


def test_delta_c_examples():
    A = std(chain3())
    assert delta_c(A, spec_for(A, 0, 1)) == pytest.approx(0, abs=1e-12)
    s = spec_for(A, 0, 1)
    same = TransformSpec(0, 1, s.c1, s.c2, s.c1)
    assert delta_c(std(confounder3()), same) == 0
    D3 = std(confounder3())
    assert delta_c(D3, spec_for(D3, 0, 1)) > 1e-3


def test_clt_variance_examples():
    row = standardize([[0.3, 0.5, 0.8]])[0]
    assert clt_variance(np.vstack([row, row])) == pytest.approx(0, abs=1e-12)
    assert clt_variance(np.eye(2)) == 0
    assert clt_variance(std(triangle3())[:2]) == pytest.approx(0.15118799641927938, rel=1e-12)


@given(random_dags(max_nodes=8))
@settings(max_examples=60)
def test_mwp_pairs_satisfy_scaling_identity(dag):
    # for a max-weighted pair the dependence equals the root of 2 - sigma_M
    A = standardize(ml_matrix(dag))
    S = sigma_matrix(A)
    for i, m in zip(*np.nonzero(mwp_ground_truth(A))):
        assert S[i, m] ** 2 == pytest.approx(2 - sigma_max(A, [i, m]), abs=1e-12)
