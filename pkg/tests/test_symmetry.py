import math

import numpy as np
import pytest

from oracles import commutator_norm
from spectraflow.eigensolve import eigh, eigvalsh
from spectraflow.hilbert import Model, ModelParams, build_hamiltonian
from spectraflow.spectra import converge_truncation
from spectraflow.symmetry import (
    Parity,
    parity_diagonal,
    parity_label,
    parity_labels,
    parity_operator,
    sector_spectra,
)


def test_parity_operator_small():
    np.testing.assert_array_equal(parity_operator(2), np.diag([-1.0, 1.0, 1.0, -1.0]))


@pytest.mark.parametrize("n_cut", [2, 9, 64])
def test_parity_squares_to_identity(n_cut):
    p = parity_operator(n_cut)
    assert np.array_equal(p @ p, np.eye(2 * n_cut))
    assert np.sum(parity_diagonal(n_cut) > 0) == n_cut


def test_parity_commutes_with_rabi():
    h = build_hamiltonian(ModelParams(Model.RABI, g=0.8), 50)
    assert commutator_norm(parity_operator(50), h) <= 1e-12 * np.linalg.norm(h)


def test_parity_broken_by_epsilon():
    h = build_hamiltonian(ModelParams(Model.ASYM_RABI, g=0.0, epsilon=0.3), 2)
    # [P, eps sx] = 2 eps P sx, Frobenius norm 2 * eps * sqrt(d)
    assert commutator_norm(parity_operator(2), h) == pytest.approx(2 * 0.3 * math.sqrt(4))
    assert commutator_norm(parity_operator(2), h) == pytest.approx(1.2)


def test_label_basis_state():
    p = parity_operator(3)
    e0 = np.zeros(6)
    e0[0] = 1.0
    label = parity_label(e0, p)
    assert label.value is Parity.ODD
    assert label.expectation == -1.0


def test_label_mixed():
    v = np.zeros(6)
    v[0] = v[1] = 1 / math.sqrt(2)
    label = parity_label(v, parity_operator(3))
    assert label.value is Parity.NONE
    assert label.expectation == pytest.approx(0.0, abs=1e-15)
    # the diagonal alone works too
    assert parity_label(v, parity_diagonal(3)).value is Parity.NONE


def test_label_rejects_unnormalized():
    with pytest.raises(ValueError):
        parity_label(np.ones(4), parity_operator(2))


def test_rabi_eigenstates_have_definite_parity():
    p = ModelParams(Model.RABI, g=1.2)
    n_cut = converge_truncation(p, 50, 1e-8, 1.2)
    dec = eigh(build_hamiltonian(p, n_cut), count=50)
    labels = parity_labels(dec.vectors, parity_diagonal(n_cut))
    assert set(labels.tolist()) <= {1, -1}
    for i in range(50):
        assert parity_label(dec.vectors[:, i], parity_diagonal(n_cut)).value is not Parity.NONE


def test_uncoupled_sectors():
    even, odd = sector_spectra(ModelParams(Model.RABI, g=0.0), 2)
    np.testing.assert_array_equal(np.sort(odd), [-0.5, 1.5])
    np.testing.assert_array_equal(np.sort(even), [0.5, 0.5])


def test_sector_union_matches_full_spectrum():
    p = ModelParams(Model.RABI, g=1.0)
    even, odd = sector_spectra(p, 120)
    assert len(even) == len(odd) == 120
    full = eigvalsh(build_hamiltonian(p, 120))
    np.testing.assert_allclose(np.sort(np.concatenate([even, odd])), full, atol=1e-9)


def test_sector_vectors():
    even, odd = sector_spectra(ModelParams(Model.RABI, g=0.6), 20, with_vectors=True)
    assert even.vectors.shape == (20, 20)
    assert odd.vectors.shape == (20, 20)


def test_sector_refuses_broken_parity():
    with pytest.raises(ValueError):
        sector_spectra(ModelParams(Model.ASYM_RABI, g=0.5, epsilon=0.3), 10)
    with pytest.raises(ValueError):
        sector_spectra(ModelParams(Model.JC, g=0.5), 10)
