import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import jc_energies, random_symmetric
from spectraflow.eigensolve import (
    ConvergenceError,
    EigenDecomposition,
    NotSymmetricError,
    eigh,
    eigvalsh,
    tridiagonal_ql,
    tridiagonalize,
    validate,
)
from spectraflow.hilbert import Model, ModelParams, build_hamiltonian

METHODS = ["lapack", "householder"]


@pytest.mark.parametrize("method", METHODS)
def test_pauli_x(method):
    dec = eigh(np.array([[0.0, 1.0], [1.0, 0.0]]), method=method)
    np.testing.assert_allclose(dec.values, [-1.0, 1.0], atol=1e-15)
    r = 1 / math.sqrt(2)
    # gauge: largest-magnitude entry positive; for ties the first entry wins
    np.testing.assert_allclose(dec.vectors, [[r, r], [-r, r]], atol=1e-15)


@pytest.mark.parametrize("method", METHODS)
def test_diagonal_permutes_identity(method):
    dec = eigh(np.diag([3.0, 1.0, 2.0]), method=method)
    np.testing.assert_array_equal(dec.values, [1.0, 2.0, 3.0])
    np.testing.assert_array_equal(dec.vectors, np.eye(3)[:, [1, 2, 0]])


@pytest.mark.parametrize("method", METHODS)
def test_jc_lowest_levels(method):
    h = build_hamiltonian(ModelParams(Model.JC, g=0.5), 200)
    values = eigh(h, method=method).values[:5]
    np.testing.assert_allclose(values, jc_energies(0.5, 5), atol=1e-10)
    # -0.5, 0, 1 - sqrt(2)/2 ... the fifth is the n=2 lower dressed state 2.5 - sqrt(3)/2
    np.testing.assert_allclose(values, [-0.5, 0.0, 0.7928932188, 1.0, 1.6339745962], atol=1e-10)


@pytest.mark.parametrize("method", METHODS)
def test_rejects_nonsymmetric(method):
    with pytest.raises(NotSymmetricError):
        eigh(np.array([[1.0, 2.0], [0.0, 1.0]]), method=method)
    with pytest.raises(NotSymmetricError):
        eigh(np.ones((2, 3)), method=method)


def test_rejects_unknown_method():
    with pytest.raises(ValueError):
        eigh(np.eye(2), method="jacobi")


def test_ql_iteration_cap_reports_index():
    d = np.array([1.0, 2.0, 3.0, 4.0])
    e = np.array([0.5, 0.5, 0.5])
    with pytest.raises(ConvergenceError) as info:
        tridiagonal_ql(d, e, max_iter=0)
    assert info.value.index == 0


def test_tridiagonalize_similarity():
    rng = np.random.default_rng(7)
    h = random_symmetric(rng, 30)
    diag, off, q = tridiagonalize(h)
    t = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    np.testing.assert_allclose(q @ t @ q.T, h, atol=1e-12)
    np.testing.assert_allclose(q.T @ q, np.eye(30), atol=1e-13)


def test_validate_exact():
    dec = EigenDecomposition(np.array([1.0, 2.0]), np.eye(2))
    report = validate(np.diag([1.0, 2.0]), dec)
    assert report.residual == 0.0
    assert report.orthonormality == 0.0
    assert report.ok()


def test_validate_detects_rotation():
    theta = 1e-3
    c, s = math.cos(theta), math.sin(theta)
    vectors = np.array([[c, -s], [s, c]])
    report = validate(np.diag([1.0, 2.0]), EigenDecomposition(np.array([1.0, 2.0]), vectors))
    # residual of a rotated eigenvector is sin(theta) * gap, gap = 1
    assert report.residual == pytest.approx(math.sin(theta), rel=1e-12)
    assert report.orthonormality < 1e-15
    assert not report.ok(1e-10)


def test_validate_dimension_mismatch():
    with pytest.raises(ValueError):
        validate(np.eye(3), EigenDecomposition(np.ones(2), np.eye(2)))


def test_validate_does_not_mutate():
    h = np.diag([1.0, 2.0])
    dec = eigh(h)
    before = (h.copy(), dec.values.copy(), dec.vectors.copy())
    validate(h, dec)
    for a, b in zip(before, (h, dec.values, dec.vectors)):
        np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize("method", METHODS)
def test_random_400(method):
    rng = np.random.default_rng(400)
    h = random_symmetric(rng, 400)
    dec = eigh(h, method=method)
    report = validate(h, dec)
    assert report.ok(1e-10)
    recon = dec.vectors @ np.diag(dec.values) @ dec.vectors.T
    assert np.linalg.norm(recon - h) <= 1e-9 * np.linalg.norm(h)


def test_methods_agree():
    rng = np.random.default_rng(3)
    h = random_symmetric(rng, 60)
    a = eigh(h, method="lapack")
    b = eigh(h, method="householder")
    np.testing.assert_allclose(a.values, b.values, atol=1e-12)
    # generic spectrum: gauge-fixed vectors coincide
    np.testing.assert_allclose(a.vectors, b.vectors, atol=1e-9)


@pytest.mark.parametrize("method", METHODS)
def test_count_subset(method):
    rng = np.random.default_rng(5)
    h = random_symmetric(rng, 40)
    full = eigh(h, method=method)
    part = eigh(h, count=7, method=method)
    np.testing.assert_allclose(part.values, full.values[:7], atol=1e-12)
    assert part.vectors.shape == (40, 7)
    np.testing.assert_allclose(eigvalsh(h, count=7, method=method), full.values[:7], atol=1e-12)


def test_deterministic():
    rng = np.random.default_rng(11)
    h = random_symmetric(rng, 80)
    for method in METHODS:
        a, b = eigh(h, method=method), eigh(h, method=method)
        assert a.values.tobytes() == b.values.tobytes()
        assert a.vectors.tobytes() == b.vectors.tobytes()


def test_degenerate_subspace_orthonormal():
    h = np.diag([1.0, 1.0, 1.0, 2.0])
    q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((4, 4)))
    h = q @ h @ q.T
    h = 0.5 * (h + h.T)
    for method in METHODS:
        dec = eigh(h, method=method)
        assert validate(h, dec).ok(1e-10)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 48), st.integers(0, 2**32 - 1), st.sampled_from(METHODS))
def test_invariants_random(d, seed, method):
    rng = np.random.default_rng(seed)
    h = random_symmetric(rng, d)
    dec = eigh(h, method=method)
    norm = np.linalg.norm(h)
    assert np.all(np.diff(dec.values) >= 0)
    assert validate(h, dec).ok(1e-10)
    assert dec.values.sum() == pytest.approx(np.trace(h), rel=1e-10, abs=1e-10 * norm)
    assert (dec.values**2).sum() == pytest.approx(norm**2, rel=1e-10)
    # gauge: largest-magnitude component positive
    idx = np.argmax(np.abs(dec.vectors), axis=0)
    assert np.all(dec.vectors[idx, np.arange(d)] > 0)


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 40), st.integers(0, 2**32 - 1))
def test_permutation_similarity(d, seed):
    rng = np.random.default_rng(seed)
    h = random_symmetric(rng, d)
    perm = rng.permutation(d)
    a = eigh(h).values
    b = eigh(h[np.ix_(perm, perm)]).values
    np.testing.assert_allclose(a, b, atol=1e-12 * max(1.0, np.abs(a).max()))
