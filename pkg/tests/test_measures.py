import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from conftest import random_density, random_unitary
from pairdecay import InvalidInput, NumericalDegeneracy
from pairdecay.measures import (SYSY, concurrence, purity, reduce_to_pair, spectrum,
                                werner_concurrence_of_purity, werner_state)
from pairdecay.state import StateVector, make_bell, make_haar_random, make_initial_state

BELL = make_bell()
BELL_PROJ = np.outer(BELL, BELL.conj())


def brute_force_reduce(psi, L):
    rho = np.zeros((4, 4), dtype=complex)
    for i in range(2**L):
        for k in range(2**L):
            if (i >> 2) != (k >> 2):
                continue
            row = 2 * (i & 1) + ((i >> 1) & 1)
            col = 2 * (k & 1) + ((k >> 1) & 1)
            rho[row, col] += psi[i] * np.conj(psi[k])
    return rho


def concurrence_by_definition(rho):
    # lambdas straight from sqrt(rho rho~), for full-rank inputs
    m = scipy.linalg.sqrtm(rho @ SYSY @ rho.conj() @ SYSY)
    lam = np.sort(np.linalg.eigvals(m).real)[::-1]
    return max(0.0, lam[0] - lam[1:].sum())


def test_reduce_bell_times_random():
    s = make_initial_state(BELL, make_haar_random(6, 2))
    np.testing.assert_allclose(reduce_to_pair(s), BELL_PROJ, atol=1e-12)


def test_reduce_product_00():
    s = make_initial_state(np.array([1, 0, 0, 0]), make_haar_random(3, 9))
    np.testing.assert_allclose(reduce_to_pair(s), np.diag([1, 0, 0, 0]), atol=1e-15)


def test_reduce_five_qubits_brute_force():
    psi = make_haar_random(5, 77)
    np.testing.assert_allclose(reduce_to_pair(StateVector(psi, 5)),
                               brute_force_reduce(psi, 5), atol=1e-12)


@pytest.mark.parametrize("L", [3, 4, 5, 6])
def test_reduce_matches_brute_force_many(L):
    rng = np.random.default_rng(L)
    for _ in range(50):
        psi = make_haar_random(L, rng)
        rho = reduce_to_pair(StateVector(psi, L))
        np.testing.assert_allclose(rho, brute_force_reduce(psi, L), rtol=0, atol=1e-12)
        np.testing.assert_allclose(rho, rho.conj().T, atol=1e-10)
        assert abs(np.trace(rho) - 1) < 1e-10
        assert spectrum(rho).min() > -1e-10


def test_purity_examples():
    assert purity(BELL_PROJ) == pytest.approx(1, abs=1e-15)
    assert purity(np.eye(4) / 4) == pytest.approx(0.25, abs=1e-15)
    assert purity(werner_state(2 / 3)) == pytest.approx(1 / 3, abs=1e-15)


def test_concurrence_examples():
    assert concurrence(BELL_PROJ) == pytest.approx(1, abs=1e-12)
    assert concurrence(np.eye(4) / 4) == pytest.approx(0, abs=1e-12)
    assert concurrence(werner_state(1 / 3)) == pytest.approx(0.5, abs=1e-12)


def test_concurrence_product_state_is_zero():
    psi = np.kron(make_haar_random(1, 1), make_haar_random(1, 2))
    assert concurrence(np.outer(psi, psi.conj())) < 1e-7


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_concurrence_against_definition(seed):
    rho = random_density(np.random.default_rng(seed))
    assert concurrence(rho) == pytest.approx(concurrence_by_definition(rho), abs=1e-8)


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_pure_state_concurrence(seed):
    psi = make_haar_random(2, seed)
    expected = abs(psi.conj() @ SYSY @ psi.conj())
    assert concurrence(np.outer(psi, psi.conj())) == pytest.approx(expected, abs=1e-10)


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_local_unitary_invariance(seed, rank):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, rank)
    uv = np.kron(random_unitary(rng), random_unitary(rng))
    rotated = uv @ rho @ uv.conj().T
    assert concurrence(rotated) == pytest.approx(concurrence(rho), abs=1e-10)
    assert purity(rotated) == pytest.approx(purity(rho), abs=1e-10)


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_measure_ranges_and_two_purity_formulas(seed, rank):
    rho = random_density(np.random.default_rng(seed), rank)
    c, p = concurrence(rho), purity(rho)
    assert 0 <= c <= 1 + 1e-12
    assert 0.25 - 1e-12 <= p <= 1 + 1e-12
    assert p == pytest.approx(np.sum(spectrum(rho) ** 2), abs=1e-12)


def test_invalid_density_matrix_flagged():
    with pytest.raises(NumericalDegeneracy):
        concurrence(np.diag([0.75, -0.25, 0.25, 0.25]))


def test_werner_matrix_explicit_form():
    a = 0.37
    expected = np.array([
        [0.5 - a / 4, 0, 0, 0.5 - a / 2],
        [0, a / 4, 0, 0],
        [0, 0, a / 4, 0],
        [0.5 - a / 2, 0, 0, 0.5 - a / 4],
    ])
    np.testing.assert_allclose(werner_state(a), expected, atol=1e-16)


@pytest.mark.parametrize("alpha,c,p", [(0.0, 1.0, 1.0), (1.0, 0.0, 0.25), (1 / 3, 0.5, 7 / 12)])
def test_werner_examples(alpha, c, p):
    rho = werner_state(alpha)
    assert concurrence(rho) == pytest.approx(c, abs=1e-12)
    assert purity(rho) == pytest.approx(p, abs=1e-12)


def test_werner_alpha_range():
    with pytest.raises(InvalidInput):
        werner_state(-0.1)
    with pytest.raises(InvalidInput):
        werner_state(1.5)


def test_werner_curve_points():
    assert werner_concurrence_of_purity(1.0) == pytest.approx(1.0, abs=1e-15)
    assert werner_concurrence_of_purity(1 / 3) == 0.0
    assert werner_concurrence_of_purity(0.3) == 0.0
    assert werner_concurrence_of_purity(7 / 12) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(InvalidInput):
        werner_concurrence_of_purity(0.2)
    with pytest.raises(InvalidInput):
        werner_concurrence_of_purity(1.01)


def test_werner_self_consistency_sweep():
    for alpha in np.linspace(0, 1, 1001):
        rho = werner_state(alpha)
        c, p = concurrence(rho), purity(rho)
        assert abs(c - max(0.0, 1 - 1.5 * alpha)) < 1e-12
        assert abs(p - (1 - 1.5 * alpha + 0.75 * alpha**2)) < 1e-12
        assert abs(c - werner_concurrence_of_purity(p)) < 1e-12


@settings(max_examples=50)
@given(st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_werner_with_rotated_bell(alpha, seed):
    rng = np.random.default_rng(seed)
    uv = np.kron(random_unitary(rng), random_unitary(rng))
    rho = werner_state(alpha, uv @ BELL)
    assert concurrence(rho) == pytest.approx(max(0.0, 1 - 1.5 * alpha), abs=1e-10)
    assert purity(rho) == pytest.approx(1 - 1.5 * alpha + 0.75 * alpha**2, abs=1e-12)
