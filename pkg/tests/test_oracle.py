import numpy as np
import pytest

from helpers import lih_problem, random_coeffs
from pairvqe.ansatz import PuccdParameters, statevector_of
from pairvqe.estimator import exact_expectation
from pairvqe.integrals import SeniorityZeroCoeffs, build_hcb_coefficients
from pairvqe.oracle import (
    SeniorityZeroBasis,
    doci_ground,
    doci_matrix,
    hcb_operator_check,
    rhf_energy,
)
from pairvqe.pauli import qubitize

rng = np.random.default_rng(5505)

TOY = SeniorityZeroCoeffs(0.0, np.array([[-2.0, 0.4], [0.4, -1.0]]), np.zeros((2, 2)))


def test_basis_ordering():
    basis = SeniorityZeroBasis(4, 2)
    assert len(basis) == 6
    assert list(basis.masks) == sorted(basis.masks)
    assert all(bin(m).count("1") == 2 for m in basis.masks)
    assert basis.index[basis.masks[3]] == 3


def test_basis_limits():
    with pytest.raises(ValueError):
        SeniorityZeroBasis(17, 2)
    with pytest.raises(ValueError):
        SeniorityZeroBasis(3, 4)


def test_one_by_one():
    c = SeniorityZeroCoeffs(0.3, np.array([[-1.1]]), np.zeros((1, 1)))
    np.testing.assert_array_equal(doci_matrix(c, SeniorityZeroBasis(1, 1)), [[0.3 - 1.1]])


def test_two_orbital_matrix():
    c = random_coeffs(rng, 2)
    m = doci_matrix(c, SeniorityZeroBasis(2, 1))
    h1, k = c.h_r1, c.constant
    np.testing.assert_allclose(m, [[k + h1[0, 0], h1[0, 1]], [h1[0, 1], k + h1[1, 1]]], atol=1e-15)


def test_toy_ground_state_closed_form():
    e, v = doci_ground(TOY, SeniorityZeroBasis(2, 1))
    assert e == pytest.approx(-1.5 - np.sqrt(0.25 + 0.16), abs=1e-14)
    assert np.max(np.abs(v)) == np.max(v)


def test_empty_and_full_shells():
    c = random_coeffs(rng, 4)
    e0, _ = doci_ground(c, SeniorityZeroBasis(4, 0))
    assert e0 == pytest.approx(c.constant, abs=1e-14)
    e4, _ = doci_ground(c, SeniorityZeroBasis(4, 4))
    off = ~np.eye(4, dtype=bool)
    assert e4 == pytest.approx(c.constant + np.trace(c.h_r1) + c.h_r2[off].sum(), abs=1e-12)
    assert rhf_energy(c, 0) == c.constant


@pytest.mark.parametrize("n, ne", [(2, 1), (4, 2), (6, 2), (6, 3), (8, 4), (8, 3)])
def test_sector_equivalence(n, ne):
    c = random_coeffs(rng, n)
    basis = SeniorityZeroBasis(n, ne)
    mat = doci_matrix(c, basis)
    assert np.array_equal(mat, mat.T)
    dense = qubitize(c).to_dense()
    masks = list(basis.masks)
    block = dense[np.ix_(masks, masks)]
    np.testing.assert_allclose(np.linalg.eigvalsh(mat), np.linalg.eigvalsh(block), atol=1e-12)
    e, v = doci_ground(c, basis)
    assert e == pytest.approx(np.linalg.eigvalsh(block)[0], abs=1e-12)
    assert np.linalg.norm(mat @ v - e * v) < 1e-10


def test_lih_block_spectrum():
    p = lih_problem()
    c = build_hcb_coefficients(p.integrals)
    basis = SeniorityZeroBasis(6, 2)
    assert len(basis) == 15
    masks = list(basis.masks)
    block = p.hamiltonian.to_dense()[np.ix_(masks, masks)]
    np.testing.assert_allclose(
        np.linalg.eigvalsh(doci_matrix(c, basis)), np.linalg.eigvalsh(block), atol=1e-12
    )


def test_rhf_is_lowest_mask_diagonal():
    c = random_coeffs(rng, 5)
    basis = SeniorityZeroBasis(5, 2)
    assert rhf_energy(c, 2) == pytest.approx(doci_matrix(c, basis)[0, 0], abs=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_hcb_relations(n):
    report = hcb_operator_check(n)
    assert report["max_violation"] < 1e-12


def test_hcb_single_mode_exact():
    assert hcb_operator_check(1)["max_violation"] == 0.0


def test_variational_dominance():
    c = random_coeffs(rng, 6)
    h = qubitize(c)
    e_doci, _ = doci_ground(c, SeniorityZeroBasis(6, 3))
    for _ in range(20):
        x = rng.uniform(-np.pi, np.pi, size=9)
        state = statevector_of(PuccdParameters.from_vector(6, 3, x))
        assert exact_expectation(state, h) >= e_doci - 1e-10
