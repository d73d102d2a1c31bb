"""Classical reference results for the pair Hamiltonian.

Everything here is built directly from hard-core boson matrices or from
configuration-interaction matrix elements, never from the Pauli-string
route, so it can be used to check that route.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations
from math import comb

import numpy as np
import scipy.linalg

from .integrals import SeniorityZeroCoeffs

MAX_DENSE_ORBITALS = 16


@dataclass(frozen=True)
class SeniorityZeroBasis:
    """All occupation masks with ``n_pairs`` of ``n_orbitals`` bits set, ascending."""

    n_orbitals: int
    n_pairs: int
    masks: tuple[int, ...] = field(init=False)
    index: dict[int, int] = field(init=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.n_pairs <= self.n_orbitals:
            raise ValueError("n_pairs must lie in [0, n_orbitals]")
        if self.n_orbitals > MAX_DENSE_ORBITALS:
            raise ValueError(f"dense oracle limited to {MAX_DENSE_ORBITALS} orbitals")
        masks = sorted(
            sum(1 << p for p in occ) for occ in combinations(range(self.n_orbitals), self.n_pairs)
        )
        object.__setattr__(self, "masks", tuple(masks))
        object.__setattr__(self, "index", {m: i for i, m in enumerate(masks)})

    def __len__(self) -> int:
        return len(self.masks)

    def embed(self, vector: np.ndarray) -> np.ndarray:
        """Place a sector vector into the full ``2**N`` register."""
        full = np.zeros(2**self.n_orbitals, dtype=complex)
        full[list(self.masks)] = vector
        return full


def doci_matrix(coeffs: SeniorityZeroCoeffs, basis: SeniorityZeroBasis) -> np.ndarray:
    h1, h2 = coeffs.h_r1, coeffs.h_r2
    n = coeffs.n_orbitals
    if n != basis.n_orbitals:
        raise ValueError("basis and coefficients disagree on the orbital count")
    dim = len(basis)
    mat = np.zeros((dim, dim))
    for col, mask in enumerate(basis.masks):
        occ = [p for p in range(n) if mask >> p & 1]
        virt = [p for p in range(n) if not mask >> p & 1]
        diag = coeffs.constant + sum(h1[p, p] for p in occ)
        diag += sum(h2[p, q] for p in occ for q in occ if p != q)
        mat[col, col] = diag
        for q in occ:
            for p in virt:
                row = basis.index[mask ^ (1 << q) ^ (1 << p)]
                mat[row, col] = h1[p, q]
    # hopping elements come from a symmetric h_r1, so this only guards round-off
    return 0.5 * (mat + mat.T)


def doci_ground(
    coeffs: SeniorityZeroCoeffs, basis: SeniorityZeroBasis
) -> tuple[float, np.ndarray]:
    """Lowest eigenpair; the largest-magnitude component of the vector is positive."""
    evals, evecs = np.linalg.eigh(doci_matrix(coeffs, basis))
    vec = evecs[:, 0]
    if vec[np.argmax(np.abs(vec))] < 0:
        vec = -vec
    return float(evals[0]), vec


def rhf_energy(coeffs: SeniorityZeroCoeffs, n_pairs: int) -> float:
    """Energy of the product state with the lowest ``n_pairs`` orbitals filled."""
    occ = range(n_pairs)
    energy = coeffs.constant + sum(coeffs.h_r1[p, p] for p in occ)
    energy += sum(coeffs.h_r2[p, q] for p in occ for q in occ if p != q)
    return float(energy)


def hcb_operators(n_orbitals: int) -> list[np.ndarray]:
    """Dense pair-annihilation operators ``b_p = (X_p + i Y_p) / 2``.

    Qubit 0 is the lowest bit of the basis index.
    """
    lower = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|
    eye = np.eye(2, dtype=complex)
    ops = []
    for p in range(n_orbitals):
        factors = [lower if q == p else eye for q in reversed(range(n_orbitals))]
        ops.append(reduce(np.kron, factors))
    return ops


def hcb_hamiltonian_dense(coeffs: SeniorityZeroCoeffs) -> np.ndarray:
    n = coeffs.n_orbitals
    b = hcb_operators(n)
    bd = [op.conj().T for op in b]
    num = [bd[p] @ b[p] for p in range(n)]
    mat = coeffs.constant * np.eye(2**n, dtype=complex)
    for p in range(n):
        for q in range(n):
            mat += coeffs.h_r1[p, q] * (bd[p] @ b[q])
            if p != q:
                mat += coeffs.h_r2[p, q] * (num[p] @ num[q])
    return mat


def hcb_operator_check(n_orbitals: int) -> dict[str, float]:
    """Largest violation of each hard-core boson relation over all mode pairs."""
    if not 1 <= n_orbitals <= 4:
        raise ValueError("operator check supports 1 to 4 modes")
    b = hcb_operators(n_orbitals)
    bd = [op.conj().T for op in b]
    eye = np.eye(2**n_orbitals)

    def norm(m):
        return float(np.max(np.abs(m))) if m.size else 0.0

    report = {
        "commutator_b_bdag": 0.0,
        "commutator_bdag_bdag": 0.0,
        "commutator_b_b": 0.0,
        "anticommutator_b_b": 0.0,
        "anticommutator_bdag_bdag": 0.0,
        "anticommutator_b_bdag": 0.0,
    }
    for p in range(n_orbitals):
        report["anticommutator_b_b"] = max(report["anticommutator_b_b"], norm(2 * b[p] @ b[p]))
        report["anticommutator_bdag_bdag"] = max(
            report["anticommutator_bdag_bdag"], norm(2 * bd[p] @ bd[p])
        )
        report["anticommutator_b_bdag"] = max(
            report["anticommutator_b_bdag"], norm(b[p] @ bd[p] + bd[p] @ b[p] - eye)
        )
        for q in range(n_orbitals):
            if p == q:
                continue
            report["commutator_b_bdag"] = max(
                report["commutator_b_bdag"], norm(b[p] @ bd[q] - bd[q] @ b[p])
            )
            report["commutator_bdag_bdag"] = max(
                report["commutator_bdag_bdag"], norm(bd[p] @ bd[q] - bd[q] @ bd[p])
            )
            report["commutator_b_b"] = max(report["commutator_b_b"], norm(b[p] @ b[q] - b[q] @ b[p]))
    report["max_violation"] = max(report.values())
    return report


def hf_state_dense(n_orbitals: int, n_pairs: int) -> np.ndarray:
    state = np.zeros(2**n_orbitals, dtype=complex)
    state[(1 << n_pairs) - 1] = 1.0
    return state


def pair_excitation_generator(
    n_orbitals: int, n_pairs: int, amplitudes: dict[tuple[int, int], float]
) -> np.ndarray:
    """Dense anti-Hermitian ``sum t_ij (b+_i b_j - b+_j b_i)``, i virtual, j occupied."""
    b = hcb_operators(n_orbitals)
    gen = np.zeros((2**n_orbitals,) * 2, dtype=complex)
    for (i, j), t in amplitudes.items():
        move = b[i].conj().T @ b[j]
        gen += t * (move - move.conj().T)
    return gen


def exact_pair_unitary_state(
    n_orbitals: int, n_pairs: int, amplitudes: dict[tuple[int, int], float]
) -> np.ndarray:
    """Untrotterized ``exp(T) |HF>`` by dense matrix exponential."""
    gen = pair_excitation_generator(n_orbitals, n_pairs, amplitudes)
    return scipy.linalg.expm(gen) @ hf_state_dense(n_orbitals, n_pairs)


def sector_dimension(n_orbitals: int, n_pairs: int) -> int:
    return comb(n_orbitals, n_pairs)
