"""Shared builders for the test modules."""

from __future__ import annotations

import functools
import json
from pathlib import Path

import numpy as np

from pairvqe.integrals import IntegralSet, SeniorityZeroCoeffs
from pairvqe.workflows import Problem

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
LIH_DIR = FIXTURES / "lih_sto6g"
LIH_EQ = LIH_DIR / "lih_1.595.fcidump"
LIH_EQ_CCSD = LIH_DIR / "lih_1.595.ccsd.json"
H2 = FIXTURES / "h2_sto3g" / "h2_0.735.fcidump"
ALL_FIXTURES = sorted(FIXTURES.glob("*/*.fcidump"))
REFERENCE = json.loads((FIXTURES / "pyscf_reference.json").read_text())

CHEMICAL_ACCURACY = 0.0016

_EIGHTFOLD = [
    (0, 1, 2, 3), (1, 0, 2, 3), (0, 1, 3, 2), (1, 0, 3, 2),
    (2, 3, 0, 1), (3, 2, 0, 1), (2, 3, 1, 0), (3, 2, 1, 0),
]


def random_coeffs(rng: np.random.Generator, n: int, scale: float = 1.0) -> SeniorityZeroCoeffs:
    a = rng.normal(scale=scale, size=(n, n))
    b = rng.normal(scale=scale, size=(n, n))
    h_r2 = b + b.T
    np.fill_diagonal(h_r2, 0.0)
    return SeniorityZeroCoeffs(float(rng.normal()), a + a.T, h_r2)


def random_integrals(rng: np.random.Generator, n: int, n_pairs: int) -> IntegralSet:
    sei = rng.normal(size=(n, n))
    raw = rng.normal(scale=0.3, size=(n,) * 4)
    tei = sum(raw.transpose(p) for p in _EIGHTFOLD) / 8
    return IntegralSet(n, n_pairs, float(rng.normal()), sei + sei.T, tei)


@functools.cache
def lih_problem() -> Problem:
    return Problem.load(LIH_EQ)


@functools.cache
def lih_optimized():
    """Exact-objective optimum on the equilibrium fixture."""
    from pairvqe.vqe import VqeConfig, run_vqe

    problem = lih_problem()
    return run_vqe(problem.hamiltonian, problem.n_pairs, VqeConfig())
