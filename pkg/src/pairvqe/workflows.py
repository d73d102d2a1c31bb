"""Batch experiments behind the CLI: dissociation scans and readout-noise sweeps."""

from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.optimize
import scipy.stats

from .ansatz import PuccdParameters, statevector_of
from .estimator import (
    MeasurementPlan,
    MitigationMode,
    PostSelectionError,
    estimate_from_state,
    exact_expectation,
    noisy_expectation,
)
from .integrals import IntegralSet, build_hcb_coefficients, load_integrals
from .oracle import SeniorityZeroBasis, doci_ground, rhf_energy
from .pauli import QubitHamiltonian, qubitize
from .simulator import ReadoutNoise
from .vqe import CHEMICAL_ACCURACY, VqeConfig, run_vqe

SCAN_COLUMNS = (
    "distance_angstrom",
    "e_hf_hartree",
    "e_doci_hartree",
    "e_puccd_hartree",
    "delta_e_hartree",
    "evaluations",
    "status",
)
SWEEP_COLUMNS = (
    "error_rate",
    "mode",
    "plan",
    "repeats",
    "shots_per_group",
    "mean_abs_error_hartree",
    "ci95_low_hartree",
    "ci95_high_hartree",
    "systematic_error_hartree",
    "mean_retention",
    "status",
)
# the X/Y-basis settings cannot be post-selected, so full mitigation uses the paired plan
MODE_PLANS = {
    MitigationMode.NONE: MeasurementPlan.TPB3,
    MitigationMode.DIAG_ONLY: MeasurementPlan.TPB3,
    MitigationMode.ALL_TERMS: MeasurementPlan.PAIRED,
}

_DISTANCE_RE = re.compile(r"(\d+(?:\.\d+)?)")


@dataclass(frozen=True)
class Problem:
    """Everything derived from one integral file."""

    integrals: IntegralSet
    hamiltonian: QubitHamiltonian
    e_hf: float
    e_doci: float

    @property
    def n_pairs(self) -> int:
        return self.integrals.n_electron_pairs

    @property
    def n_orbitals(self) -> int:
        return self.integrals.n_orbitals

    @classmethod
    def from_integrals(cls, ints: IntegralSet) -> Problem:
        coeffs = build_hcb_coefficients(ints)
        basis = SeniorityZeroBasis(ints.n_orbitals, ints.n_electron_pairs)
        e_doci, _ = doci_ground(coeffs, basis)
        return cls(ints, qubitize(coeffs), rhf_energy(coeffs, ints.n_electron_pairs), e_doci)

    @classmethod
    def load(cls, path: str | Path) -> Problem:
        return cls.from_integrals(load_integrals(path))


def distance_label(path: str | Path) -> str:
    """Bond length taken from the last number in the file stem (``lih_1.595`` -> ``1.595``)."""
    stem = Path(path).name.split(".fcidump")[0].removesuffix(".json")
    found = _DISTANCE_RE.findall(stem)
    return found[-1] if found else stem


def scan_point(path: str, config: VqeConfig) -> dict:
    row = dict.fromkeys(SCAN_COLUMNS, "")
    row["distance_angstrom"] = distance_label(path)
    try:
        problem = Problem.load(path)
        result = run_vqe(problem.hamiltonian, problem.n_pairs, config)
    except (OSError, ValueError, RuntimeError) as exc:
        row["status"] = f"failed: {exc}"
        return row
    row.update(
        e_hf_hartree=problem.e_hf,
        e_doci_hartree=problem.e_doci,
        e_puccd_hartree=result.exact_energy,
        delta_e_hartree=abs(result.exact_energy - problem.e_doci),
        evaluations=result.evaluations,
        status="ok" if result.converged else f"not converged: {result.reason}",
    )
    return row


def dissociation_scan(paths: Sequence[str | Path], config: VqeConfig, jobs: int = 1) -> list[dict]:
    """One VQE per geometry, rows sorted by bond length; failures stay as rows."""
    paths = sorted((str(p) for p in paths), key=_distance_key)
    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(scan_point, paths, [config] * len(paths)))
    return [scan_point(p, config) for p in paths]


def _distance_key(path: str):
    label = distance_label(path)
    try:
        return (0, float(label), path)
    except ValueError:
        return (1, 0.0, path)


def _sweep_cell(args) -> dict:
    problem, params, rate, mode, repeats, shots, seed, r_idx, m_idx = args
    plan = MODE_PLANS[mode]
    state = statevector_of(params)
    exact = exact_expectation(state, problem.hamiltonian)
    noise = ReadoutNoise(rate)
    row = dict.fromkeys(SWEEP_COLUMNS, "")
    row.update(error_rate=rate, mode=mode.value, plan=plan.value, repeats=repeats, shots_per_group=shots)
    try:
        errors, retention = [], []
        for rep in range(repeats):
            est = estimate_from_state(
                state, problem.hamiltonian, problem.n_pairs, plan, shots, noise, mode,
                seed=[seed, r_idx, m_idx, rep],
            )
            errors.append(abs(est.value - exact))
            retention.append(np.mean(list(est.retention.values())))
        bias = noisy_expectation(state, problem.hamiltonian, problem.n_pairs, plan, noise, mode) - exact
    except PostSelectionError as exc:
        row["status"] = f"failed: {exc}"
        return row
    errors = np.array(errors)
    mean = float(errors.mean())
    half = (
        float(scipy.stats.t.ppf(0.975, repeats - 1) * errors.std(ddof=1) / np.sqrt(repeats))
        if repeats > 1
        else float("nan")
    )
    row.update(
        mean_abs_error_hartree=mean,
        ci95_low_hartree=mean - half,
        ci95_high_hartree=mean + half,
        systematic_error_hartree=abs(bias),
        mean_retention=float(np.mean(retention)),
        status="ok",
    )
    return row


def noise_sweep(
    problem: Problem,
    params: PuccdParameters,
    error_rates: Sequence[float],
    modes: Sequence[MitigationMode | str] = tuple(MitigationMode),
    repeats: int = 50,
    shots_per_group: int = 100_000,
    seed: int = 0,
    jobs: int = 1,
) -> list[dict]:
    """Energy error at fixed angles across readout error rates and mitigation modes.

    Each cell repeats the sampled estimate ``repeats`` times with independent
    seeds and also records the infinite-shot systematic error.
    """
    modes = [MitigationMode(m) for m in modes]
    cells = [
        (problem, params, float(rate), mode, repeats, shots_per_group, seed, r_idx, m_idx)
        for r_idx, rate in enumerate(error_rates)
        for m_idx, mode in enumerate(modes)
    ]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_cell, cells))
    return [_sweep_cell(c) for c in cells]


def accuracy_threshold_rate(
    problem: Problem,
    params: PuccdParameters,
    mode: MitigationMode | str,
    target: float = CHEMICAL_ACCURACY,
    upper: float = 0.25,
) -> float | None:
    """Readout error rate at which the infinite-shot energy error first reaches ``target``.

    Returns None when the error stays below ``target`` up to ``upper``.
    """
    mode = MitigationMode(mode)
    plan = MODE_PLANS[mode]
    state = statevector_of(params)
    exact = exact_expectation(state, problem.hamiltonian)

    def excess(rate: float) -> float:
        value = noisy_expectation(
            state, problem.hamiltonian, problem.n_pairs, plan, ReadoutNoise(rate), mode
        )
        return abs(value - exact) - target

    grid = np.geomspace(1e-6, upper, 60)
    prev = grid[0]
    if excess(prev) >= 0:
        return float(prev)
    for rate in grid[1:]:
        if excess(rate) >= 0:
            return float(scipy.optimize.brentq(excess, prev, rate, xtol=1e-12))
        prev = rate
    return None
