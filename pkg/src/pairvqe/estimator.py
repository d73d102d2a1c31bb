"""Energy estimation: exact contraction and Hamiltonian averaging over shots.

Sampled estimates read every term of a measurement setting from the same
bitstrings, so per-setting energies are averaged as a single random
variable and within-setting covariances come for free. Post-selection keeps
only outcomes with the expected number of pairs and renormalizes over the
survivors.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .ansatz import PuccdParameters, statevector_of
from .pauli import (
    MeasurementGroup,
    QubitHamiltonian,
    group_terms,
    paired_groups,
    parity_sign,
)
from .simulator import (
    ReadoutNoise,
    StateVector,
    apply_gates,
    apply_readout_channel,
    bitstring_to_index,
    sample_counts,
)

MIN_SHOTS_PER_GROUP = 100


class MitigationMode(str, enum.Enum):
    NONE = "none"
    DIAG_ONLY = "diag"
    ALL_TERMS = "all"


class MeasurementPlan(str, enum.Enum):
    TPB3 = "tpb3"
    PAIRED = "paired"


class PostSelectionError(RuntimeError):
    """No shots survived post-selection in some measurement setting."""


@dataclass
class EnergyEstimate:
    value: float
    std_error: float
    shots: dict[str, int] = field(default_factory=dict)
    retention: dict[str, float] = field(default_factory=dict)
    group_std: dict[str, float] = field(default_factory=dict)

    @property
    def total_shots(self) -> int:
        return sum(self.shots.values())

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "std_error": self.std_error,
            "shots": self.shots,
            "retention_per_group": self.retention,
        }


def expectation_of_string(amplitudes: np.ndarray, flip: int, phase: int, n_y: int) -> complex:
    idx = np.arange(len(amplitudes))
    signs = parity_sign(idx & phase)
    return (1j**n_y) * np.vdot(amplitudes[idx ^ flip], signs * amplitudes)


def exact_expectation(state: StateVector, h: QubitHamiltonian) -> float:
    """``<psi|H|psi>`` accumulated term by term."""
    if state.n_qubits != h.n_qubits:
        raise ValueError(
            f"state has {state.n_qubits} qubits, Hamiltonian {h.n_qubits}"
        )
    amps = state.amplitudes
    total = h.constant * np.vdot(amps, amps)
    for t in h.terms:
        total += t.weight * expectation_of_string(amps, *t.masks())
    if abs(total.imag) > 1e-10:
        raise ValueError(f"expectation value has imaginary part {total.imag:.3e}")
    return float(total.real)


def hamming_weights(n_qubits: int) -> np.ndarray:
    return np.bitwise_count(np.arange(2**n_qubits))


def postselect(counts: Mapping[str, int], n_pairs: int) -> tuple[dict[str, int], float]:
    """Keep bitstrings with exactly ``n_pairs`` ones; return survivors and kept fraction."""
    total = sum(counts.values())
    kept = {b: c for b, c in counts.items() if b.count("1") == n_pairs}
    return kept, (sum(kept.values()) / total if total else 0.0)


def _outcome_values(group: MeasurementGroup, h: QubitHamiltonian) -> np.ndarray:
    """Energy contribution of ``group`` for each measured basis index (constant excluded)."""
    n = h.n_qubits
    idx = np.arange(2**n)
    weights = h.weights()
    values = np.zeros(2**n)
    if group.basis == "PAIRED":
        z = 1 - 2 * ((idx[:, None] >> np.arange(n)) & 1)
        for p, q in group.pairs:
            xx = "".join("X" if k in (p, q) else "I" for k in range(n))
            values += weights.get(xx, 0.0) * (z[:, p] - z[:, q])
        return values
    for key in group.terms:
        # after the basis rotation every member string reads as the same-support Z string
        phase = bitstring_to_index("".join("0" if c == "I" else "1" for c in key))
        values += weights[key] * parity_sign(idx & phase)
    return values


def plan_groups(h: QubitHamiltonian, plan: MeasurementPlan | str) -> list[MeasurementGroup]:
    plan = MeasurementPlan(plan)
    return group_terms(h) if plan is MeasurementPlan.TPB3 else paired_groups(h)


def _postselected(group: MeasurementGroup, mode: MitigationMode) -> bool:
    if mode is MitigationMode.NONE or not group.particle_basis:
        return False
    if mode is MitigationMode.DIAG_ONLY:
        return group.basis == "DIAGONAL"
    return True


def _setting_rng(seed: int | Sequence[int] | None, index: int) -> np.random.Generator:
    if seed is None:
        return np.random.default_rng()
    entropy = [seed] if isinstance(seed, (int, np.integer)) else list(seed)
    return np.random.default_rng([*entropy, index])


def estimate_from_state(
    state: StateVector,
    h: QubitHamiltonian,
    n_pairs: int,
    plan: MeasurementPlan | str = MeasurementPlan.TPB3,
    shots_per_group: int | Mapping[str, int] = 10_000,
    noise: ReadoutNoise | None = None,
    mode: MitigationMode | str = MitigationMode.NONE,
    seed: int | Sequence[int] | None = None,
) -> EnergyEstimate:
    """Hamiltonian averaging on a prepared state.

    ``shots_per_group`` is either one count for every setting or a mapping
    from group label to count. Setting ``g`` draws from a generator seeded
    with ``(seed, g)``.
    """
    plan = MeasurementPlan(plan)
    mode = MitigationMode(mode)
    if mode is MitigationMode.ALL_TERMS and plan is MeasurementPlan.TPB3:
        raise ValueError("ALL_TERMS post-selection needs the PAIRED plan; X/Y settings are not particle-basis")
    weights_hw = hamming_weights(h.n_qubits)
    value = h.constant
    variance = 0.0
    est = EnergyEstimate(0.0, 0.0)
    for g, group in enumerate(plan_groups(h, plan)):
        shots = (
            shots_per_group[group.label]
            if isinstance(shots_per_group, Mapping)
            else int(shots_per_group)
        )
        if shots < 1:
            raise ValueError("shots per group must be at least 1")
        counts = sample_counts(state, group.rotations, shots, noise, _setting_rng(seed, g))
        if _postselected(group, mode):
            counts = np.where(weights_hw == n_pairs, counts, 0)
        kept = int(counts.sum())
        if kept == 0:
            raise PostSelectionError(f"no shots survived post-selection in {group.label}")
        f = _outcome_values(group, h)
        mean = float(counts @ f) / kept
        var = float(counts @ (f - mean) ** 2) / (kept - 1) if kept > 1 else 0.0
        value += mean
        variance += var / kept
        est.shots[group.label] = shots
        est.retention[group.label] = kept / shots
        est.group_std[group.label] = float(np.sqrt(var))
    est.value = float(value)
    est.std_error = float(np.sqrt(variance))
    return est


def noisy_expectation(
    state: StateVector,
    h: QubitHamiltonian,
    n_pairs: int,
    plan: MeasurementPlan | str = MeasurementPlan.TPB3,
    noise: ReadoutNoise | None = None,
    mode: MitigationMode | str = MitigationMode.NONE,
) -> float:
    """Infinite-shot limit of :func:`estimate_from_state` under readout noise.

    Uses the exact outcome distribution of every setting, so only the
    systematic error of the readout channel and post-selection remains.
    """
    plan = MeasurementPlan(plan)
    mode = MitigationMode(mode)
    if mode is MitigationMode.ALL_TERMS and plan is MeasurementPlan.TPB3:
        raise ValueError("ALL_TERMS post-selection needs the PAIRED plan")
    in_sector = hamming_weights(h.n_qubits) == n_pairs
    value = h.constant
    for group in plan_groups(h, plan):
        rotated = apply_gates(state.copy(), group.rotations)
        probs = apply_readout_channel(rotated.probabilities(), noise)
        if _postselected(group, mode):
            probs = np.where(in_sector, probs, 0.0)
        if probs.sum() == 0:
            raise PostSelectionError(f"no probability survives post-selection in {group.label}")
        value += float(probs @ _outcome_values(group, h)) / probs.sum()
    return float(value)


def exact_group_std(
    state: StateVector,
    h: QubitHamiltonian,
    plan: MeasurementPlan | str = MeasurementPlan.TPB3,
) -> dict[str, float]:
    """Per-shot standard deviation of every setting's energy estimator, noiseless.

    This is the infinite-pilot limit of the quantity :func:`calibrate_shots`
    estimates; ``sum(sd)**2 / sigma**2`` is the smallest total shot count
    reaching standard error ``sigma``.
    """
    out = {}
    for group in plan_groups(h, plan):
        probs = apply_gates(state.copy(), group.rotations).probabilities()
        f = _outcome_values(group, h)
        mean = probs @ f
        out[group.label] = float(np.sqrt(max(probs @ (f - mean) ** 2, 0.0)))
    return out


def sampled_energy(
    params: PuccdParameters,
    h: QubitHamiltonian,
    plan: MeasurementPlan | str = MeasurementPlan.TPB3,
    shots_per_group: int | Mapping[str, int] = 10_000,
    noise: ReadoutNoise | None = None,
    mode: MitigationMode | str = MitigationMode.NONE,
    seed: int | None = None,
    trotter_steps: int = 1,
) -> EnergyEstimate:
    state = statevector_of(params, trotter_steps)
    return estimate_from_state(
        state, h, params.n_pairs, plan, shots_per_group, noise, mode, seed
    )


def calibrate_shots(
    params: PuccdParameters,
    h: QubitHamiltonian,
    target_sigma: float,
    pilot_shots: int = 10_000,
    seed: int | None = None,
    plan: MeasurementPlan | str = MeasurementPlan.TPB3,
    noise: ReadoutNoise | None = None,
    mode: MitigationMode | str = MitigationMode.NONE,
    trotter_steps: int = 1,
) -> dict[str, int]:
    """Shots per setting so that the predicted standard error is ``target_sigma``.

    Allocation is proportional to each setting's per-shot standard deviation
    from a pilot run (retention losses included), which minimizes the total
    for a given error. Settings with zero pilot variance get the floor.
    """
    if target_sigma <= 0:
        raise ValueError("target_sigma must be positive")
    pilot = sampled_energy(
        params, h, plan, pilot_shots, noise, mode, seed, trotter_steps
    )
    # per-shot std of each setting's estimator, counting discarded shots
    sd = {
        g: pilot.group_std[g] / np.sqrt(pilot.retention[g]) for g in pilot.group_std
    }
    total_sd = sum(sd.values())
    return {
        g: max(MIN_SHOTS_PER_GROUP, int(np.ceil(s * total_sd / target_sigma**2)))
        for g, s in sd.items()
    }
