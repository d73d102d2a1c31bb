"""Variational loop over pair-excitation angles."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .ansatz import PuccdParameters, statevector_of
from .estimator import (
    MeasurementPlan,
    MitigationMode,
    calibrate_shots,
    estimate_from_state,
    exact_expectation,
)
from .optimize import implicit_filtering, nelder_mead
from .pauli import QubitHamiltonian
from .simulator import ReadoutNoise

CHEMICAL_ACCURACY = 0.0016  # Hartree, 1 kcal/mol
TRACE_COLUMNS = ("shots_cumulative", "evaluations", "energy_hartree")


@dataclass
class VqeConfig:
    objective: str = "exact"  # "exact" | "sampled"
    optimizer: str = "implicit_filtering"  # or "nelder_mead"
    max_evaluations: int = 5000
    initial_parameters: PuccdParameters | None = None
    trotter_steps: int = 1
    seed: int = 0
    plan: MeasurementPlan = MeasurementPlan.TPB3
    mitigation: MitigationMode = MitigationMode.NONE
    target_sigma: float = CHEMICAL_ACCURACY / 2
    readout_error: float = 0.0
    pilot_shots: int = 10_000
    initial_step: float = 0.1
    min_step: float | None = None  # 1e-6 exact, 1e-3 sampled

    def __post_init__(self):
        if self.objective not in ("exact", "sampled"):
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.optimizer not in ("implicit_filtering", "nelder_mead"):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")
        if self.max_evaluations < 1:
            raise ValueError("max_evaluations must be at least 1")
        if self.objective == "sampled" and not self.target_sigma > 0:
            raise ValueError("target_sigma must be positive for a sampled objective")
        self.plan = MeasurementPlan(self.plan)
        self.mitigation = MitigationMode(self.mitigation)
        if self.min_step is None:
            self.min_step = 1e-6 if self.objective == "exact" else 1e-3

    def to_json(self) -> dict:
        return {
            "objective": self.objective,
            "optimizer": self.optimizer,
            "max_evaluations": self.max_evaluations,
            "trotter_steps": self.trotter_steps,
            "seed": self.seed,
            "plan": self.plan.value,
            "mitigation": self.mitigation.value,
            "target_sigma": self.target_sigma,
            "readout_error": self.readout_error,
            "pilot_shots": self.pilot_shots,
            "initial_step": self.initial_step,
            "min_step": self.min_step,
        }


@dataclass
class VqeResult:
    best_energy: float
    best_parameters: PuccdParameters
    exact_energy: float  # noiseless expectation at best_parameters
    trace: list[tuple[int, int, float]]
    converged: bool
    reason: str
    shots_per_group: dict[str, int] = field(default_factory=dict)

    @property
    def evaluations(self) -> int:
        return self.trace[-1][1] if self.trace else 0

    @property
    def total_shots(self) -> int:
        return self.trace[-1][0] if self.trace else 0

    def to_json(self) -> dict:
        return {
            "best_energy": self.best_energy,
            "exact_energy": self.exact_energy,
            "best_parameters": self.best_parameters.to_json(),
            "converged": self.converged,
            "reason": self.reason,
            "evaluations": self.evaluations,
            "total_shots": self.total_shots,
            "shots_per_group": self.shots_per_group,
        }

    def trace_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for shots, evals, energy in self.trace:
            writer.writerow([shots, evals, repr(float(energy))])
        return buf.getvalue()


def run_vqe(h: QubitHamiltonian, n_pairs: int, config: VqeConfig | None = None) -> VqeResult:
    """Minimize the ansatz energy; one trace row per objective evaluation.

    Angles are clamped to [-pi, pi]. With a sampled objective, shots per
    setting are calibrated once at the initial angles and the pilot shots
    are counted in the trace.
    """
    config = config or VqeConfig()
    n = h.n_qubits
    init = config.initial_parameters or PuccdParameters.zeros(n, n_pairs)
    if (init.n_orbitals, init.n_pairs) != (n, n_pairs):
        raise ValueError("initial parameters do not match the Hamiltonian and pair count")

    def params_of(x) -> PuccdParameters:
        return PuccdParameters.from_vector(n, n_pairs, np.clip(x, -np.pi, np.pi))

    trace: list[tuple[int, int, float]] = []
    shots_total = 0
    allocation: dict[str, int] = {}
    noise = ReadoutNoise(config.readout_error)

    if config.objective == "sampled":
        allocation = calibrate_shots(
            init, h, config.target_sigma, config.pilot_shots,
            seed=config.seed, plan=config.plan, noise=noise,
            mode=config.mitigation, trotter_steps=config.trotter_steps,
        )
        shots_total = config.pilot_shots * len(allocation)

    def objective(x) -> float:
        nonlocal shots_total
        state = statevector_of(params_of(x), config.trotter_steps)
        if config.objective == "exact":
            energy = exact_expectation(state, h)
        else:
            est = estimate_from_state(
                state, h, n_pairs, config.plan, allocation, noise,
                config.mitigation, seed=[config.seed, len(trace)],
            )
            shots_total += est.total_shots
            energy = est.value
        trace.append((shots_total, len(trace) + 1, energy))
        return energy

    x0 = init.as_vector()
    if config.max_evaluations == 1 or len(x0) == 0:
        fx = objective(x0)
        x, converged, reason = x0, len(x0) == 0, (
            "no free parameters" if len(x0) == 0 else "evaluation budget exhausted"
        )
    elif config.optimizer == "implicit_filtering":
        res = implicit_filtering(
            objective, x0, config.initial_step, config.min_step, config.max_evaluations
        )
        x, fx, converged, reason = res.x, res.fun, bool(res.success), res.message
    else:
        res = nelder_mead(
            objective, x0, config.initial_step, config.max_evaluations,
            xatol=config.min_step,
        )
        x, fx, converged, reason = res.x, float(res.fun), bool(res.success), res.message

    best = params_of(x)
    return VqeResult(
        best_energy=float(fx),
        best_parameters=best,
        exact_energy=exact_expectation(statevector_of(best, config.trotter_steps), h),
        trace=trace,
        converged=converged,
        reason=reason,
        shots_per_group=allocation,
    )
