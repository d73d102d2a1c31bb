"""Paired-electron VQE on a simulated qubit register, with an exact DOCI oracle."""

__version__ = "0.1.0"

from .ansatz import PuccdParameters, build_puccd_circuit, statevector_of
from .estimator import (
    EnergyEstimate,
    MeasurementPlan,
    MitigationMode,
    calibrate_shots,
    exact_expectation,
    sampled_energy,
)
from .integrals import IntegralSet, SeniorityZeroCoeffs, build_hcb_coefficients, parse_fcidump
from .oracle import SeniorityZeroBasis, doci_ground, doci_matrix, rhf_energy
from .pauli import QubitHamiltonian, group_terms, paired_measurement_schedule, qubitize
from .simulator import Gate, ReadoutNoise, StateVector, apply_gate, measure_counts
from .vqe import VqeConfig, VqeResult, run_vqe

__all__ = [
    "EnergyEstimate",
    "Gate",
    "IntegralSet",
    "MeasurementPlan",
    "MitigationMode",
    "PuccdParameters",
    "QubitHamiltonian",
    "ReadoutNoise",
    "SeniorityZeroBasis",
    "SeniorityZeroCoeffs",
    "StateVector",
    "VqeConfig",
    "VqeResult",
    "apply_gate",
    "build_hcb_coefficients",
    "build_puccd_circuit",
    "calibrate_shots",
    "doci_ground",
    "doci_matrix",
    "exact_expectation",
    "group_terms",
    "measure_counts",
    "paired_measurement_schedule",
    "parse_fcidump",
    "qubitize",
    "rhf_energy",
    "run_vqe",
    "sampled_energy",
    "statevector_of",
]
