"""Dense statevector simulation with sampled, optionally noisy, readout.

Amplitude index ``k`` encodes the computational basis state with qubit
``q`` equal to bit ``q`` of ``k`` (qubit 0 is the lowest-order bit).
Bitstrings are printed with qubit 0 first, so the integer index 1 on three
qubits reads ``"100"``.

Two-qubit gate matrices act on the ordered pair ``(p, q)`` in the basis
``|b_p b_q>`` = ``|00>, |01>, |10>, |11>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

GATE_KINDS = ("X", "GIVENS", "SWAP", "GS", "BASIS_X", "BASIS_Y", "PAIR_ROT")
_ARITY = {"X": 1, "BASIS_X": 1, "BASIS_Y": 1, "GIVENS": 2, "SWAP": 2, "GS": 2, "PAIR_ROT": 2}

_SQ2 = np.sqrt(0.5)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
# Ry(-pi/2): measuring Z afterwards measures X
_BASIS_X = np.array([[_SQ2, _SQ2], [-_SQ2, _SQ2]], dtype=complex)
# Rx(pi/2): measuring Z afterwards measures Y
_BASIS_Y = np.array([[_SQ2, -1j * _SQ2], [-1j * _SQ2, _SQ2]], dtype=complex)
_SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float = 0.0

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        qubits = tuple(int(q) for q in self.qubits)
        if len(qubits) != _ARITY[self.kind]:
            raise ValueError(f"{self.kind} acts on {_ARITY[self.kind]} qubit(s)")
        if len(set(qubits)) != len(qubits):
            raise ValueError("gate qubits must be distinct")
        if not np.isfinite(self.angle):
            raise ValueError("gate angle must be finite")
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "angle", float(self.angle))

    def to_json(self) -> dict:
        return {"kind": self.kind, "qubits": list(self.qubits), "angle": self.angle}


def givens_matrix(theta: float) -> np.ndarray:
    """Rotation in span{|01>, |10>}: ``|01> -> cos|01> + sin|10>``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array(
        [[1, 0, 0, 0], [0, c, -s, 0], [0, s, c, 0], [0, 0, 0, 1]], dtype=complex
    )


def gate_matrix(gate: Gate) -> np.ndarray:
    kind = gate.kind
    if kind == "X":
        return _X
    if kind == "BASIS_X":
        return _BASIS_X
    if kind == "BASIS_Y":
        return _BASIS_Y
    if kind == "SWAP":
        return _SWAP
    if kind in ("GIVENS", "PAIR_ROT"):
        return givens_matrix(gate.angle)
    # GS: Givens rotation followed by a full swap
    return _SWAP @ givens_matrix(gate.angle)


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (2**self.n_qubits,):
            raise ValueError("amplitude vector length must be 2**n_qubits")

    @classmethod
    def zeros(cls, n_qubits: int) -> StateVector:
        amps = np.zeros(2**n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    @classmethod
    def basis(cls, bits: str) -> StateVector:
        """Basis state from a bitstring written qubit 0 first."""
        return cls(len(bits), np.eye(2 ** len(bits), dtype=complex)[bitstring_to_index(bits)])

    def copy(self) -> StateVector:
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def index_to_bitstring(index: int, n_qubits: int) -> str:
    return "".join("1" if (index >> q) & 1 else "0" for q in range(n_qubits))


def bitstring_to_index(bits: str) -> int:
    return sum(1 << q for q, b in enumerate(bits) if b == "1")


def _check_qubits(state: StateVector, qubits: Iterable[int]) -> None:
    for q in qubits:
        if not 0 <= q < state.n_qubits:
            raise IndexError(f"qubit {q} out of range for {state.n_qubits} qubits")


def apply_matrix(state: StateVector, matrix: np.ndarray, qubits: Sequence[int]) -> StateVector:
    """Apply a 2**k x 2**k unitary to ``qubits`` (first listed = most significant)."""
    _check_qubits(state, qubits)
    n = state.n_qubits
    k = len(qubits)
    tensor = state.amplitudes.reshape((2,) * n)
    # reshape is C-ordered, so qubit q lives on axis n-1-q
    axes = [n - 1 - q for q in qubits]
    tensor = np.moveaxis(tensor, axes, range(k))
    shape = tensor.shape
    tensor = (matrix @ tensor.reshape(2**k, -1)).reshape(shape)
    state.amplitudes = np.moveaxis(tensor, range(k), axes).reshape(-1)
    return state


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Apply ``gate`` in place and return ``state``."""
    return apply_matrix(state, gate_matrix(gate), gate.qubits)


def apply_gates(state: StateVector, gates: Iterable[Gate]) -> StateVector:
    for gate in gates:
        apply_gate(state, gate)
    return state


@dataclass(frozen=True)
class ReadoutNoise:
    """Independent symmetric bit flip on every measured bit."""

    flip_probability: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.flip_probability <= 1.0:
            raise ValueError("flip_probability must lie in [0, 1]")


def apply_readout_channel(probabilities: np.ndarray, noise: ReadoutNoise | None) -> np.ndarray:
    """Outcome distribution after independent symmetric flips on every bit."""
    p = 0.0 if noise is None else noise.flip_probability
    if p == 0.0:
        return np.array(probabilities, dtype=float)
    n = int(np.log2(len(probabilities)))
    tensor = np.asarray(probabilities, dtype=float).reshape((2,) * n)
    flip = np.array([[1 - p, p], [p, 1 - p]])
    for axis in range(n):
        tensor = np.moveaxis(np.tensordot(flip, tensor, axes=([1], [axis])), 0, axis)
    return tensor.reshape(-1)


def sample_indices(
    probabilities: np.ndarray,
    shots: int,
    rng: np.random.Generator,
    noise: ReadoutNoise | None = None,
    n_qubits: int | None = None,
) -> np.ndarray:
    """Draw ``shots`` basis indices by inverse CDF, then apply readout flips."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    cdf = np.cumsum(probabilities)
    draws = rng.random(shots) * cdf[-1]
    idx = np.searchsorted(cdf, draws, side="right")
    np.minimum(idx, len(cdf) - 1, out=idx)
    p = 0.0 if noise is None else noise.flip_probability
    if p > 0.0:
        n = n_qubits if n_qubits is not None else int(np.log2(len(probabilities)))
        flips = rng.random((shots, n)) < p
        idx ^= flips.astype(np.int64) @ (1 << np.arange(n, dtype=np.int64))
    return idx


def sample_counts(
    state: StateVector,
    rotations: Sequence[Gate],
    shots: int,
    noise: ReadoutNoise | None,
    rng: np.random.Generator,
) -> np.ndarray:
    """Histogram over basis indices (length ``2**n``) after ``rotations``."""
    rotated = apply_gates(state.copy(), rotations)
    idx = sample_indices(rotated.probabilities(), shots, rng, noise, state.n_qubits)
    return np.bincount(idx, minlength=2**state.n_qubits)


def measure_counts(
    state: StateVector,
    rotations: Sequence[Gate] = (),
    shots: int = 1024,
    noise: ReadoutNoise | None = None,
    seed: int | None = None,
) -> dict[str, int]:
    """Rotate, sample and read out ``shots`` bitstrings.

    The input state is not modified. Identical arguments and seed give an
    identical histogram.
    """
    rng = np.random.default_rng(seed)
    counts = sample_counts(state, rotations, shots, noise, rng)
    return {
        index_to_bitstring(int(i), state.n_qubits): int(counts[i]) for i in np.flatnonzero(counts)
    }
