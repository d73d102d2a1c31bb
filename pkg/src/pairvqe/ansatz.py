"""Paired-electron UCC ansatz on a linear Givens-SWAP network.

Each Trotter step is an odd-even transposition network of ``N`` layers on
nearest-neighbour wires. Wherever an occupied and a virtual orbital meet,
the swap carries a Givens rotation by their amplitude (a GS gate); all
other meetings are plain swaps. After one step every occupied orbital has
met every virtual orbital exactly once and the wire order is reversed.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .simulator import Gate, StateVector, apply_gates

_KEY_RE = re.compile(r"^\s*\(?\s*(\d+)\s*,\s*(\d+)\s*\)?\s*$")


@dataclass(frozen=True)
class PuccdParameters:
    """Pair-excitation angles keyed by ``(virtual i, occupied j)``."""

    n_orbitals: int
    n_pairs: int
    values: dict[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        expected = set(self.keys(self.n_orbitals, self.n_pairs))
        got = set(self.values)
        if got != expected:
            missing = sorted(expected - got)
            extra = sorted(got - expected)
            raise ValueError(f"parameter keys mismatch (missing {missing}, unexpected {extra})")
        for v in self.values.values():
            if not np.isfinite(v):
                raise ValueError("parameters must be finite")

    @staticmethod
    def keys(n_orbitals: int, n_pairs: int) -> list[tuple[int, int]]:
        """Canonical order: occupied index outer, virtual index inner."""
        return [(i, j) for j in range(n_pairs) for i in range(n_pairs, n_orbitals)]

    @classmethod
    def zeros(cls, n_orbitals: int, n_pairs: int) -> PuccdParameters:
        return cls(n_orbitals, n_pairs, {k: 0.0 for k in cls.keys(n_orbitals, n_pairs)})

    @classmethod
    def from_vector(cls, n_orbitals: int, n_pairs: int, x) -> PuccdParameters:
        keys = cls.keys(n_orbitals, n_pairs)
        x = np.asarray(x, dtype=float)
        if x.shape != (len(keys),):
            raise ValueError(f"expected {len(keys)} parameters, got shape {x.shape}")
        return cls(n_orbitals, n_pairs, dict(zip(keys, map(float, x))))

    def as_vector(self) -> np.ndarray:
        return np.array([self.values[k] for k in self.keys(self.n_orbitals, self.n_pairs)])

    def __len__(self) -> int:
        return len(self.values)

    def to_json(self) -> dict[str, float]:
        return {f"({i},{j})": v for (i, j), v in self.values.items()}

    @classmethod
    def from_json(cls, n_orbitals: int, n_pairs: int, data: dict) -> PuccdParameters:
        values = {}
        for key, v in data.items():
            m = _KEY_RE.match(key)
            if not m:
                raise ValueError(f"bad parameter key {key!r}; expected '(i,j)'")
            values[(int(m.group(1)), int(m.group(2)))] = float(v)
        return cls(n_orbitals, n_pairs, values)

    @classmethod
    def load(cls, path: str | Path, n_orbitals: int, n_pairs: int) -> PuccdParameters:
        data = json.loads(Path(path).read_text())
        if "best_parameters" in data:  # a VQE result file
            data = data["best_parameters"]
        return cls.from_json(n_orbitals, n_pairs, data)


@dataclass(frozen=True)
class SwapNetworkLayout:
    """Odd-even transposition layers and the resulting wire permutation.

    ``wire_map[w]`` is the logical orbital found on wire ``w`` after the network.
    """

    n_wires: int
    layers: tuple[tuple[tuple[int, int], ...], ...]
    wire_map: tuple[int, ...]


def swap_network_layout(n_wires: int) -> SwapNetworkLayout:
    layers = tuple(
        tuple((w, w + 1) for w in range(start % 2, n_wires - 1, 2)) for start in range(n_wires)
    )
    order = list(range(n_wires))
    for layer in layers:
        for a, b in layer:
            order[a], order[b] = order[b], order[a]
    return SwapNetworkLayout(n_wires, layers, tuple(order))


@dataclass
class Circuit:
    n_qubits: int
    gates: list[Gate]
    wire_map: tuple[int, ...]
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "wire_map": list(self.wire_map),
            "metadata": self.metadata,
            "gates": [g.to_json() for g in self.gates],
        }


def build_puccd_circuit(params: PuccdParameters, trotter_steps: int = 1) -> Circuit:
    """Hartree-Fock preparation followed by ``trotter_steps`` GS networks.

    A GS gate between wires ``(w, w+1)`` uses the angle ``t_ij / trotter_steps``
    of the occupied/virtual pair it joins, signed so that the rotation moves
    amplitude from the occupied orbital into the virtual one.
    """
    if trotter_steps < 1:
        raise ValueError("trotter_steps must be at least 1")
    n, ne = params.n_orbitals, params.n_pairs
    layout = swap_network_layout(n)
    gates = [Gate("X", (w,)) for w in range(ne)]
    order = list(range(n))  # logical orbital on each wire
    for _ in range(trotter_steps):
        for layer in layout.layers:
            for a, b in layer:
                la, lb = order[a], order[b]
                if (la < ne) != (lb < ne):
                    virt, occ = (la, lb) if lb < ne else (lb, la)
                    theta = params.values[(virt, occ)] / trotter_steps
                    # GIVENS(p, q) moves the excitation from q to p
                    gates.append(Gate("GS", (a, b), theta if la == virt else -theta))
                else:
                    gates.append(Gate("SWAP", (a, b)))
                order[a], order[b] = lb, la
    meta = {
        "schedule": "odd-even transposition",
        "layers_per_step": n,
        "trotter_steps": trotter_steps,
    }
    return Circuit(n, gates, tuple(order), meta)


def logical_permutation(wire_map: tuple[int, ...]) -> np.ndarray:
    """Index map ``perm[k_physical] = k_logical`` for a wire permutation."""
    n = len(wire_map)
    idx = np.arange(2**n)
    logical = np.zeros_like(idx)
    for w, orb in enumerate(wire_map):
        logical |= ((idx >> w) & 1) << orb
    return logical


def statevector_of(params: PuccdParameters, trotter_steps: int = 1) -> StateVector:
    """Simulate the ansatz and return amplitudes indexed by logical orbital occupation."""
    circuit = build_puccd_circuit(params, trotter_steps)
    state = apply_gates(StateVector.zeros(circuit.n_qubits), circuit.gates)
    amps = np.empty_like(state.amplitudes)
    amps[logical_permutation(circuit.wire_map)] = state.amplitudes
    return StateVector(circuit.n_qubits, amps)
