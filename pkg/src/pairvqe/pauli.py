"""Qubit form of the pair Hamiltonian and its measurement plans.

With ``b_p = (X_p + i Y_p) / 2`` the pair Hamiltonian becomes a sum of
``Z_p``, ``Z_p Z_q``, ``X_p X_q`` and ``Y_p Y_q`` strings plus a constant.
Pauli labels are written qubit 0 first: ``"XXII"`` is ``X_0 X_1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .integrals import SeniorityZeroCoeffs
from .simulator import Gate

DROP_TOL = 1e-12

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    ops: str
    weight: float

    def __post_init__(self):
        if set(self.ops) - set("IXYZ"):
            raise ValueError(f"invalid Pauli label {self.ops!r}")
        if not np.isfinite(self.weight):
            raise ValueError("Pauli weight must be finite")

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(q for q, c in enumerate(self.ops) if c != "I")

    @property
    def kind(self) -> str:
        """``"Z"``, ``"ZZ"``, ``"XX"``, ``"YY"`` or ``"I"``; anything else is ``"?"``."""
        letters = "".join(self.ops[q] for q in self.support)
        if letters in ("", "Z", "ZZ", "XX", "YY"):
            return letters or "I"
        return "?"

    def masks(self) -> tuple[int, int, int]:
        """Bit masks (flip, phase, n_y) with ``P|k> = i**n_y (-1)**popcount(k & phase) |k ^ flip>``."""
        flip = phase = 0
        n_y = 0
        for q, c in enumerate(self.ops):
            if c in "XY":
                flip |= 1 << q
            if c in "YZ":
                phase |= 1 << q
            n_y += c == "Y"
        return flip, phase, n_y

    def to_dense(self) -> np.ndarray:
        # kron order: highest qubit leftmost so qubit 0 is the lowest bit
        return reduce(np.kron, [_PAULI[c] for c in reversed(self.ops)])


def qubitwise_commute(a: PauliString, b: PauliString) -> bool:
    return all(x == "I" or y == "I" or x == y for x, y in zip(a.ops, b.ops))


@dataclass(frozen=True)
class QubitHamiltonian:
    n_qubits: int
    terms: tuple[PauliString, ...]
    constant: float

    def __post_init__(self):
        keys = [t.ops for t in self.terms]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate Pauli strings in Hamiltonian")
        if any(len(k) != self.n_qubits for k in keys):
            raise ValueError("Pauli string length does not match n_qubits")
        object.__setattr__(self, "terms", tuple(self.terms))

    def term(self, ops: str) -> PauliString | None:
        for t in self.terms:
            if t.ops == ops:
                return t
        return None

    def weights(self) -> dict[str, float]:
        return {t.ops: t.weight for t in self.terms}

    def to_dense(self) -> np.ndarray:
        dim = 2**self.n_qubits
        mat = self.constant * np.eye(dim, dtype=complex)
        for t in self.terms:
            mat += t.weight * t.to_dense()
        return mat

    def diagonal(self) -> np.ndarray:
        """Diagonal of the Z/ZZ part plus the constant, indexed by basis state."""
        idx = np.arange(2**self.n_qubits)
        diag = np.full(idx.shape, self.constant, dtype=float)
        for t in self.terms:
            if t.kind in ("Z", "ZZ"):
                _, phase, _ = t.masks()
                diag += t.weight * parity_sign(idx & phase)
        return diag

    def to_json(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "constant": self.constant,
            "terms": [{"ops": t.ops, "weight": t.weight} for t in self.terms],
        }

    @classmethod
    def from_json(cls, data: dict) -> QubitHamiltonian:
        terms = tuple(PauliString(t["ops"], float(t["weight"])) for t in data["terms"])
        return cls(int(data["n_qubits"]), terms, float(data["constant"]))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def parity_sign(values: np.ndarray) -> np.ndarray:
    """``(-1)**popcount(v)`` elementwise."""
    return 1 - 2 * (np.bitwise_count(values) & 1).astype(np.int64)


def _label(n: int, assignment: dict[int, str]) -> str:
    return "".join(assignment.get(q, "I") for q in range(n))


def qubitize(coeffs: SeniorityZeroCoeffs, drop_tol: float = DROP_TOL) -> QubitHamiltonian:
    """Map the pair Hamiltonian onto Pauli strings.

    Terms are canonicalized over unordered pairs ``p < q``; the sums over
    ``p != q`` therefore contribute twice to each pair. Weights with
    magnitude below ``drop_tol`` are dropped.
    """
    h1, h2 = coeffs.h_r1, coeffs.h_r2
    n = coeffs.n_orbitals
    off = ~np.eye(n, dtype=bool)
    constant = coeffs.constant + 0.5 * np.trace(h1) + 0.25 * h2[off].sum()

    terms = []
    for p in range(n):
        w = -0.5 * h1[p, p] - 0.5 * (h2[p].sum() - h2[p, p])
        terms.append(PauliString(_label(n, {p: "Z"}), float(w)))
    for p in range(n):
        for q in range(p + 1, n):
            hop = 0.5 * h1[p, q]
            terms.append(PauliString(_label(n, {p: "X", q: "X"}), float(hop)))
            terms.append(PauliString(_label(n, {p: "Y", q: "Y"}), float(hop)))
            terms.append(PauliString(_label(n, {p: "Z", q: "Z"}), float(0.5 * h2[p, q])))
    terms = [t for t in terms if abs(t.weight) >= drop_tol]
    return QubitHamiltonian(n, tuple(terms), float(constant))


@dataclass(frozen=True)
class MeasurementGroup:
    """One measurement setting: the terms it reads and the gates that rotate into it.

    ``basis`` is ``"DIAGONAL"``, ``"XX"``, ``"YY"`` or ``"PAIRED"``; paired
    groups list the qubit pairs of their round.
    """

    basis: str
    terms: tuple[str, ...]
    rotations: tuple[Gate, ...]
    pairs: tuple[tuple[int, int], ...] = ()

    @property
    def label(self) -> str:
        if self.basis == "PAIRED":
            return "PAIRED[" + ",".join(f"{p}-{q}" for p, q in self.pairs) + "]"
        return self.basis

    @property
    def particle_basis(self) -> bool:
        """True when outcomes are occupation numbers, so pair number can be checked."""
        return self.basis in ("DIAGONAL", "PAIRED")


class HamiltonianStructureError(ValueError):
    pass


def _check_structure(h: QubitHamiltonian) -> None:
    for t in h.terms:
        if t.kind not in ("Z", "ZZ", "XX", "YY"):
            raise HamiltonianStructureError(f"term {t.ops} is not Z, ZZ, XX or YY")


def group_terms(h: QubitHamiltonian) -> list[MeasurementGroup]:
    """Partition terms into at most three tensor-product bases (empty ones omitted)."""
    _check_structure(h)
    n = h.n_qubits
    buckets: dict[str, list[str]] = {"DIAGONAL": [], "XX": [], "YY": []}
    for t in h.terms:
        buckets["DIAGONAL" if t.kind in ("Z", "ZZ") else t.kind].append(t.ops)
    rot = {
        "DIAGONAL": (),
        "XX": tuple(Gate("BASIS_X", (q,)) for q in range(n)),
        "YY": tuple(Gate("BASIS_Y", (q,)) for q in range(n)),
    }
    return [MeasurementGroup(b, tuple(keys), rot[b]) for b, keys in buckets.items() if keys]


def paired_measurement_schedule(n_qubits: int) -> list[list[tuple[int, int]]]:
    """Round-robin 1-factorization of the complete graph on the qubits.

    Circle method: qubit 0 (or a dummy for odd ``n``) stays fixed while the
    others rotate, giving ``n - 1`` rounds for even ``n`` and ``n`` rounds
    for odd ``n``.
    """
    if n_qubits < 2:
        raise ValueError("a pair schedule needs at least two qubits")
    players: list[int | None] = list(range(n_qubits))
    if n_qubits % 2:
        players.append(None)
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a is not None and b is not None:
                pairs.append((min(a, b), max(a, b)))
        rounds.append(sorted(pairs))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


PAIR_ROTATION_ANGLE = -np.pi / 4  # applies U(pi/4)^dagger before readout


def paired_groups(h: QubitHamiltonian) -> list[MeasurementGroup]:
    """Diagonal setting plus one setting per schedule round.

    In a round, each pair ``(p, q)`` is rotated by ``U_pq(pi/4)^dagger``,
    after which ``X_p X_q + Y_p Y_q`` is read as ``Z_p - Z_q``. Requires the
    XX and YY weights of every pair to coincide, as ``qubitize`` guarantees.
    """
    _check_structure(h)
    n = h.n_qubits
    weights = h.weights()
    diag = tuple(t.ops for t in h.terms if t.kind in ("Z", "ZZ"))
    groups = [MeasurementGroup("DIAGONAL", diag, ())] if diag else []
    if n < 2:
        return groups
    for rnd in paired_measurement_schedule(n):
        keys = []
        active = []
        for p, q in rnd:
            xx = _label(n, {p: "X", q: "X"})
            yy = _label(n, {p: "Y", q: "Y"})
            wx, wy = weights.get(xx, 0.0), weights.get(yy, 0.0)
            if wx == 0.0 and wy == 0.0:
                continue
            if wx != wy:
                raise HamiltonianStructureError(f"XX and YY weights differ on pair ({p}, {q})")
            keys += [k for k in (xx, yy) if k in weights]
            active.append((p, q))
        if active:
            rotations = tuple(Gate("PAIR_ROT", pq, PAIR_ROTATION_ANGLE) for pq in active)
            groups.append(MeasurementGroup("PAIRED", tuple(keys), rotations, tuple(active)))
    return groups
