"""Electron integrals and the seniority-zero (hard-core boson) coefficients.

Two-electron integrals are held in chemist's notation, ``tei[i, j, k, l] =
(ij|kl)``, exactly as they appear in an FCIDUMP file. The pair-Hamiltonian
matrix elements are defined on the "pair-ordered" array

    e_tei[i, j, k, l] = (il|jk),

the layout in which ``e_tei[i, i, j, j]`` is the pair-hopping (exchange)
integral and ``2 e_tei[i, j, j, i] - e_tei[i, j, i, j]`` is the
Coulomb-minus-exchange pair interaction. :func:`pair_ordered_tei` converts
between the two.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SYMMETRY_TOL = 1e-12


class IntegralFormatError(ValueError):
    """Raised for malformed integral files; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class IntegralSet:
    """Restricted molecular-orbital integrals for a closed-shell system.

    Orbital order defines the Hartree-Fock reference: the first
    ``n_electron_pairs`` orbitals are doubly occupied.
    """

    n_orbitals: int
    n_electron_pairs: int
    core_energy: float
    sei: np.ndarray  # (N, N)
    tei: np.ndarray  # (N, N, N, N), chemist's notation

    def __post_init__(self):
        n = self.n_orbitals
        if n < 1:
            raise ValueError("n_orbitals must be at least 1")
        if not 0 <= self.n_electron_pairs <= n:
            raise ValueError(f"n_electron_pairs must lie in [0, {n}]")
        sei = np.asarray(self.sei, dtype=float)
        tei = np.asarray(self.tei, dtype=float)
        if sei.shape != (n, n) or tei.shape != (n, n, n, n):
            raise ValueError("integral array shapes do not match n_orbitals")
        if not np.allclose(sei, sei.T, rtol=0, atol=SYMMETRY_TOL):
            raise ValueError("one-electron integrals are not symmetric")
        for perm in _EIGHTFOLD[1:]:
            if not np.allclose(tei, tei.transpose(perm), rtol=0, atol=SYMMETRY_TOL):
                raise ValueError("two-electron integrals lack 8-fold symmetry")
        object.__setattr__(self, "sei", sei)
        object.__setattr__(self, "tei", tei)

    def scaled(self, factor: float) -> IntegralSet:
        return IntegralSet(
            self.n_orbitals,
            self.n_electron_pairs,
            factor * self.core_energy,
            factor * self.sei,
            factor * self.tei,
        )


@dataclass(frozen=True)
class SeniorityZeroCoeffs:
    """Coefficients of the pair Hamiltonian

    ``H = C + sum_pq h_r1[p,q] b+_p b_q + sum_{p!=q} h_r2[p,q] n_p n_q``.
    """

    constant: float
    h_r1: np.ndarray
    h_r2: np.ndarray

    def __post_init__(self):
        h_r1 = np.asarray(self.h_r1, dtype=float)
        h_r2 = np.asarray(self.h_r2, dtype=float)
        if h_r1.ndim != 2 or h_r1.shape[0] != h_r1.shape[1] or h_r1.shape != h_r2.shape:
            raise ValueError("h_r1 and h_r2 must be square matrices of equal size")
        if not (np.all(np.isfinite(h_r1)) and np.all(np.isfinite(h_r2))):
            raise ValueError("coefficients must be finite")
        if not np.array_equal(h_r1, h_r1.T) or not np.array_equal(h_r2, h_r2.T):
            raise ValueError("h_r1 and h_r2 must be symmetric")
        if np.any(np.diag(h_r2) != 0):
            raise ValueError("h_r2 must have a zero diagonal")
        object.__setattr__(self, "h_r1", h_r1)
        object.__setattr__(self, "h_r2", h_r2)

    @property
    def n_orbitals(self) -> int:
        return self.h_r1.shape[0]


# index permutations of (ij|kl) that leave real orbital integrals unchanged
_EIGHTFOLD = [
    (0, 1, 2, 3),
    (1, 0, 2, 3),
    (0, 1, 3, 2),
    (1, 0, 3, 2),
    (2, 3, 0, 1),
    (3, 2, 0, 1),
    (2, 3, 1, 0),
    (3, 2, 1, 0),
]


def _equivalent_indices(i: int, j: int, k: int, l: int) -> set[tuple[int, int, int, int]]:
    idx = (i, j, k, l)
    return {tuple(idx[p] for p in perm) for perm in _EIGHTFOLD}


def _parse_header(text: str) -> dict[str, str]:
    parts = re.split(r"([A-Za-z_][A-Za-z0-9_]*)\s*=", text)
    return {key.upper(): value.strip().strip(",").strip() for key, value in zip(parts[1::2], parts[2::2])}


def parse_fcidump(text: str) -> IntegralSet:
    """Parse FCIDUMP text into an :class:`IntegralSet`.

    Data lines read ``value i j k l`` with 1-based orbital indices.
    ``k = l = 0`` marks a one-electron integral, all-zero indices the core
    energy, and ``j = k = l = 0`` an orbital energy (ignored). Entries not
    listed are zero. A repeated integral keeps its last value.
    """
    lines = text.splitlines()
    header_lines = []
    body_start = None
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        upper = stripped.upper()
        if lineno == 1 and not upper.startswith("&FCI"):
            raise IntegralFormatError("expected '&FCI' header", lineno)
        if upper.startswith("&END") or upper == "/" or upper.endswith("&END") or upper.endswith("/"):
            tail = re.sub(r"(&END|/)\s*$", "", stripped, flags=re.IGNORECASE)
            header_lines.append(tail)
            body_start = lineno
            break
        header_lines.append(stripped)
    if body_start is None:
        raise IntegralFormatError("header is not terminated by '&END'")

    header_text = " ".join(header_lines)
    header_text = re.sub(r"^&FCI", "", header_text, flags=re.IGNORECASE)
    fields = _parse_header(header_text)
    try:
        norb = int(fields["NORB"])
        nelec = int(fields["NELEC"])
    except KeyError as exc:
        raise IntegralFormatError(f"header is missing {exc.args[0]}", 1) from None
    except ValueError:
        raise IntegralFormatError("NORB and NELEC must be integers", 1) from None
    ms2 = int(fields.get("MS2", "0") or 0)
    if norb < 1:
        raise IntegralFormatError("NORB must be positive", 1)
    if nelec % 2 or ms2 != 0:
        raise IntegralFormatError("open-shell unsupported: NELEC must be even and MS2 zero", 1)
    if nelec // 2 > norb:
        raise IntegralFormatError("more electron pairs than orbitals", 1)

    sei = np.zeros((norb, norb))
    tei = np.zeros((norb, norb, norb, norb))
    core = 0.0
    seen: dict[tuple[int, ...], int] = {}

    for lineno, line in enumerate(lines[body_start:], start=body_start + 1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 5:
            raise IntegralFormatError(f"expected 'value i j k l', got {line.strip()!r}", lineno)
        try:
            value = float(parts[0].replace("D", "E").replace("d", "e"))
        except ValueError:
            raise IntegralFormatError(f"non-numeric value {parts[0]!r}", lineno) from None
        try:
            i, j, k, l = (int(p) for p in parts[1:])
        except ValueError:
            raise IntegralFormatError("orbital indices must be integers", lineno) from None
        if any(x < 0 or x > norb for x in (i, j, k, l)):
            raise IntegralFormatError(f"orbital index out of range 1..{norb}", lineno)

        if i == j == k == l == 0:
            key: tuple[int, ...] = ()
            core = value
        elif j == k == l == 0:
            continue  # orbital energy
        elif k == l == 0:
            if i == 0 or j == 0:
                raise IntegralFormatError("one-electron entry needs two nonzero indices", lineno)
            key = tuple(sorted((i, j)))
            sei[i - 1, j - 1] = sei[j - 1, i - 1] = value
        else:
            if 0 in (i, j, k, l):
                raise IntegralFormatError("two-electron entry needs four nonzero indices", lineno)
            equiv = _equivalent_indices(i - 1, j - 1, k - 1, l - 1)
            key = min(equiv)
            for idx in equiv:
                tei[idx] = value
        if key in seen:
            warnings.warn(
                f"duplicate integral {key} on line {lineno} overrides line {seen[key]}",
                stacklevel=2,
            )
        seen[key] = lineno

    return IntegralSet(norb, nelec // 2, core, sei, tei)


def write_fcidump(ints: IntegralSet, tol: float = 0.0) -> str:
    """Serialize to FCIDUMP text with 8-fold unique entries and ``%.17g`` values."""
    n = ints.n_orbitals
    out = [
        f" &FCI NORB={n},NELEC={2 * ints.n_electron_pairs},MS2=0,",
        "  ORBSYM=" + "1," * n,
        "  ISYM=1,",
        " &END",
    ]
    fmt = "{:.17g} {} {} {} {}"
    for i in range(n):
        for j in range(i + 1):
            for k in range(n):
                for l in range(k + 1):
                    if i * (i + 1) // 2 + j < k * (k + 1) // 2 + l:
                        continue
                    v = ints.tei[i, j, k, l]
                    if abs(v) > tol:
                        out.append(fmt.format(v, i + 1, j + 1, k + 1, l + 1))
    for i in range(n):
        for j in range(i + 1):
            v = ints.sei[i, j]
            if abs(v) > tol:
                out.append(fmt.format(v, i + 1, j + 1, 0, 0))
    out.append(fmt.format(ints.core_energy, 0, 0, 0, 0))
    return "\n".join(out) + "\n"


def integrals_from_json(data: dict) -> IntegralSet:
    """Build an :class:`IntegralSet` from the synthetic JSON layout.

    Keys: ``N``, ``n_e``, ``C``, ``sei`` (N x N) and ``tei`` (N x N x N x N,
    chemist's notation).
    """
    try:
        return IntegralSet(
            int(data["N"]),
            int(data["n_e"]),
            float(data["C"]),
            np.array(data["sei"], dtype=float),
            np.array(data["tei"], dtype=float),
        )
    except KeyError as exc:
        raise IntegralFormatError(f"JSON integrals missing key {exc.args[0]!r}") from None


def integrals_to_json(ints: IntegralSet) -> dict:
    return {
        "N": ints.n_orbitals,
        "n_e": ints.n_electron_pairs,
        "C": ints.core_energy,
        "sei": ints.sei.tolist(),
        "tei": ints.tei.tolist(),
    }


def load_integrals(path: str | Path) -> IntegralSet:
    """Load an FCIDUMP file, or the JSON format when the suffix is ``.json``."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise IntegralFormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
        return integrals_from_json(data)
    return parse_fcidump(text)


def pair_ordered_tei(tei: np.ndarray) -> np.ndarray:
    """Reorder chemist's ``(ij|kl)`` into the pair layout ``e[i,j,k,l] = (il|jk)``."""
    return np.einsum("adbc->abcd", tei)


def hcb_coefficients_from_arrays(
    sei: np.ndarray, e_tei: np.ndarray, constant: float
) -> SeniorityZeroCoeffs:
    """Pair-Hamiltonian coefficients from one-electron and pair-ordered two-electron arrays.

    ``h_r1[i,i] = 2 sei[i,i] + e[i,i,i,i]``, ``h_r1[i,j] = e[i,i,j,j]`` and
    ``h_r2[i,j] = 2 e[i,j,j,i] - e[i,j,i,j]`` for ``i != j``. Both matrices are
    symmetrized so that round-off in the input cannot break exact symmetry.
    """
    sei = np.asarray(sei, dtype=float)
    e_tei = np.asarray(e_tei, dtype=float)
    n = sei.shape[0]
    idx = np.arange(n)
    h_r1 = np.einsum("iijj->ij", e_tei).copy()
    h_r1[idx, idx] = 2.0 * sei[idx, idx] + e_tei[idx, idx, idx, idx]
    h_r2 = 2.0 * np.einsum("ijji->ij", e_tei) - np.einsum("ijij->ij", e_tei)
    h_r2[idx, idx] = 0.0
    h_r1 = 0.5 * (h_r1 + h_r1.T)
    h_r2 = 0.5 * (h_r2 + h_r2.T)
    return SeniorityZeroCoeffs(float(constant), h_r1, h_r2)


def build_hcb_coefficients(ints: IntegralSet) -> SeniorityZeroCoeffs:
    return hcb_coefficients_from_arrays(ints.sei, pair_ordered_tei(ints.tei), ints.core_energy)
