"""Regenerate the checked-in integral fixtures with PySCF.

Not a runtime dependency: run once with ``pip install pyscf`` and commit
the output. Writes FCIDUMP files, CCSD pair amplitudes and a reference
table of PySCF energies (RHF, FCI, and a seniority-zero projection of the
FCI Hamiltonian) used by the test suite to pin the integral convention.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from pyscf import ao2mo, cc, fci, gto, scf
from pyscf.fci import cistring
from pyscf.tools import fcidump

ROOT = Path(__file__).resolve().parent.parent / "fixtures"

LIH_DISTANCES = [1.2, 1.4, 1.595, 2.0, 2.5, 3.0]
H2_DISTANCES = [0.735]


def seniority_zero_energy(h1, eri, norb, nelec, ecore):
    """Lowest eigenvalue of the FCI Hamiltonian projected on paired determinants."""
    npair = nelec // 2
    strings = cistring.make_strings(range(norb), npair)
    nstr = len(strings)
    h2e = fci.direct_spin1.absorb_h1e(h1, eri, norb, (npair, npair), 0.5)
    mat = np.zeros((nstr, nstr))
    for col in range(nstr):
        ci = np.zeros((nstr, nstr))
        ci[col, col] = 1.0
        hc = fci.direct_spin1.contract_2e(h2e, ci, norb, (npair, npair))
        mat[:, col] = np.diag(hc)
    return float(np.linalg.eigvalsh(0.5 * (mat + mat.T))[0] + ecore)


def build(atom, basis, path_stem):
    fcidump_path = path_stem.parent / (path_stem.name + ".fcidump")
    ccsd_path = path_stem.parent / (path_stem.name + ".ccsd.json")
    mol = gto.M(atom=atom, basis=basis, unit="Angstrom", verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    norb = mf.mo_coeff.shape[1]
    h1 = mf.mo_coeff.T @ mf.get_hcore() @ mf.mo_coeff
    eri = ao2mo.restore(1, ao2mo.full(mol, mf.mo_coeff), norb)
    ecore = mol.energy_nuc()
    fcidump.from_integrals(
        str(fcidump_path), h1, eri, norb, mol.nelectron, ecore, tol=1e-14
    )
    e_fci = fci.FCI(mf).kernel()[0]
    e_doci = seniority_zero_energy(h1, eri, norb, mol.nelectron, ecore)

    mycc = cc.RCCSD(mf)
    mycc.conv_tol = 1e-10
    mycc.kernel()
    nocc = mol.nelectron // 2
    amps = {
        f"({a + nocc},{i})": float(mycc.t2[i, i, a, a])
        for i in range(nocc)
        for a in range(norb - nocc)
    }
    ccsd_path.write_text(json.dumps(amps, indent=2) + "\n")
    return {
        "file": fcidump_path.name,
        "basis": basis,
        "n_orbitals": norb,
        "n_electrons": mol.nelectron,
        "e_rhf": float(mf.e_tot),
        "e_fci": float(e_fci),
        "e_doci": e_doci,
        "e_ccsd": float(mycc.e_tot),
    }


def main():
    reference = {}
    lih_dir = ROOT / "lih_sto6g"
    lih_dir.mkdir(parents=True, exist_ok=True)
    for d in LIH_DISTANCES:
        stem = lih_dir / f"lih_{d:.3f}"
        reference[f"lih_sto6g/{stem.name}"] = build(f"Li 0 0 0; H 0 0 {d}", "sto-6g", stem)
    h2_dir = ROOT / "h2_sto3g"
    h2_dir.mkdir(parents=True, exist_ok=True)
    for d in H2_DISTANCES:
        stem = h2_dir / f"h2_{d:.3f}"
        reference[f"h2_sto3g/{stem.name}"] = build(f"H 0 0 0; H 0 0 {d}", "sto-3g", stem)
    (ROOT / "pyscf_reference.json").write_text(json.dumps(reference, indent=2) + "\n")


if __name__ == "__main__":
    main()
