"""Regenerate the FCIDUMP fixtures shipped in fixtures/.

Linear hydrogen chains in STO-3G, RHF canonical orbitals, D2h orbital
symmetry labels written to ORBSYM. Requires pyscf.

    python3 tools/gen_fixtures.py
"""
import os

import numpy as np
from pyscf import gto, scf
from pyscf.tools import fcidump

OUT = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def chain(n_atoms, r, symmetry=True):
    atoms = [("H", (0.0, 0.0, i * r)) for i in range(n_atoms)]
    mol = gto.M(atom=atoms, basis="sto-3g", unit="Angstrom", verbose=0,
                symmetry="D2h" if symmetry else False)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    assert mf.converged, (n_atoms, r)
    return mol, mf


def write(name, mf):
    path = os.path.join(OUT, name)
    fcidump.from_scf(mf, path, tol=1e-14, molpro_orbsym=True)
    return mf.e_tot


def main():
    os.makedirs(OUT, exist_ok=True)
    rows = []
    # H2 without symmetry labels: every orbital is treated as totally symmetric.
    _, mf = chain(2, 0.75, symmetry=False)
    rows.append(("H2_0.75.fcidump", write("H2_0.75.fcidump", mf)))
    for r in np.round(np.arange(0.5, 2.0001, 0.1), 2):
        _, mf = chain(4, r)
        name = f"H4_{r:.2f}.fcidump"
        rows.append((name, write(name, mf)))
    _, mf = chain(6, 1.0)
    rows.append(("H6_1.00.fcidump", write("H6_1.00.fcidump", mf)))
    with open(os.path.join(OUT, "rhf_energies.txt"), "w") as f:
        for name, e in rows:
            f.write(f"{name} {e:.12f}\n")


if __name__ == "__main__":
    main()
