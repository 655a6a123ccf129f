#!/usr/bin/env python3
"""Regenerates the FCIDUMP/AUX fixtures under tests/fixtures with PySCF.

    python3 tools/fixtures/generate_fixtures.py [output_dir]

Orbitals are symmetry-adapted RHF canonical orbitals so degenerate MOs come
out in a reproducible gauge.
"""

import sys
from pathlib import Path

import numpy as np
from pyscf import ao2mo, gto, scf


def write_fcidump(path, h1, eri, ecore, nelec):
    n = h1.shape[0]
    lines = [f"&FCI NORB={n},NELEC={nelec},MS2=0,", "ORBSYM=" + "1," * n, "ISYM=1,", "&END"]
    for p in range(n):
        for q in range(p + 1):
            pq = p * (p + 1) // 2 + q
            for r in range(p + 1):
                for s in range(r + 1):
                    rs = r * (r + 1) // 2 + s
                    if rs > pq:
                        continue
                    v = eri[p, q, r, s]
                    if abs(v) > 1e-14:
                        lines.append(f"{float(v)!r} {p + 1} {q + 1} {r + 1} {s + 1}")
    for p in range(n):
        for q in range(p + 1):
            if abs(h1[p, q]) > 1e-14:
                lines.append(f"{float(h1[p, q])!r} {p + 1} {q + 1} 0 0")
    lines.append(f"{float(ecore)!r} 0 0 0 0")
    Path(path).write_text("\n".join(lines) + "\n")


def write_section(out, name, m):
    m = np.atleast_2d(m)
    out.append(f"#SECTION {name} {m.shape[0]} {m.shape[1]}")
    for row in m:
        out.append(" ".join(repr(float(x)) for x in row))


def write_aux(path, mol, c):
    out = ["# AO-basis data for localization"]
    write_section(out, "OVERLAP", mol.intor("int1e_ovlp"))
    write_section(out, "MO_COEFF", c)
    for name, d in zip(("DIPOLE_X", "DIPOLE_Y", "DIPOLE_Z"), mol.intor("int1e_r")):
        write_section(out, name, d)
    write_section(out, "AO_ATOM_MAP", np.array([[lab[0] for lab in mol.ao_labels(fmt=False)]]))
    write_section(out, "ATOMIC_NUMBERS", np.array([[mol.atom_charge(a) for a in range(mol.natm)]]))
    Path(path).write_text("\n".join(out) + "\n")


def molecular_fixture(stem, mol, outdir):
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    c = mf.mo_coeff
    n = c.shape[1]
    h1 = c.T @ mf.get_hcore() @ c
    eri = ao2mo.restore(1, ao2mo.full(mol, c), n)
    write_fcidump(outdir / f"{stem}.fcidump", h1, eri, mol.energy_nuc(), mol.nelectron)
    write_aux(outdir / f"{stem}.aux", mol, c)


def random_fixture(path, n, seed):
    rng = np.random.default_rng(seed)
    h1 = rng.normal(size=(n, n))
    h1 = 0.5 * (h1 + h1.T)
    eri = rng.normal(size=(n, n, n, n))
    # 8-fold symmetrization
    eri = eri + eri.transpose(1, 0, 2, 3)
    eri = eri + eri.transpose(0, 1, 3, 2)
    eri = eri + eri.transpose(2, 3, 0, 1)
    eri /= 8.0
    write_fcidump(path, h1, eri, 0.25, 2)


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[2] / "tests" / "fixtures"
    outdir.mkdir(parents=True, exist_ok=True)
    h2 = gto.M(atom="H 0 0 0; H 0 0 0.74", basis="cc-pvdz", symmetry=True, verbose=0)
    molecular_fixture("h2_ccpvdz_cmo", h2, outdir)
    for n in range(2, 11, 2):
        chain = gto.M(atom=[("H", (0, 0, 1.4 * i)) for i in range(n)], basis="sto-3g", unit="Angstrom",
                      symmetry=True, verbose=0)
        molecular_fixture(f"hchain_sto3g_{n}", chain, outdir)
    random_fixture(outdir / "random_n3.fcidump", 3, 20240601)


if __name__ == "__main__":
    main()
