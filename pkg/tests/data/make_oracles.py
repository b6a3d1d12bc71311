"""Regenerate ``oracle_spectra.json``: high-precision open-chain spectra.

Independent of the package: the chain matrix is assembled here from the
equations of motion and diagonalized with mpmath at 50 digits, so that
double-precision skin-effect conditioning cannot leak into the reference.

    python tests/data/make_oracles.py
"""
import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 50

CASES = [
    # name, kind, amplitudes (L, R per bond, ordered 0, 1, third), parity, solver
    ("fig1", "ssh", ("1", "4", "3", "3"), "even", "ssh"),
    ("ssh_trivial", "ssh", ("3", "3", "1", "1"), "even", "ssh"),
    ("fig2", "ext1", ("1/2", "1/8", "2", "2", "4", "1"), "even", "qh_type1"),
    ("fig3", "ext1", ("1/2", "8", "5", "5", "1/4", "4"), "even", "qh_type1"),
    ("fig7", "ext2", ("4", "4", "1", "1/4", "10", "5/2"), "even", "qh_type2"),
    ("fig7_swapped", "ext2", ("4", "4", "10", "5/2", "1", "1/4"), "even", "qh_type2"),
    ("fig8", "ext1", ("1/2", "1/8", "2", "2", "4", "1"), "odd", "qh_odd"),
    ("fig7_odd", "ext2", ("4", "4", "1", "1/4", "10", "5/2"), "odd", "qh_odd"),
    ("fig1_odd", "ssh", ("1", "4", "3", "3"), "odd", "qh_odd"),
    ("fig4", "ext1", ("9/2", "2", "2", "2", "1", "9/4"), "even", "general_type1"),
    ("fig5", "ext1", ("1", "1", "10/3", "10/3", "3/4", "3"), "even", "general_type1"),
    ("fig6", "ext1", ("1", "1", "3", "3", "7/2", "4"), "even", "general_type1"),
    ("fig9", "ext2", ("2", "2", "9/2", "2", "1", "9/4"), "even", "general_type2"),
    ("fig10", "ext2", ("3", "3", "1", "1", "7/2", "4"), "even", "general_type2"),
    ("appC1", "ext2", ("1.1+2/3", "1.1-2/3", "1", "1", "1/5", "1/5"), "even", "general_type2"),
]
SIZES = (2, 3, 5, 10, 20)
BONDS = {"ssh": (0, 1), "ext1": (0, 1, 2), "ext2": (0, 1, -1)}


def value(text: str):
    # "a+b/c" style literals, evaluated exactly where possible
    return mp.mpf(eval(text.replace("/", "*mp.mpf(1)/"), {"mp": mp}))


def matrix(kind, amps, n_cells, odd):
    n_a = n_cells + odd
    dim = n_a + n_cells
    M = mp.zeros(dim, dim)
    for b, (L, R) in zip(BONDS[kind], zip(amps[0::2], amps[1::2])):
        # A_k <- B_j with k = j + b; the intra-cell and t_{-1} bonds put tL in
        # the A row, the others put tR there
        in_a, in_b = (L, R) if b in (0, -1) else (R, L)
        for j in range(1, n_cells + 1):
            k = j + b
            if 1 <= k <= n_a:
                M[2 * (k - 1), 2 * (j - 1) + 1] += in_a
                M[2 * (j - 1) + 1, 2 * (k - 1)] += in_b
    return M


def main():
    out = {}
    for name, kind, amps, parity, solver in CASES:
        vals = [value(a) for a in amps]
        for N in SIZES:
            E = mp.eig(matrix(kind, vals, N, parity == "odd"), left=False, right=False)
            out[f"{name}/{N}"] = {
                "kind": kind, "amplitudes": [float(v) for v in vals], "parity": parity,
                "solver": solver, "n_cells": N,
                "energies": [[float(mp.re(e)), float(mp.im(e))] for e in E],
            }
            print(name, N, flush=True)
    path = Path(__file__).with_name("oracle_spectra.json")
    path.write_text(json.dumps(out, indent=1) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
