"""End-to-end acceptance checks, one test per criterion.

Run under pytest for a pass/fail line per criterion in the terminal
summary, or directly with ``python tests/test_acceptance.py``.
"""
import json
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from nhssh import (PRESETS, ChainSpec, CriticalPoint, GaplessFactor, HoppingSet, Kind, Side,
                   bloch_factors, build_obc, chebyshev_U, chiral_recombine, classify_localization,
                   detect_edge_states, duality_map, effective_params, eigendecompose,
                   expected_edge_count, from_effective, general_type1_char_spectrum,
                   general_type2_char_spectrum, is_quasi_hermitian, matching_distance, modified_winding, pbc_spectrum,
                   qh_odd_char_spectrum, qh_type1_char_spectrum, qh_type2_char_spectrum,
                   reality_check, scaling_transform, spectral_windings, ssh_char_spectrum,
                   topology_report, winding_on_circle)
from nhssh.topology import _laurent_winding_by_roots, _winding_by_argument

DATA = Path(__file__).parent / "data"
SIZES = (2, 3, 5, 10, 20)


def preset_spectrum(pid, want_vectors=True):
    p = PRESETS[pid]
    return eigendecompose(build_obc(p.hopping, p.chain), want_vectors=want_vectors)


def random_ext1(rng, positive_products=True):
    vals = []
    for _ in range(3):
        s = rng.choice([-1.0, 1.0]) if positive_products else 1.0
        vals += list(s * np.exp(rng.uniform(-1.5, 1.5, 2)))
    return HoppingSet.from_tuple("ext1", vals)


def random_set(rng):
    kind = rng.choice(["ssh", "ext1", "ext2"])
    n = 2 if kind == "ssh" else 3
    vals = []
    for _ in range(n):
        vals += list(rng.choice([-1.0, 1.0]) * np.exp(rng.uniform(-1.5, 1.5, 2)))
    return HoppingSet.from_tuple(kind, vals)


def test_criterion_01_quasi_hermitian_reality():
    for pid in ("fig1", "fig2", "fig3", "fig7", "fig8"):
        t = time.perf_counter()
        s = preset_spectrum(pid, want_vectors=False)
        assert np.abs(s.values.imag).max() <= 1e-7 * np.abs(s.values).max(), pid
        assert reality_check(s, 1e-7)
        assert time.perf_counter() - t < 5, pid


def _cases():
    """Parameter sets exercising each solver, with the reference chain."""
    fig = {k: PRESETS[k].hopping for k in PRESETS}
    return [
        ("ssh", fig["fig1"], "even", lambda h, N: ssh_char_spectrum(effective_params(h), N), 1e-6),
        ("qh_type1", fig["fig2"], "even",
         lambda h, N: qh_type1_char_spectrum(effective_params(h), N), 1e-6),
        ("qh_type1", fig["fig3"], "even",
         lambda h, N: qh_type1_char_spectrum(effective_params(h), N), 1e-6),
        ("qh_type2", fig["fig7"], "even",
         lambda h, N: qh_type2_char_spectrum(effective_params(h), N), 1e-6),
        ("qh_odd", fig["fig2"], "odd", lambda h, N: qh_odd_char_spectrum(effective_params(h), N), 1e-6),
        ("qh_odd", fig["fig7"], "odd", lambda h, N: qh_odd_char_spectrum(effective_params(h), N), 1e-6),
        ("general_type1", fig["fig4"], "even", general_type1_char_spectrum, 1e-5),
        ("general_type1", fig["fig5"], "even", general_type1_char_spectrum, 1e-5),
        ("general_type1", fig["fig6"], "even", general_type1_char_spectrum, 1e-5),
        ("general_type2", fig["fig9"], "even", general_type2_char_spectrum, 1e-5),
        ("general_type2", fig["fig10"], "even", general_type2_char_spectrum, 1e-5),
        ("general_type2", fig["appC1"], "even", general_type2_char_spectrum, 1e-5),
    ]


def test_criterion_02_characteristic_equation_oracle():
    t = time.perf_counter()
    with open(DATA / "oracle_spectra.json", encoding="utf-8") as fh:
        oracle = json.load(fh)
    by_amps = {(c["kind"], tuple(c["amplitudes"]), c["parity"], c["n_cells"]):
               np.array([complex(a, b) for a, b in c["energies"]]) for c in oracle.values()}
    solvers = set()
    for name, h, parity, solve, tol in _cases():
        for N in SIZES:
            E = solve(h, N).energies
            dense = eigendecompose(build_obc(h, ChainSpec(N, parity)), want_vectors=False).values
            assert matching_distance(E, dense)[0] <= tol, (name, N)
            ref = by_amps.get((h.kind.value, h.as_tuple(), parity, N))
            if ref is not None:
                # 50-digit diagonalization frozen in tests/data
                assert matching_distance(E, ref)[0] <= tol, (name, N)
        solvers.add(name)
    assert solvers == {"ssh", "qh_type1", "qh_type2", "qh_odd", "general_type1", "general_type2"}
    assert time.perf_counter() - t < 60


TOPOLOGY = {
    "fig1": (1, 0, -1), "fig2": (2, 2, -1), "fig3": (1, 0, -1), "fig5": (1, 1, -2),
    "fig6": (2, 2, -2), "fig7": (-1, 0, 1), "fig9": (1, 1, -1), "fig10": (-1, -1, 1),
    "appC1": (1, 1, 0), "appC2": (1, 0, -1), "appC3": (1, 1, -1), "appC4": (1, 1, -1),
}


def test_criterion_03_preset_topology_table():
    for pid, want in TOPOLOGY.items():
        rep = topology_report(PRESETS[pid].hopping)
        assert (rep.nu_bar, rep.nu_E_L, rep.nu_E_R) == want, pid
    rep = topology_report(PRESETS["fig4"].hopping)
    assert rep.nu_bar == 0 and rep.nu_E == 0


EDGES = {"fig1": (0, 2), "fig2": (3, 1), "fig3": (0, 2), "fig5": (1, 1), "fig6": (2, 2),
         "fig7": (2, 0), "fig8": (3, 0), "fig9": (1, 1), "fig10": (1, 1)}


def test_criterion_04_edge_state_counts():
    for pid, (n_left, n_right) in EDGES.items():
        p = PRESETS[pid]
        s = preset_spectrum(pid)
        count = expected_edge_count(topology_report(p.hopping, p.parity))
        assert count == n_left + n_right, pid
        rep = detect_edge_states(s, count)
        assert (rep.n_left, rep.n_right) == (n_left, n_right), pid
        if pid == "fig8":
            scale = np.abs(s.values).max()
            assert np.sum(np.abs(s.values) <= 1e-12 * scale) == 1
            assert all(st.side is Side.LEFT for st in rep.states)


def test_criterion_05_sublattice_purity():
    for pid in ("fig1", "fig2", "fig3", "fig7", "fig8"):
        p = PRESETS[pid]
        s = preset_spectrum(pid)
        rep = detect_edge_states(s, expected_edge_count(topology_report(p.hopping, p.parity)))
        assert rep.pairs, pid
        for pair in rep.pairs:
            for v in chiral_recombine(s, pair):
                wa = classify_localization(v)[2]
                assert max(wa, 1 - wa) >= 0.9999, (pid, pair)
        for st in rep.states:
            assert max(st.sublattice_weight_A, 1 - st.sublattice_weight_A) >= 0.9999, pid


def test_criterion_06_scaling_symmetry():
    for pid in ("fig2", "fig5"):
        h = PRESETS[pid].hopping
        base = eigendecompose(build_obc(h, 20), want_vectors=False).values
        for rt in (0.5, 2.0):
            out = eigendecompose(build_obc(scaling_transform(h, rt), 20), want_vectors=False).values
            assert matching_distance(out, base)[0] <= 1e-8, (pid, rt)


def test_criterion_07_duality():
    rng = np.random.default_rng(2024)
    done = 0
    while done < 50:
        h = random_ext1(rng)
        try:
            nb, (L, R) = modified_winding(effective_params(h)), spectral_windings(h)
        except (CriticalPoint, GaplessFactor):
            continue
        d = duality_map(h)
        dL, dR = spectral_windings(d)
        assert dL + dR == L + R
        assert modified_winding(effective_params(d)) == 1 - nb
        for N in (5, 12):
            assert matching_distance(pbc_spectrum(d, N), pbc_spectrum(h, N))[0] <= 1e-9
        done += 1


def _both_methods(h):
    bf = bloch_factors(h)
    for f in (bf.left, bf.right):
        by_roots = _laurent_winding_by_roots(f)
        by_phase = _winding_by_argument(f, 1.0, 4096)
        assert by_roots == by_phase
    e = effective_params(h)
    nu_bar = modified_winding(e)
    hermitian = from_effective(h.kind, e.as_tuple(), 1.0)
    assert nu_bar == winding_on_circle(hermitian, 1.0, factor="left")
    if is_quasi_hermitian(h):
        # the same number read off the original chain on the circle |z| = r
        assert nu_bar == winding_on_circle(h, e.r, factor="left")


def test_criterion_08_winding_methods_agree():
    for p in PRESETS.values():
        _both_methods(p.hopping)
    rng = np.random.default_rng(99)
    done = 0
    while done < 1000:
        h = random_set(rng)
        try:
            _both_methods(h)
        except (CriticalPoint, GaplessFactor):
            continue
        done += 1


def test_criterion_09_property_suite():
    rng = np.random.default_rng(3)
    for _ in range(40):
        h = random_set(rng)
        N = int(rng.integers(2, 15))
        parity = "odd" if rng.random() < 0.3 else "even"
        E = eigendecompose(build_obc(h, ChainSpec(N, parity)), want_vectors=False).values
        assert matching_distance(E, -E)[0] < 1e-8
        herm = HoppingSet(h.kind, {b: (L, L) for b, (L, _) in h.t.items()})
        E = eigendecompose(build_obc(herm, N), want_vectors=False).values
        assert np.abs(E.imag).max() <= 1e-10 * np.abs(E).max()
        try:
            L, R = spectral_windings(h)
        except GaplessFactor:
            continue
        bf = bloch_factors(h)
        det_winding = _winding_by_argument(lambda z: bf.left(z) * bf.right(z), 1.0, 4096)
        assert det_winding == L + R
        assert winding_on_circle(h, 1.0) == L + R
    th = np.linspace(0.01, np.pi - 0.01, 101)
    for n in range(201):
        assert np.abs(chebyshev_U(n, np.cos(th)) * np.sin(th) - np.sin((n + 1) * th)).max() <= 1e-12
    fig2, fig7 = PRESETS["fig2"].hopping, PRESETS["fig7"].hopping
    fig5, fig9 = PRESETS["fig5"].hopping, PRESETS["fig9"].hopping
    for N in SIZES:
        for cs in (qh_type1_char_spectrum(effective_params(fig2), N),
                   qh_type2_char_spectrum(effective_params(fig7), N)):
            assert (cs.degree, cs.quotient_degree) == (2 * N + 2, 2 * N)
        for cs in (general_type1_char_spectrum(fig5, N), general_type2_char_spectrum(fig9, N)):
            assert (cs.degree, cs.quotient_degree) == (3 * N + 4, 3 * N)
    # a quasi-Hermitian chain maps to a Hermitian one, so its spectrum is real
    for _ in range(10):
        kind = rng.choice(["ssh", "ext1", "ext2"])
        tb = rng.uniform(0.3, 3, 2 if kind == "ssh" else 3)
        s = eigendecompose(build_obc(from_effective(kind, tb, rng.uniform(0.5, 2)), 20),
                           want_vectors=False)
        assert reality_check(s, 1e-7)
    assert Kind("ext2").bonds == (0, 1, -1)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
