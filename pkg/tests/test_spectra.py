import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nhssh import (ChainSpec, HoppingSet, InvalidRequest, NotAChiralPair, Side, Spectrum,
                   build_obc, chiral_recombine, classify_localization, detect_edge_states,
                   eigendecompose, from_effective, matching_distance, reality_check)
from nhssh.spectra import LocalizationConfig, balancing_diagonal, decay_factor

FIG1 = HoppingSet.from_tuple("ssh", (1, 4, 3, 3))
FIG2 = HoppingSet.from_tuple("ext1", (1 / 2, 1 / 8, 2, 2, 4, 1))
FIG3 = HoppingSet.from_tuple("ext1", (1 / 2, 8, 5, 5, 1 / 4, 4))
FIG5 = HoppingSet.from_tuple("ext1", (1, 1, 10 / 3, 10 / 3, 3 / 4, 3))


def spectrum(h, N=20, parity="even"):
    return eigendecompose(build_obc(h, ChainSpec(N, parity)))


def test_swap_matrix():
    s = eigendecompose(np.array([[0, 1], [1, 0]]))
    assert s.values.real == pytest.approx([-1, 1])
    for k in range(2):
        v = s.vectors[:, k]
        assert np.linalg.norm(v) == pytest.approx(1)
        big = v[np.argmax(np.abs(v))]
        assert big.imag == 0 and big.real > 0


def test_values_sorted_and_residuals_bounded():
    for h in (FIG1, FIG2, FIG5):
        s = spectrum(h)
        keys = list(zip(s.values.real, s.values.imag))
        assert keys == sorted(keys)
        M = build_obc(h, 20)
        res = np.linalg.norm(M @ s.vectors - s.vectors * s.values, axis=0)
        assert res.max() <= 1e-8 * np.linalg.norm(M, 2)
        assert s.residuals == pytest.approx(res, abs=1e-14 * np.linalg.norm(M, 2))


def test_balancing_equalizes_couplings():
    M = build_obc(FIG2, 6).real
    d = balancing_diagonal(M)
    B = M * d[:, None] / d[None, :]
    # the model has one skin factor, so balancing is exact
    assert np.allclose(np.abs(B), np.abs(B.T), rtol=1e-10)


def test_fig1_spectrum_real_with_two_zeros():
    s = spectrum(FIG1)
    assert reality_check(s, 1e-7)
    assert np.sum(np.abs(s.values) < 1e-3) == 2


def test_fig5_edge_pair_imaginary():
    s = spectrum(FIG5)
    edge = s.values[np.argsort(np.abs(s.values))[:2]]
    assert np.abs(edge).max() < 1e-3
    # real parts are pure roundoff on the scale of the matrix norm
    assert np.abs(edge.real).max() < 1e-13 * s.norm
    assert not reality_check(s, 1e-7)


def test_reality_check_empty():
    assert reality_check(Spectrum(np.zeros(0, complex), None, np.zeros(0), 0.0))


def test_detect_fig1_right():
    rep = detect_edge_states(spectrum(FIG1), 2)
    assert rep.count == 2 and len(rep.states) == 2
    assert [s.side for s in rep.states] == [Side.RIGHT, Side.RIGHT]
    assert not rep.unreliable


def test_detect_fig2_three_left_one_right():
    rep = detect_edge_states(spectrum(FIG2), 4)
    assert (rep.n_left, rep.n_right) == (3, 1)
    assert len(rep.pairs) == 2


def test_detect_zero_and_too_many():
    s = spectrum(FIG1, 3)
    rep = detect_edge_states(s, 0)
    assert rep.count == 0 and rep.gap_ratio == 0
    with pytest.raises(InvalidRequest):
        detect_edge_states(s, 7)
    with pytest.raises(InvalidRequest):
        detect_edge_states(s, -1)


def test_weights_sum_to_one():
    for st_ in detect_edge_states(spectrum(FIG2), 4).states:
        assert st_.sublattice_weight_A + st_.sublattice_weight_B == pytest.approx(1)


def test_fig1_recombination_sublattices():
    s = spectrum(FIG1)
    i, j = np.argsort(np.abs(s.values))[:2]
    b_dom, a_dom = chiral_recombine(s, (i, j))
    for v, want_A in ((a_dom, 1.0), (b_dom, 0.0)):
        side, wl, wa = classify_localization(v)
        assert side is Side.RIGHT
        assert wa == pytest.approx(want_A, abs=1e-4)


def test_fig3_both_right_split_sublattice():
    s = spectrum(FIG3)
    i, j = np.argsort(np.abs(s.values))[:2]
    out = [classify_localization(v) for v in chiral_recombine(s, (i, j))]
    assert all(o[0] is Side.RIGHT for o in out)
    assert sorted(round(o[2], 4) for o in out) == [0.0, 1.0]


def test_not_a_chiral_pair():
    s = spectrum(FIG1, 4)
    with pytest.raises(NotAChiralPair):
        chiral_recombine(s, (0, 1))


def test_degenerate_zero_pair_stays_in_eigenspace():
    h = HoppingSet.from_tuple("ssh", (0.1, 0.1, 3, 3))
    M = build_obc(h, 20)
    s = eigendecompose(M)
    i, j = np.argsort(np.abs(s.values))[:2]
    for v in chiral_recombine(s, (i, j)):
        assert np.linalg.norm(M @ v) <= 1e-8 * np.linalg.norm(M, 2)


def test_classify_examples():
    v = np.zeros(40)
    v[0] = 1
    assert classify_localization(v) == (Side.LEFT, 1.0, 1.0)
    u = np.ones(40) / np.sqrt(40)
    side, wl, _ = classify_localization(u)
    assert side is Side.DELOCALIZED and wl == pytest.approx(0.5)
    g = np.zeros(40)
    g[0::2] = (-2 / 3) ** np.arange(20)
    side, wl, wa = classify_localization(g / np.linalg.norm(g))
    # the first ten cells of a 20-term series with ratio q carry 1 / (1 + q**10)
    assert side is Side.LEFT and wl == pytest.approx(1 / (1 + (4 / 9) ** 10), rel=1e-12) and wa == 1.0


def test_classify_thresholds_configurable():
    v = np.zeros(40)
    v[0], v[39] = np.sqrt(0.85), np.sqrt(0.15)
    assert classify_localization(v)[0] is Side.DELOCALIZED
    assert classify_localization(v, LocalizationConfig(left=0.8))[0] is Side.LEFT


def test_ssh_decay_factors():
    rep = detect_edge_states(spectrum(FIG1), 2)
    targets = (4 / 3, 3.0)   # |t0R / t1L| and |t1R / t0L|
    for st_ in rep.states:
        assert min(abs(st_.decay_factor / t - 1) for t in targets) < 0.05


def test_decay_factor_geometric():
    v = np.zeros(30)
    v[0::2] = 0.7 ** np.arange(15)
    assert decay_factor(v) == pytest.approx(0.7, rel=1e-12)


def test_csv_exports():
    s = eigendecompose(np.array([[0, 2], [2, 0]]))
    lines = s.to_csv().splitlines()
    assert lines[0] == "index,re_E,im_E,residual"
    assert lines[1].startswith("0,-2.0,")
    vec = s.vectors_csv([1]).splitlines()
    assert vec[0] == "state,site,sublattice,re,im"
    assert [r.split(",")[2] for r in vec[1:]] == ["A", "B"]


def test_matching_distance():
    a = np.array([1, 2, 3j])
    assert matching_distance(a, a[::-1]) == (0.0, 0.0)
    worst, _ = matching_distance(a + 3e-3, a)
    assert worst == pytest.approx(1e-3)
    with pytest.raises(InvalidRequest):
        matching_distance(a, a[:2])


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["ssh", "ext1", "ext2"]), st.floats(0.3, 3), st.floats(0.3, 3),
       st.floats(0.3, 3), st.floats(0.5, 2), st.integers(2, 60))
def test_quasi_hermitian_spectra_are_real(kind, a, b, c, r, N):
    tb = (a, b) if kind == "ssh" else (a, b, c)
    s = eigendecompose(build_obc(from_effective(kind, tb, r), N), want_vectors=False)
    assert reality_check(s, 1e-7)
