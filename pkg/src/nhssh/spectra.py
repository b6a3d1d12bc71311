"""Dense eigendecomposition, edge-state detection and localization.

Non-Hermitian chains with a skin effect have eigenvectors whose amplitudes
span many orders of magnitude, which makes a plain nonsymmetric eigensolve
lose most of its accuracy.  The chain matrices couple sites pairwise with
``M[i, j] M[j, i] > 0``, so a diagonal similarity ``D M D^-1`` can make every
coupling symmetric in magnitude.  We solve that least-squares problem in log
space, diagonalize the balanced matrix, and map eigenvectors back.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from .errors import InvalidRequest, NotAChiralPair, SolverError


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    DELOCALIZED = "delocalized"


@dataclass(frozen=True)
class LocalizationConfig:
    """Thresholds for calling a state left or right localized."""

    left: float = 0.9
    right: float = 0.1
    pair_tol: float = 1e-6        # relative to the matrix norm
    unreliable_gap: float = 0.5
    decay_floor: float = 1e-10    # amplitudes below this fraction are not fitted


@dataclass
class Spectrum:
    """Eigenvalues sorted by (Re, Im) with optional unit-norm eigenvectors.

    ``vectors[:, k]`` belongs to ``values[k]``; ``residuals[k]`` is
    ``||M v - lambda v||`` (zero-filled when vectors were not requested).
    """

    values: np.ndarray
    vectors: np.ndarray | None
    residuals: np.ndarray
    norm: float

    @property
    def dim(self) -> int:
        return len(self.values)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["index", "re_E", "im_E", "residual"])
        for k, (E, res) in enumerate(zip(self.values, self.residuals)):
            wr.writerow([k, repr(float(E.real)), repr(float(E.imag)), repr(float(res))])
        return buf.getvalue()

    def vectors_csv(self, indices=None) -> str:
        if self.vectors is None:
            raise InvalidRequest("spectrum has no eigenvectors")
        idx = range(self.dim) if indices is None else indices
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["state", "site", "sublattice", "re", "im"])
        for k in idx:
            for site, a in enumerate(self.vectors[:, k]):
                wr.writerow([k, site, "AB"[site % 2], repr(float(a.real)), repr(float(a.imag))])
        return buf.getvalue()


def balancing_diagonal(M: np.ndarray) -> np.ndarray:
    """Diagonal ``d`` making ``|d_i M_ij / d_j| = |d_j M_ji / d_i|`` in least squares.

    Entries without a nonzero transpose partner are ignored; one gauge
    condition ``d_0 = 1`` per connected pattern keeps the system determined.
    """
    n = M.shape[0]
    A = np.abs(M)
    i, j = np.nonzero((A > 0) & (A.T > 0))
    upper = i < j
    i, j = i[upper], j[upper]
    if i.size == 0:
        return np.ones(n)
    rows = np.arange(i.size)
    G = np.zeros((i.size + 1, n))
    G[rows, i] = 1.0
    G[rows, j] = -1.0
    G[-1, 0] = 1.0
    rhs = np.zeros(i.size + 1)
    rhs[:-1] = 0.5 * np.log(A[j, i] / A[i, j])
    x = np.linalg.lstsq(G, rhs, rcond=None)[0]
    return np.exp(x - x.mean())


def eigendecompose(M: np.ndarray, want_vectors: bool = True, tol: float = 1e-8) -> Spectrum:
    """Full eigensystem of a general complex matrix.

    Parameters
    ----------
    M : (n, n) array
    want_vectors : bool
        Also return right eigenvectors, unit 2-norm, phase fixed so the
        largest-magnitude entry is real and positive.
    tol : float
        Each pair must satisfy ``||M v - lambda v|| <= tol * ||M||``.

    Raises
    ------
    SolverError
        If LAPACK fails or a residual exceeds the bound.
    """
    M = np.asarray(M, dtype=complex)
    if not np.all(np.isfinite(M)):
        raise SolverError("matrix has non-finite entries")
    n = M.shape[0]
    norm = float(np.linalg.norm(M, 2)) if n else 0.0
    if n == 0:
        return Spectrum(np.zeros(0, complex), np.zeros((0, 0), complex) if want_vectors else None,
                        np.zeros(0), 0.0)
    d = balancing_diagonal(M)
    B = M * d[:, None] / d[None, :]
    try:
        if want_vectors:
            vals, W = scipy.linalg.eig(B)
        else:
            vals = scipy.linalg.eigvals(B)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SolverError(f"eigensolver failed: {exc}") from None
    order = np.lexsort((vals.imag, vals.real))
    vals = vals[order]
    if not want_vectors:
        return Spectrum(vals, None, np.zeros(n), norm)
    V = W[:, order] / d[:, None]
    V /= np.linalg.norm(V, axis=0)
    res = np.linalg.norm(M @ V - V * vals[None, :], axis=0)
    bound = tol * max(norm, 1e-300)
    for k in np.nonzero(res > 1e-2 * bound)[0]:
        V[:, k], res[k] = _inverse_iteration(M, vals[k], V[:, k], norm)
    big = np.argmax(np.abs(V), axis=0)
    phase = V[big, np.arange(n)]
    V *= (np.abs(phase) / phase)[None, :]
    worst = float(res.max())
    if worst > bound:
        raise SolverError(f"eigenpair residual {worst:.2e} exceeds {tol:g} * ||M|| = {tol * norm:.2e}")
    return Spectrum(vals, V, res, norm)


def _inverse_iteration(M: np.ndarray, lam: complex, v: np.ndarray, norm: float,
                       steps: int = 3) -> tuple[np.ndarray, float]:
    # Undoing the balancing can inflate the residual of strongly skewed
    # vectors; a few solves with the shifted matrix restore it.
    n = M.shape[0]
    shift = lam + 1e-13 * max(norm, 1.0)
    lu = scipy.linalg.lu_factor(M - shift * np.eye(n), check_finite=False)
    best, best_res = v, float(np.linalg.norm(M @ v - lam * v))
    x = v
    for _ in range(steps):
        x = scipy.linalg.lu_solve(lu, x, check_finite=False)
        if not np.all(np.isfinite(x)):
            break
        x = x / np.linalg.norm(x)
        r = float(np.linalg.norm(M @ x - lam * x))
        if r < best_res:
            best, best_res = x, r
    return best, best_res


def reality_check(spec: Spectrum, tol: float = 1e-7) -> bool:
    """True if ``max|Im E| <= tol * max(1, max|E|)``."""
    if spec.dim == 0:
        return True
    scale = max(1.0, float(np.abs(spec.values).max()))
    return bool(np.abs(spec.values.imag).max() <= tol * scale)


def matching_distance(a, b) -> tuple[float, float]:
    """Max and mean distance between two eigenvalue multisets, relative to ``max|b|``.

    Elements are paired by the assignment minimizing the total distance.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise InvalidRequest(f"multisets differ in size: {a.size} vs {b.size}")
    if a.size == 0:
        return 0.0, 0.0
    D = np.abs(a[:, None] - b[None, :])
    i, j = linear_sum_assignment(D)
    scale = max(float(np.abs(b).max()), 1e-300)
    return float(D[i, j].max()) / scale, float(D[i, j].mean()) / scale


# ---------------------------------------------------------------- localization

def _cells(dim: int) -> np.ndarray:
    return np.arange(dim) // 2 + 1


def classify_localization(v: np.ndarray, config: LocalizationConfig = LocalizationConfig()):
    """Boundary side and weights of a site-amplitude vector.

    Returns
    -------
    side : Side
    weight_left : float
        Probability on cells ``j <= N/2`` with ``N = dim // 2``.
    weight_A : float
        Probability on A sites.
    """
    v = np.asarray(v)
    p = np.abs(v) ** 2
    p = p / p.sum()
    n_cells = len(v) // 2
    weight_left = float(p[_cells(len(v)) <= n_cells / 2].sum())
    weight_A = float(p[0::2].sum())
    if weight_left >= config.left:
        side = Side.LEFT
    elif weight_left <= config.right:
        side = Side.RIGHT
    else:
        side = Side.DELOCALIZED
    return side, weight_left, weight_A


def decay_factor(v: np.ndarray, floor: float = 1e-10) -> float:
    """Per-cell growth factor ``|s|`` of a localized vector.

    A straight-line fit of ``log|v|`` against the cell index on the
    sublattice carrying most of the weight.  Values above 1 grow to the
    right, below 1 decay to the right.
    """
    v = np.asarray(v)
    a, b = np.abs(v[0::2]), np.abs(v[1::2])
    amp = a if (a ** 2).sum() >= (b ** 2).sum() else b
    cells = np.arange(1, len(amp) + 1)
    ok = amp >= floor * amp.max()
    if ok.sum() < 2:
        return float("nan")
    slope = np.polyfit(cells[ok], np.log(amp[ok]), 1)[0]
    return float(np.exp(slope))


@dataclass(frozen=True)
class ChiralPair:
    """Two states with ``E_i = -E_j`` and their single-sublattice combinations."""

    i: int
    j: int
    difference: np.ndarray   # B-sublattice combination
    sum: np.ndarray          # A-sublattice combination


def chiral_recombine(spec: Spectrum, pair: tuple[int, int], tol: float = 1e-6) -> tuple[np.ndarray, np.ndarray]:
    """Normalized ``psi_i - psi_j`` and ``psi_i + psi_j``.

    The relative weight and phase of the two eigenvectors are fixed so that
    each combination lives on one sublattice as far as the pair allows:
    within their span we take the eigenvectors of the A-sublattice projector
    (a 2x2 generalized eigenproblem).  The first return value is the
    B-dominant combination, the second the A-dominant one.

    Raises
    ------
    NotAChiralPair
        If ``|E_i + E_j| > tol * ||M||`` or ``i == j``.
    """
    i, j = pair
    if spec.vectors is None:
        raise InvalidRequest("spectrum has no eigenvectors")
    Ei, Ej = spec.values[i], spec.values[j]
    if i == j or abs(Ei + Ej) > tol * spec.norm:
        raise NotAChiralPair(f"E[{i}] + E[{j}] = {Ei + Ej:.3e} exceeds {tol:g} * ||M||")
    V = spec.vectors[:, [i, j]]
    maskA = np.arange(V.shape[0]) % 2 == 0
    VA = V[maskA]
    gram = V.conj().T @ V
    projA = VA.conj().T @ VA
    try:
        _, X = scipy.linalg.eigh(projA, gram)
    except np.linalg.LinAlgError:
        # the two vectors are parallel: fall back on the raw pair
        X = np.array([[1, 1], [-1, 1]], dtype=complex)
    combos = V @ X
    combos /= np.linalg.norm(combos, axis=0)
    # eigh sorts ascending: column 0 is B-dominant, column 1 A-dominant
    return _fix_phase(combos[:, 0]), _fix_phase(combos[:, 1])


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = np.argmax(np.abs(v))
    return v * (abs(v[k]) / v[k])


@dataclass
class EdgeState:
    energy: complex
    side: Side
    weight_left: float
    sublattice_weight_A: float
    decay_factor: float
    vector: np.ndarray = field(repr=False)

    @property
    def sublattice_weight_B(self) -> float:
        return 1.0 - self.sublattice_weight_A


@dataclass
class EdgeStateReport:
    count: int
    states: list[EdgeState]
    gap_ratio: float
    unreliable: bool
    pairs: list[tuple[int, int]]
    indices: list[int]

    @property
    def n_left(self) -> int:
        return sum(s.side is Side.LEFT for s in self.states)

    @property
    def n_right(self) -> int:
        return sum(s.side is Side.RIGHT for s in self.states)


def detect_edge_states(spec: Spectrum, expected: int,
                       config: LocalizationConfig = LocalizationConfig()) -> EdgeStateReport:
    """Take the ``expected`` smallest-|E| states and classify them.

    States are paired with their nearest ``-E`` partner among the selected
    ones and classified after chiral recombination; an unpaired state (the
    exact zero mode of an odd chain) is classified as is.
    """
    if expected < 0 or expected > spec.dim:
        raise InvalidRequest(f"expected must lie in [0, {spec.dim}], got {expected}")
    if expected == 0:
        return EdgeStateReport(0, [], 0.0, False, [], [])
    if spec.vectors is None:
        raise InvalidRequest("edge detection needs eigenvectors")
    by_size = np.argsort(np.abs(spec.values), kind="stable")
    chosen = [int(k) for k in by_size[:expected]]
    mags = np.abs(spec.values[by_size])
    if expected < spec.dim and mags[expected] > 0:
        gap_ratio = float(mags[expected - 1] / mags[expected])
    else:
        gap_ratio = 0.0

    pairs: list[tuple[int, int]] = []
    free = list(chosen)
    # greedy: the best-matched pairs first
    cand = sorted(((abs(spec.values[a] + spec.values[b]), a, b)
                   for x, a in enumerate(chosen) for b in chosen[x + 1:]))
    for dist, a, b in cand:
        if a in free and b in free and dist <= config.pair_tol * spec.norm:
            pairs.append((a, b))
            free.remove(a)
            free.remove(b)

    states: list[EdgeState] = []
    for a, b in pairs:
        diff, summ = chiral_recombine(spec, (a, b), config.pair_tol)
        for E, v in ((spec.values[a], summ), (spec.values[b], diff)):
            states.append(_edge_state(E, v, config))
    for a in free:
        states.append(_edge_state(spec.values[a], spec.vectors[:, a], config))
    return EdgeStateReport(len(states), states, gap_ratio,
                           gap_ratio > config.unreliable_gap, pairs, chosen)


def _edge_state(E, v, config: LocalizationConfig) -> EdgeState:
    side, wl, wa = classify_localization(v, config)
    return EdgeState(complex(E), side, wl, wa, decay_factor(v, config.decay_floor), v)
