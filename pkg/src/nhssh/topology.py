"""Winding numbers and edge-state location tables.

Three integers characterize a gapped chain:

``nu_bar``
    Modified winding number of the Hermitian model built from the
    geometric-mean amplitudes; it fixes how many edge states exist.
``nu_E_L``, ``nu_E_R``
    Windings of the two Bloch factors of ``E(p)**2`` around the origin;
    together they decide on which boundary the edge states sit.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import CriticalPoint, GaplessFactor, NotApplicable, NumericalInconsistency
from .hamiltonian import BlochFactors, Laurent, _inverted_ext2, bloch_factors
from .model import EffectiveParams, HoppingSet, Kind, Parity, effective_params

CRITICAL_TOL = 1e-9
DEFAULT_RESOLUTION = 4096
MAX_RESOLUTION = 1 << 20


# ---------------------------------------------------------------- nu_bar

def _disk_count(coef_ascending, radius: float = 1.0, tol: float = CRITICAL_TOL, what="root") -> int:
    roots = np.polynomial.polynomial.polyroots(np.asarray(coef_ascending, dtype=complex))
    mags = np.abs(roots) / radius
    if np.any(np.abs(mags - 1) <= tol):
        raise CriticalPoint(f"a {what} lies on the circle |z| = {radius:g}")
    return int(np.sum(mags < 1))


def modified_winding(eff: EffectiveParams) -> int:
    """Winding of the Hermitian Bloch function with amplitudes ``tbar``.

    SSH: 1 if ``t1 > t0``.  Type 1: zeros of ``t0 + t1 s + t2 s**2`` in the
    unit disk.  Type 2: zeros of ``t-1 + t0 z + t1 z**2`` in the unit disk,
    minus one for the simple pole of the Laurent factor.

    Raises
    ------
    CriticalPoint
        A zero within ``1e-9`` of the unit circle (a phase boundary).
    """
    t = eff.tbar
    if eff.kind is Kind.SSH:
        return _disk_count([t[0], t[1]])
    if eff.kind is Kind.EXT1:
        return _disk_count([t[0], t[1], t[2]])
    return _disk_count([t[-1], t[0], t[1]]) - 1


def inequality_phase(eff: EffectiveParams) -> int:
    """``nu_bar`` from the closed-form phase inequalities (no root finding).

    The inequalities assume positive amplitudes.  Flipping the middle
    coefficient of the quadratic only mirrors its roots, so only the sign of
    the product of the outer two amplitudes matters; when it is negative the
    inequalities do not apply.
    """
    t = {b: abs(v) for b, v in eff.tbar.items()}
    if eff.kind is Kind.SSH:
        return int(t[1] > t[0])
    outer = (0, 2) if eff.kind is Kind.EXT1 else (1, -1)
    if eff.tbar[outer[0]] * eff.tbar[outer[1]] < 0:
        raise NotApplicable("the phase inequalities assume outer amplitudes of equal sign")
    if eff.kind is Kind.EXT1:
        if t[2] + t[0] < t[1]:
            return 1
        return 2 if t[2] > t[0] else 0
    if t[1] + t[-1] < t[0]:
        return 0
    return 1 if t[1] > t[-1] else -1


# ---------------------------------------------------------------- spectral windings

def _factor(bf: BlochFactors, which: str) -> Laurent:
    return bf.left if which == "left" else bf.right


def _laurent_winding_by_roots(f: Laurent, radius: float = 1.0) -> int:
    # zeros inside minus the order of the pole at the origin
    return _disk_count(f.coef, radius, what="factor zero") + f.kmin


def _accumulated_phase(values: np.ndarray) -> float:
    steps = np.angle(np.roll(values, -1) / values)
    return float(steps.sum())


def _winding_by_argument(fn, radius: float, resolution: int) -> int:
    """Winding of ``fn`` on ``|z| = radius`` by summing phase increments.

    The grid doubles while the function dips below ``1e-6`` of its maximum
    or any single increment exceeds a quarter turn.
    """
    n = resolution
    while True:
        p = -np.pi + 2 * np.pi * np.arange(n) / n
        vals = fn(radius * np.exp(1j * p))
        mag = np.abs(vals)
        if mag.min() < 1e-12 * max(1.0, mag.max()):
            raise GaplessFactor(f"factor vanishes to {mag.min():.1e} on the contour")
        steps = np.abs(np.angle(np.roll(vals, -1) / vals))
        if (mag.min() >= 1e-6 * mag.max() and steps.max() < np.pi / 2) or n >= MAX_RESOLUTION:
            break
        n *= 2
    total = _accumulated_phase(vals) / (2 * np.pi)
    k = round(total)
    if abs(total - k) > 1e-3:
        raise NumericalInconsistency(f"accumulated phase {total:.6f} turns is not an integer")
    return int(k)


def spectral_windings(h: HoppingSet, resolution: int = DEFAULT_RESOLUTION) -> tuple[int, int]:
    """``(nu_E_L, nu_E_R)``: windings of the two Bloch factors on the unit circle.

    Each is computed by phase accumulation over the Brillouin zone and by
    counting zeros inside the unit disk; the two must agree.

    Raises
    ------
    GaplessFactor
        A factor vanishes on the Brillouin zone.
    NumericalInconsistency
        The two methods disagree.
    """
    if resolution < 256:
        raise ValueError("resolution must be at least 256")
    bf = bloch_factors(h)
    out = []
    for which in ("left", "right"):
        f = _factor(bf, which)
        try:
            by_roots = _laurent_winding_by_roots(f)
        except CriticalPoint as exc:
            raise GaplessFactor(str(exc)) from None
        by_phase = _winding_by_argument(f, 1.0, resolution)
        if by_roots != by_phase:
            raise NumericalInconsistency(
                f"{which} factor: phase accumulation gives {by_phase}, root count gives {by_roots}")
        out.append(by_roots)
    return out[0], out[1]


def winding_on_circle(h: HoppingSet, radius: float, resolution: int = DEFAULT_RESOLUTION,
                      factor: str = "det") -> int:
    """Winding on the circle ``|z| = radius`` of ``f_L f_R`` or of one factor.

    ``factor`` is ``"det"`` (the product), ``"left"`` or ``"right"``.  At
    radius 1 the product gives ``nu_E``.  For a quasi-Hermitian model the
    left factor on the circle of radius ``r`` is proportional to the
    Hermitian Bloch function, so it returns ``nu_bar`` there.
    """
    if not radius > 0:
        raise ValueError("radius must be positive")
    bf = bloch_factors(h)
    if factor == "det":
        fn = lambda z: bf.left(z) * bf.right(z)
        parts = [bf.left, bf.right]
    elif factor in ("left", "right"):
        fn = _factor(bf, factor)
        parts = [fn]
    else:
        raise ValueError(f"factor must be 'det', 'left' or 'right', got {factor!r}")
    by_roots = sum(_laurent_winding_by_roots(f, radius) for f in parts)
    try:
        by_phase = _winding_by_argument(fn, radius, resolution)
    except GaplessFactor as exc:
        raise CriticalPoint(str(exc)) from None
    if by_roots != by_phase:
        raise NumericalInconsistency(
            f"circle winding: phase accumulation gives {by_phase}, root count gives {by_roots}")
    return by_roots


# ---------------------------------------------------------------- trajectories

@dataclass
class WindingTrajectory:
    """Bloch factors and ``E(p) = sqrt(f_L f_R)`` sampled over the Brillouin zone."""

    p: np.ndarray
    f_L: np.ndarray
    f_R: np.ndarray
    accumulated_phase: float   # of f_L * f_R, in radians

    @property
    def energy(self) -> np.ndarray:
        return np.sqrt(self.f_L * self.f_R)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["p", "re_fL", "im_fL", "re_fR", "im_fR", "re_E", "im_E"])
        for row in zip(self.p, self.f_L, self.f_R, self.energy):
            p, a, b, E = row
            wr.writerow([repr(float(p)), repr(float(a.real)), repr(float(a.imag)),
                         repr(float(b.real)), repr(float(b.imag)),
                         repr(float(E.real)), repr(float(E.imag))])
        return buf.getvalue()


def trajectory(h: HoppingSet, resolution: int = 512) -> WindingTrajectory:
    """Samples at ``p_k = -pi + 2 pi k / resolution`` plus the closing point ``pi``."""
    bf = bloch_factors(h)
    p = -np.pi + 2 * np.pi * np.arange(resolution + 1) / resolution
    fl, fr = bf.f_L(p), bf.f_R(p)
    return WindingTrajectory(p, fl, fr, _accumulated_phase((fl * fr)[:-1]))


# ---------------------------------------------------------------- location tables

class PredictionStatus(str, Enum):
    DETERMINATE = "determinate"
    AMBIGUOUS = "ambiguous"
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class Prediction:
    """Edge-state counts per boundary.

    ``options`` lists every ``(n_left, n_right)`` split compatible with the
    tables: one for a determinate answer, two for an ambiguous one, none
    when the winding tuple is not tabulated.
    """

    status: PredictionStatus
    options: tuple[tuple[int, int], ...] = ()

    @property
    def n_left(self) -> int | None:
        return self.options[0][0] if self.status is PredictionStatus.DETERMINATE else None

    @property
    def n_right(self) -> int | None:
        return self.options[0][1] if self.status is PredictionStatus.DETERMINATE else None

    @property
    def total(self) -> int | None:
        totals = {a + b for a, b in self.options}
        return totals.pop() if len(totals) == 1 else None

    def admits(self, n_left: int, n_right: int) -> bool:
        return (n_left, n_right) in self.options

    def to_json(self) -> dict:
        return {"status": self.status.value, "options": [list(o) for o in self.options]}


def _det(a: int, b: int) -> Prediction:
    return Prediction(PredictionStatus.DETERMINATE, ((a, b),))


def _amb(*opts) -> Prediction:
    return Prediction(PredictionStatus.AMBIGUOUS, tuple(opts))


UNCLASSIFIED = Prediction(PredictionStatus.UNCLASSIFIED)

_SSH_TOPO = {1: _det(2, 0), 0: _det(1, 1), -1: _det(0, 2)}
_EXT1_TWO = {2: _det(4, 0), 1: _det(3, 1), 0: _det(2, 2), -1: _det(1, 3), -2: _det(0, 4)}
_EXT1_ONE = {
    (2, 0): _det(2, 0), (1, 0): _det(2, 0),
    (2, -1): _amb((2, 0), (1, 1)),
    (2, -2): _det(1, 1), (1, -1): _det(1, 1), (0, 0): _det(1, 1),
    (1, -2): _amb((1, 1), (0, 2)),
    (0, -1): _det(0, 2), (0, -2): _det(0, 2),
}
_EXT2_ONE = {
    (1, 1): _det(2, 0), (0, 1): _det(2, 0),
    (1, 0): _amb((2, 0), (1, 1)),
    (1, -1): _det(1, 1), (0, 0): _det(1, 1), (-1, 1): _det(1, 1),
    (0, -1): _amb((1, 1), (0, 2)),
    (-1, 0): _det(0, 2), (-1, -1): _det(0, 2),
}


def _even_table(kind: Kind, nu_bar: int, nu_L: int, nu_R: int) -> Prediction:
    if nu_bar == 0:
        return _det(0, 0)
    if kind is Kind.SSH:
        return _SSH_TOPO.get(nu_L + nu_R, UNCLASSIFIED) if nu_bar == 1 else UNCLASSIFIED
    if kind is Kind.EXT1:
        if nu_bar == 2:
            return _EXT1_TWO.get(nu_L + nu_R, UNCLASSIFIED)
        if nu_bar == 1:
            return _EXT1_ONE.get((nu_L, nu_R), UNCLASSIFIED)
        return UNCLASSIFIED
    if nu_bar in (1, -1):
        return _EXT2_ONE.get((nu_L, nu_R), UNCLASSIFIED)
    return UNCLASSIFIED


def _odd_type1(nu_bar: int, nu_L: int, nu_R: int) -> Prediction:
    # Left boundary: the left cell carries nu_bar states; as many of them as
    # the left factor winds sit on the left, the rest drift right.
    left_l = min(nu_bar, max(nu_L, 0))
    left_r = nu_bar - left_l
    # Right boundary: read with the dual invariants
    # (1 - nu_bar, nu_R + 1, nu_L - 1); it holds |1 - nu_bar| states.
    if nu_bar == 2:
        dual_L = nu_R + 1
        right = (1, 0) if dual_L >= 0 else (0, 1)
    elif nu_bar == 0:
        dual_R = nu_L - 1
        right = (1, 0) if dual_R >= 0 else (0, 1)
    else:
        right = (0, 0)
    return _det(left_l + right[0], left_r + right[1])


def predict_edge_distribution(nu_bar: int, nu_E_L: int, nu_E_R: int, kind: Kind | str,
                              parity: Parity | str = Parity.EVEN) -> Prediction:
    """Tabulated edge-state counts per boundary.

    Even chains follow the location tables verbatim; tuples the tables mark
    as ambiguous return both splits, untabulated tuples return
    ``UNCLASSIFIED``.  For odd type-1 chains the left and right boundaries
    are read with the left-cell and dual right-cell invariants and their
    contributions summed (odd type-2 chains are mirrored first by
    :func:`topology_report`).
    """
    kind, parity = Kind(kind), Parity(parity)
    if parity is Parity.EVEN:
        return _even_table(kind, nu_bar, nu_E_L, nu_E_R)
    if kind is Kind.SSH:
        # a single zero mode on the A sites, A_{j+1} / A_j = -t0R / t1L,
        # which decays to the right exactly when the left factor winds
        return _det(1, 0) if nu_E_L >= 1 else _det(0, 1)
    if kind is Kind.EXT1:
        return _odd_type1(nu_bar, nu_E_L, nu_E_R)
    raise ValueError("odd type-2 chains are predicted through their mirror image")


@dataclass
class TopologyReport:
    kind: Kind
    nu_bar: int
    nu_E_L: int
    nu_E_R: int
    r: float
    predicted: Prediction
    parity: Parity = Parity.EVEN
    zeros_inside: dict = field(default_factory=dict)

    @property
    def nu_E(self) -> int:
        return self.nu_E_L + self.nu_E_R

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "parity": self.parity.value,
                "nu_bar": self.nu_bar, "nu_E_L": self.nu_E_L, "nu_E_R": self.nu_E_R,
                "nu_E": self.nu_E, "r": self.r, "predicted": self.predicted.to_json(),
                "zeros_inside": dict(self.zeros_inside)}


def topology_report(h: HoppingSet, parity: Parity | str = Parity.EVEN,
                    resolution: int = DEFAULT_RESOLUTION) -> TopologyReport:
    """All invariants of ``h`` plus the predicted edge-state distribution."""
    parity = Parity(parity)
    eff = effective_params(h)
    nu_bar = modified_winding(eff)
    nu_L, nu_R = spectral_windings(h, resolution)
    bf = bloch_factors(h)
    zeros = {"left": _disk_count(bf.left.coef), "right": _disk_count(bf.right.coef)}
    if parity is Parity.ODD and h.kind is Kind.EXT2:
        mirror = _inverted_ext2(h)
        m_bar = modified_winding(effective_params(mirror))
        m_L, m_R = spectral_windings(mirror, resolution)
        pred = predict_edge_distribution(m_bar, m_L, m_R, Kind.EXT1, parity)
        pred = Prediction(pred.status, tuple((b, a) for a, b in pred.options))
    else:
        pred = predict_edge_distribution(nu_bar, nu_L, nu_R, h.kind, parity)
    return TopologyReport(h.kind, nu_bar, nu_L, nu_R, eff.r, pred, parity, zeros)


def expected_edge_count(report: TopologyReport) -> int:
    """Number of edge states implied by the invariants of ``report``.

    The location tables fix it whenever they resolve a total; otherwise a
    chain holds ``2 |nu_bar|`` states.
    """
    total = report.predicted.total
    if total is not None:
        return total
    return 2 * abs(report.nu_bar)
