"""Characteristic-equation solvers in Chebyshev form.

Every solver returns a :class:`CharSpectrum` whose energies should coincide
with dense diagonalization of the matching open chain.  Polynomials are
never expanded symbolically: each characteristic function is sampled at
Chebyshev nodes, interpolated at its known degree, deflated by its known
spurious factor, root-found through the colleague matrix, and the roots are
then polished pointwise on the exact (un-interpolated) function.

Variables
---------
Quasi-Hermitian (QH) extended chains
    The two unknowns obey ``u1 + u2 = C``; we solve in
    ``w = (u1 - C/2)**2`` which removes the ``u1 <-> u2`` redundancy and turns
    the spurious squared factor at ``u1 = C/2`` into a single factor ``w``.
General chains
    The reduced root ``sbar`` of the secular quartic enters through
    ``w = ubar**2`` with ``ubar = (sbar + 1/sbar) / 2``.  The cleared function
    ``F_N(w) * (16 w (w - 1))**(N + 1)`` is a polynomial of degree ``3N + 4``
    whose ``N = 0`` member (degree 4) divides it.
"""
from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import Chebyshev
from numpy.polynomial import chebyshev as cheb
from numpy.polynomial import polynomial as pw

from .errors import (ChainTooShort, DeflationError, InvalidIndex, NotApplicable,
                     SolverError)
from .model import (ChainSpec, EffectiveParams, HoppingSet, Kind, Parity, effective_params,
                    is_quasi_hermitian)

log = logging.getLogger(__name__)

MAX_CELLS = 60
DEFLATION_TOL = 1e-6
BC_TOL = 1e-6


# ---------------------------------------------------------------- Chebyshev

def chebyshev_U(n: int, x):
    """Chebyshev polynomial of the second kind by three-term recurrence.

    Defined for ``n >= -2`` with ``U_{-1} = 0`` and ``U_{-2} = -1``, the
    values forced by running the recurrence downward.  ``x`` may be a scalar
    or an array, real or complex.
    """
    if n < -2:
        raise InvalidIndex(f"U_n needs n >= -2, got {n}")
    x = np.asarray(x)
    if n == -2:
        return -np.ones_like(x)
    if n == -1:
        return np.zeros_like(x)
    prev = np.ones_like(x)
    cur = 2 * x * prev if n >= 1 else prev
    for _ in range(n - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


@dataclass(frozen=True)
class Poly:
    """Polynomial in the power basis, coefficients in ascending degree.

    Trailing coefficients below ``1e-12 * max|coef|`` are trimmed so the
    leading coefficient is nonzero.
    """

    coef: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coef))
        if c.size and np.any(c != 0):
            big = np.abs(c).max()
            keep = np.nonzero(np.abs(c) > 1e-12 * big)[0]
            c = c[: keep[-1] + 1]
        else:
            c = c[:1] if c.size else np.zeros(1)
        object.__setattr__(self, "coef", c)

    @property
    def degree(self) -> int:
        return len(self.coef) - 1 if np.any(self.coef != 0) else -1

    def __call__(self, x):
        return pw.polyval(x, self.coef)

    def roots(self) -> np.ndarray:
        return pw.polyroots(self.coef)


def _u_series(n: int) -> np.ndarray:
    # U_n in the T basis: 2 * (T_n + T_{n-2} + ...), with the T_0 term halved
    if n < 0:
        return np.array([0.0 if n == -1 else -1.0])
    c = np.zeros(n + 1)
    c[n % 2::2] = 2.0
    if n % 2 == 0:
        c[0] = 1.0
    return c


def chebyshev_U_poly(n: int) -> Poly:
    """``U_n`` as an exact power-basis :class:`Poly` (integer coefficients)."""
    if n < -2:
        raise InvalidIndex(f"U_n needs n >= -2, got {n}")
    return Poly(cheb.cheb2poly(_u_series(n)))


# ---------------------------------------------------------------- results

@dataclass
class CharSpectrum:
    """Energies recovered from a characteristic equation.

    Attributes
    ----------
    roots
        Solved roots: ``ubar`` (SSH), ``(u1, u2)`` rows (QH extended), or
        ``w`` values (general solvers).
    energies
        ``2N`` (or ``2N + 1`` for odd chains) energies in ``+-`` pairs.
    residuals
        ``|F(root)|`` divided by the maximum of ``|F|`` over the sampling nodes.
    method
        Name of the solver.
    degree, quotient_degree
        Degree of the assembled polynomial in the solver variable and of the
        quotient after removing the spurious factor.
    diagnostics
        Free-form numbers: deflation remainder, polish iterations, and for
        the general solvers the boundary-determinant residual of each state.
    """

    roots: np.ndarray
    energies: np.ndarray
    residuals: np.ndarray
    method: str
    degree: int
    quotient_degree: int
    diagnostics: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["re_u", "im_u", "re_E", "im_E", "residual"])
        roots = np.asarray(self.roots)
        first = roots[:, 0] if roots.ndim == 2 else roots
        n = len(first)
        for k, E in enumerate(self.energies):
            # the j-th root produced the j-th and (n + j)-th energies
            j = k % n if n else 0
            u = first[j] if n else complex("nan")
            res = self.residuals[j] if n else float("nan")
            wr.writerow([repr(float(np.real(u))), repr(float(np.imag(u))),
                         repr(float(E.real)), repr(float(E.imag)), repr(float(res))])
        return buf.getvalue()


# ---------------------------------------------------------------- numerics

def _aberth(f: Callable, z0, iters: int = 200, tol: float = 1e-14) -> tuple[np.ndarray, int]:
    """Simultaneous polish of all roots of ``f`` (Aberth-Ehrlich).

    The derivative is a central difference, which is adequate because every
    step is a correction to an already-close seed.
    """
    z = np.array(z0, dtype=complex)
    if z.size == 0:
        return z, 0
    it = 0
    for it in range(1, iters + 1):
        h = 1e-6 * np.maximum(np.abs(z), 1)
        with np.errstate(all="ignore"):
            fz = f(z)
            d = (f(z + h) - f(z - h)) / (2 * h)
            ratio = fz / d
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1)
            inv = 1 / diff
            np.fill_diagonal(inv, 0)
            step = ratio / (1 - ratio * inv.sum(1))
        step = np.where(np.isfinite(step), step, 0)
        z = z - step
        if np.all(np.abs(step) <= tol * np.maximum(np.abs(z), 1)):
            break
    return z, it


def _cluster_roots(f: Callable, center: complex, k: int, rho: float,
                   m: int = 32, noise: float = 1e-13) -> tuple[np.ndarray, float]:
    """The ``k`` roots of ``f`` nearest ``center``, from its Taylor series.

    The Taylor coefficients on a circle of radius ``rho`` come from one FFT;
    the roots of the truncated series are well conditioned even when the
    ``k`` roots nearly coincide, which pointwise polishing is not.  Also
    returns the separation below which two roots cannot be told apart given
    a relative evaluation noise ``noise``.
    """
    th = np.exp(2j * np.pi * np.arange(m) / m)
    vals = f(center + rho * th)
    b = np.fft.fft(vals) / m
    zeta = pw.polyroots(b[: m // 2])
    z = center + rho * zeta[np.argsort(np.abs(zeta))[:k]]
    floor = rho * math.sqrt(noise * np.abs(vals).max() / max(abs(b[2]), 1e-300))
    return z, floor


def _nodes(deg: int) -> np.ndarray:
    k = deg + 1
    return np.cos(np.pi * (np.arange(k) + 0.5) / k)


def _interpolate(f: Callable, deg: int, lo: float, hi: float) -> tuple[Chebyshev, float]:
    """Chebyshev interpolant of ``f`` at degree ``deg`` and its node maximum."""
    x = _nodes(deg)
    vals = f(lo + (x + 1) * (hi - lo) / 2)
    if not np.all(np.isfinite(vals)):
        raise SolverError("non-finite characteristic function at a sampling node")
    coef = cheb.chebfit(x, vals, deg)
    return Chebyshev(coef, domain=[lo, hi]), float(np.abs(vals).max())


def _check_degree(f: Callable, interp: Chebyshev, lo: float, hi: float, scale: float) -> float:
    # a polynomial of the assumed degree must reproduce f off the fitting nodes
    x = np.linspace(lo, hi, 7)[1:-1] + 0.013 * (hi - lo)
    return float(np.abs(f(x) - interp(x)).max() / scale)


def _check_length(kind: Kind, n_cells: int):
    if kind is not Kind.SSH and n_cells < 2:
        raise ChainTooShort(f"{kind.value} chains need at least 2 cells, got {n_cells}")
    if n_cells < 1:
        raise ChainTooShort("need at least one cell")
    if n_cells > MAX_CELLS:
        raise SolverError(f"interpolation path is limited to N <= {MAX_CELLS}")


def _pm(E2: np.ndarray) -> np.ndarray:
    E = np.sqrt(np.asarray(E2, dtype=complex))
    return np.concatenate([E, -E])


# ---------------------------------------------------------------- SSH

def ssh_char_spectrum(eff: EffectiveParams, N: int) -> CharSpectrum:
    """Roots of ``t0 U_N(u) + t1 U_{N-1}(u) = 0`` and ``E**2 = t0**2 + t1**2 + 2 t0 t1 u``."""
    if eff.kind is not Kind.SSH:
        raise NotApplicable("ssh_char_spectrum takes SSH parameters")
    _check_length(Kind.SSH, N)
    t0, t1 = eff.tbar[0], eff.tbar[1]
    series = cheb.chebadd(t0 * _u_series(N), t1 * _u_series(N - 1))
    F = lambda u: t0 * chebyshev_U(N, u) + t1 * chebyshev_U(N - 1, u)
    u, it = _aberth(F, cheb.chebroots(series))
    scale = np.abs(F(_nodes(N))).max()
    res = np.abs(F(u)) / scale
    E2 = t0 ** 2 + t1 ** 2 + 2 * t0 * t1 * u
    return CharSpectrum(u, _pm(E2), res, "ssh", N, N, {"iterations": it})


def _ssh_odd(eff: EffectiveParams, N: int) -> CharSpectrum:
    # an odd SSH chain has the bulk condition U_N(u) = 0 and one zero mode
    t0, t1 = eff.tbar[0], eff.tbar[1]
    u = np.cos(np.pi * np.arange(1, N + 1) / (N + 1)).astype(complex)
    E2 = t0 ** 2 + t1 ** 2 + 2 * t0 * t1 * u
    E = np.concatenate([_pm(E2), [0j]])
    res = np.abs(chebyshev_U(N, u)) / np.abs(chebyshev_U(N, _nodes(N))).max()
    return CharSpectrum(u, E, res, "qh_odd", N, N, {"zero_modes": 1})


# ---------------------------------------------------------------- QH extended

def _bracket(k: int, x, y):
    U = chebyshev_U
    return U(k + 2, x) * U(k, y) - 2 * U(k + 1, x) * U(k + 1, y) + U(k, x) * U(k + 2, y) + 2


def _qh_solve(F: Callable, C: float, N: int, cross: float, amps: tuple[float, float, float],
              method: str, extra: tuple = ()) -> CharSpectrum:
    """Solve ``F(u1, u2) = 0`` on the line ``u1 + u2 = C``.

    ``F`` is symmetric, hence a polynomial of degree ``N + 1`` in the product
    ``v = u1 * u2``, with a spurious simple root where ``u1 = u2``
    (``v = C**2 / 4``).  Energies follow from
    ``E**2 = total - cross * (2 + 4 v)`` where ``total`` is the sum of the
    squared amplitudes ``amps``, so the physical roots fill the ``v``
    interval that maps onto ``0 <= E**2 <= sum(|amps|)**2``.  Working in ``v``
    keeps them well separated even when ``|C|`` is large, where the squared
    distance from the midpoint of the line would crowd them together.
    """
    def split(v):
        v = np.asarray(v, dtype=complex)
        d = np.sqrt(C * C - 4 * v)
        d = np.where((np.conj(d) * C).real < 0, -d, d)
        big = (C + d) / 2
        with np.errstate(all="ignore"):
            small = np.where(big != 0, v / big, 0)
        return small, big

    def G(v):
        a, b = split(v)
        return F(a, b)

    deg = N + 1
    total = sum(a * a for a in amps)
    e2_max = sum(abs(a) for a in amps) ** 2
    ends = [((total - e2) / cross - 2) / 4 for e2 in (-0.01 * e2_max, 1.01 * e2_max)]
    lo, hi = min(ends), max(ends)
    spur = C * C / 4
    if lo - 0.1 * (hi - lo) <= spur <= hi + 0.1 * (hi - lo):
        Pn, scale = _interpolate(lambda v: G(v).real, deg, lo, hi)
        quot, rem = divmod(Pn, Chebyshev.fromroots([spur], domain=[lo, hi]))
        remainder = float(np.abs(rem.coef).max() / np.abs(Pn.coef).max())
        if lo <= spur <= hi:
            seeds = quot.roots()
        else:
            # synthetic division by a root just outside the window is
            # inaccurate; the spurious root is the one nearest it instead
            seeds = Pn.roots()
            seeds = np.delete(seeds, np.argmin(np.abs(seeds - spur)))
    else:
        # far from the sampling window the division is harmless pointwise,
        # while polynomial division would need a wild extrapolation
        Pn, _ = _interpolate(lambda v: (G(v) / (v - spur)).real, deg, lo, hi)
        remainder = float(abs(Pn.coef[-1]) / np.abs(Pn.coef).max())
        seeds = Pn.cutdeg(N).roots()
        scale = float(np.abs(G(lo + (_nodes(deg) + 1) * (hi - lo) / 2)).max())
    if remainder > DEFLATION_TOL:
        raise DeflationError(f"{method}: spurious factor leaves remainder {remainder:.2e}")
    v, it = _aberth(lambda v: G(v) / (v - spur), seeds)
    u1, u2 = split(v)
    E2 = total - cross * (2 + 4 * v)
    res = np.abs(G(v)) / scale
    E = np.concatenate([_pm(E2), np.asarray(extra, dtype=complex)])
    return CharSpectrum(np.stack([u1, u2], axis=1), E, res, method,
                        2 * deg, 2 * N,
                        {"deflation_remainder": remainder, "iterations": it,
                         "constraint_sum": C})


def qh_type1_char_spectrum(eff: EffectiveParams, N: int) -> CharSpectrum:
    """Quasi-Hermitian type-1 chain of ``2N`` sites.

    Degrees reported are in ``u1``: ``2N + 2`` assembled, ``2N`` after the
    squared spurious factor is removed.
    """
    if eff.kind is not Kind.EXT1:
        raise NotApplicable("qh_type1_char_spectrum takes type-1 parameters")
    _check_length(Kind.EXT1, N)
    t0, t1, t2 = eff.tbar[0], eff.tbar[1], eff.tbar[2]
    U = chebyshev_U

    def row(k, x):
        return t0 * U(k + 2, x) + t1 * U(k + 1, x) + t2 * U(k, x)

    def F(x, y):
        return (row(N, x) * row(N - 2, y) + row(N, y) * row(N - 2, x)
                - 2 * row(N - 1, x) * row(N - 1, y)
                + 2 * (t0 ** 2 + t1 ** 2 + t2 ** 2 - 2 * t0 * t2 * (1 + 2 * x * y)))

    C = -t1 * (t0 + t2) / (2 * t0 * t2)
    return _qh_solve(F, C, N, t0 * t2, (t0, t1, t2), "qh_type1")


def qh_type2_char_spectrum(eff: EffectiveParams, N: int) -> CharSpectrum:
    """Quasi-Hermitian type-2 chain of ``2N`` sites."""
    if eff.kind is not Kind.EXT2:
        raise NotApplicable("qh_type2_char_spectrum takes type-2 parameters")
    _check_length(Kind.EXT2, N)
    t0, t1, tm = eff.tbar[0], eff.tbar[1], eff.tbar[-1]
    ratio = t1 / tm + tm / t1

    def F(x, y):
        return _bracket(N, x, y) - ratio * _bracket(N - 1, x, y) + _bracket(N - 2, x, y)

    C = -t0 * (t1 + tm) / (2 * t1 * tm)
    return _qh_solve(F, C, N, t1 * tm, (t0, t1, tm), "qh_type2")


def qh_odd_char_spectrum(eff: EffectiveParams, N: int, kind: Kind | str | None = None) -> CharSpectrum:
    """Quasi-Hermitian chain of ``2N + 1`` sites; one energy is exactly zero.

    A type-2 odd chain is the mirror image of a type-1 odd chain with the
    intra- and inter-cell amplitudes exchanged, so it reuses the type-1
    equation with ``(t0, t1, t2) -> (t1, t0, t-1)``.
    """
    kind = Kind(kind) if kind is not None else eff.kind
    if kind is not eff.kind:
        raise NotApplicable(f"parameters are {eff.kind.value}, requested {kind.value}")
    _check_length(kind, N)
    if kind is Kind.SSH:
        return _ssh_odd(eff, N)
    if kind is Kind.EXT1:
        t0, t1, t2 = eff.tbar[0], eff.tbar[1], eff.tbar[2]
    else:
        t0, t1, t2 = eff.tbar[1], eff.tbar[0], eff.tbar[-1]

    def F(x, y):
        return _bracket(N, x, y) - (t2 / t0) * _bracket(N - 1, x, y)

    C = -t1 * (t0 + t2) / (2 * t0 * t2)
    out = _qh_solve(F, C, N, t0 * t2, (t0, t1, t2), "qh_odd", extra=(0j,))
    out.diagnostics["zero_modes"] = 1
    return out


# ---------------------------------------------------------------- general

@dataclass(frozen=True)
class _GeneralModel:
    """Ingredients shared by the two general solvers."""

    r: float
    quartic_a: tuple      # the secular quartic is a(s) * b(s) - E**2 s**2
    quartic_b: tuple
    lead: float           # E**2 = c2 - lead * (P**2 + Q**2 + 4 P Q u12 u34)
    c2: float
    u_pair: Callable      # (P, Q) -> (u12, u34)
    char: Callable        # (N, P, Q, u12, u34) -> (value, scale)

    def quartic(self, E2) -> np.ndarray:
        p = pw.polymul(self.quartic_a, self.quartic_b).astype(complex)
        p[2] -= E2
        return p

    def energy_squared(self, P, Q, u12, u34):
        return self.c2 - self.lead * (P * P + Q * Q + 4 * P * Q * u12 * u34)


def _type1_model(h: HoppingSet) -> _GeneralModel:
    a0, a1, a2 = h.L(0), h.L(1), h.L(2)
    b0, b1, b2 = h.R(0), h.R(1), h.R(2)
    r = (b0 * b2 / (a0 * a2)) ** 0.25
    A = a0 * a2 * (b0 * b1 + a1 * b2)
    B = b0 * b2 * (a0 * a1 + b1 * a2)

    def u_pair(P, Q):
        D = 2 * a0 * b0 * a2 * b2 * (P * P - Q * Q)
        return P * Q * (A * Q - B / Q) / D, -P * Q * (A * P - B / P) / D

    a, b, c = a0, b1, b2
    K = a * c - b * b

    def char(N, P, Q, u12, u34):
        U = chebyshev_U
        Uu = lambda n: U(n, u12)
        Uv = lambda n: U(n, u34)
        S = (-a * P ** (N - 3) * Q ** (N + 1) * Uv(N + 1) * (a * P ** 2 * Uu(N + 1) + b * P * Uu(N) + c * Uu(N - 1))
             + a * P ** (N - 2) * Q ** N * Uv(N + 2) * (a * P ** 2 * Uu(N) + b * P * Uu(N - 1) + c * Uu(N - 2))
             + P ** (N - 3) * Q ** N * Uv(N) * (a * a * P ** 3 * Uu(N + 2) + K * P * Uu(N) - b * c * Uu(N - 1))
             - P ** (N - 2) * Q ** (N - 1) * Uv(N + 1) * (a * a * P ** 3 * Uu(N + 1) + K * P * Uu(N - 1) - b * c * Uu(N - 2))
             + P ** (N - 3) * Q ** (N - 1) * Uv(N - 1) * (a * b * P ** 3 * Uu(N + 2) - K * P ** 2 * Uu(N + 1) - c * c * Uu(N - 1))
             - P ** (N - 2) * Q ** (N - 2) * Uv(N) * (a * b * P ** 3 * Uu(N + 1) - K * P ** 2 * Uu(N) - c * c * Uu(N - 2))
             + c * P ** (N - 2) * Q ** (N - 2) * Uv(N - 2) * (a * P ** 2 * Uu(N + 2) + b * P * Uu(N + 1) + c * Uu(N))
             - c * P ** (N - 1) * Q ** (N - 3) * Uv(N - 1) * (a * P ** 2 * Uu(N + 1) + b * P * Uu(N) + c * Uu(N - 1)))

        def edge(s, u):
            return (c * c + 2 * b * c * s * u + s * s * (b * b + 2 * a * c * (2 * u * u - 1))
                    + 2 * a * b * s ** 3 * u + a * a * s ** 4)

        T1 = P ** -2 * Q ** (2 * N - 2) * edge(Q, u34)
        T2 = P ** (2 * N - 2) * Q ** -2 * edge(P, u12)
        return S + T1 + T2, np.abs(S) + np.abs(T1) + np.abs(T2)

    return _GeneralModel(r, (b2, b1, a0), (b0, a1, a2), a0 * a2,
                         a0 * b0 + a1 * b1 + a2 * b2, u_pair, char)


def _type2_model(h: HoppingSet) -> _GeneralModel:
    a0, a1, am = h.L(0), h.L(1), h.L(-1)
    b0, b1, bm = h.R(0), h.R(1), h.R(-1)
    r = (b1 * bm / (a1 * am)) ** 0.25
    A = a1 * am * (b0 * b1 + a0 * bm)
    B = b1 * bm * (a0 * a1 + b0 * am)

    def u_pair(P, Q):
        D = 2 * a1 * b1 * am * bm * (P * P - Q * Q)
        return P * Q * (A * Q - B / Q) / D, -P * Q * (A * P - B / P) / D

    L, R = am, b1

    def char(N, P, Q, u12, u34):
        U = chebyshev_U
        Uu = lambda n: U(n, u12)
        Uv = lambda n: U(n, u34)
        mix = L * L * P * P * Q * Q + R * R
        terms = (
            -L * R * P ** N * Q ** N * (Uu(N - 2) * Uv(N) + Uu(N) * Uv(N + 2)
                                        + Uu(N + 2) * Uv(N) + Uu(N) * Uv(N - 2)),
            L * R * P ** (N - 1) * Q ** (N - 1) * (P * P + Q * Q)
            * (Uu(N - 1) * Uv(N - 1) + Uu(N + 1) * Uv(N + 1)),
            P ** (N - 1) * Q ** (N - 1) * mix * (Uu(N - 1) * Uv(N + 1) + Uu(N + 1) * Uv(N - 1)),
            -P ** (N - 2) * Q ** (N - 2) * (P * P + Q * Q) * mix * Uu(N) * Uv(N),
            (R - L * P * P) * (R - L * Q * Q) * (P ** (2 * N) * Q ** -2 + Q ** (2 * N) * P ** -2),
        )
        return sum(terms), sum(np.abs(t) for t in terms)

    return _GeneralModel(r, (bm, b0, a1), (b1, a0, am), a1 * am,
                         a0 * b0 + a1 * b1 + am * bm, u_pair, char)


def _pairings(s: np.ndarray):
    for i, j, k, l in ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)):
        yield s[i], s[j], s[k], s[l]


def _general_solve(h: HoppingSet, N: int, model: _GeneralModel, method: str) -> CharSpectrum:
    r = model.r

    def PQ(w):
        u = np.sqrt(np.asarray(w, dtype=complex))
        sb = u + np.sqrt(u * u - 1)
        return r * sb, r / sb

    def Phi(n, w):
        w = np.asarray(w, dtype=complex)
        # overflow next to the poles at w = 0, 1 is expected and harmless
        with np.errstate(all="ignore"):
            P, Q = PQ(w)
            u12, u34 = model.u_pair(P, Q)
            return model.char(n, P, Q, u12, u34)[0] * (16 * w * (w - 1)) ** (n + 1)

    # the interval straddles the poles at w = 0, 1 without touching them
    R = 2.0
    lo, hi = -1.013 * R, 0.987 * R
    deg = 3 * N + 4
    Pn, scale = _interpolate(lambda w: Phi(N, w), deg, lo, hi)
    spur, _ = _interpolate(lambda w: Phi(0, w), 4, lo, hi)
    consistency = _check_degree(lambda w: Phi(N, w), Pn, lo, hi, scale)
    if consistency > 1e-6:
        raise SolverError(f"{method}: degree-{deg} interpolant misses off-node samples "
                          f"by {consistency:.2e}")
    quot, rem = divmod(Pn, spur)
    remainder = float(np.abs(rem.coef).max() / np.abs(Pn.coef).max())
    if remainder > DEFLATION_TOL:
        log.debug(f"{method}: spurious quartic leaves remainder {remainder:.2e}")

    def f(w):
        with np.errstate(all="ignore"):
            return Phi(N, w) / Phi(0, w)

    w, it = _aberth(f, quot.roots())
    w, centers = _refine_clusters(f, w)
    residual = np.abs(Phi(N, w)) / scale

    # a nearly double root is accurate only through its mean
    with np.errstate(all="ignore"):
        P, Q = PQ(centers)
        u12, u34 = model.u_pair(P, Q)
        E2 = model.energy_squared(P, Q, u12, u34)

    # Each physical state appears three times, once per pairing of its four
    # secular roots.  Keep the cleanest representative (furthest from the
    # poles) and retire the other two members of its orbit.
    quality = np.minimum(np.abs(w - 1), np.abs(w))
    used = np.zeros(len(w), dtype=bool)
    keep: list[int] = []
    for i in np.argsort(-quality):
        if len(keep) == N:
            break
        if used[i] or not np.isfinite(E2[i]):
            continue
        used[i] = True
        s = pw.polyroots(model.quartic(E2[i]))
        orbit = [(sa * sb + sc * sd) / (4 * r * r) + 0.5 for sa, sb, sc, sd in _pairings(s)]
        orbit.pop(int(np.argmin([abs(o - w[i]) for o in orbit])))
        for o in orbit:
            free = np.nonzero(~used)[0]
            if free.size:
                used[free[np.argmin(np.abs(w[free] - o))]] = True
        keep.append(int(i))
    if len(keep) != N:
        raise SolverError(f"{method}: recovered {len(keep)} of {N} states")
    keep_arr = np.array(keep)

    bc = np.array([_bc_residual(model, N, E2[i]) for i in keep_arr])
    flagged = [int(k) for k in np.nonzero(bc > BC_TOL)[0]]
    if flagged:
        log.info("%s: %d state(s) exceed the boundary-determinant tolerance: %s",
                    method, len(flagged), bc[flagged])
    return CharSpectrum(w[keep_arr], _pm(E2[keep_arr]), residual[keep_arr], method,
                        deg, 3 * N,
                        {"deflation_remainder": remainder, "iterations": it,
                         "degree_consistency": consistency, "bc_residual": bc.tolist(),
                         "flagged": flagged, "candidates": int(len(w))})


def _refine_clusters(f: Callable, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Re-solve near-coincident root pairs on a Taylor circle.

    Returns the refined roots and, per root, the centre of its pair (the
    root itself when isolated).
    """
    w = w.copy()
    n = len(w)
    if n < 2:
        return w, w.copy()
    centers = w.copy()
    d = np.abs(w[:, None] - w[None, :])
    np.fill_diagonal(d, np.inf)
    near = np.argmin(d, axis=1)
    for i in range(n):
        j = near[i]
        if j <= i or near[j] != i:
            continue
        c = (w[i] + w[j]) / 2
        gap = d[i, j]
        others = np.delete(np.abs(w - c), [i, j])
        clearance = min(others.min() if others.size else np.inf, abs(c), abs(c - 1))
        if gap > 1e-4 * max(1.0, abs(c)) or clearance < 50 * gap:
            continue
        rho = min(1e-2 * max(1.0, abs(c)), 0.4 * clearance)
        if rho < 5 * gap:
            continue
        z, floor = _cluster_roots(f, c, 2, rho)
        if not (np.all(np.isfinite(z)) and np.abs(z.mean() - c) < rho):
            continue
        w[i], w[j] = z[0], z[1]
        if abs(z[0] - z[1]) < 10 * floor:
            # not resolvable in double precision: only the mean is trustworthy
            centers[i] = centers[j] = z.mean()
        else:
            centers[i], centers[j] = z[0], z[1]
    return w, centers


def _bc_residual(model: _GeneralModel, N: int, E2: complex) -> float:
    """Normalized boundary determinant at ``E**2``, best over root pairings."""
    s = pw.polyroots(model.quartic(E2))
    best = math.inf
    for sa, sb, sc, sd in _pairings(s):
        P, Q = np.sqrt(sa * sb), np.sqrt(sc * sd)
        u12, u34 = (sa + sb) / (2 * P), (sc + sd) / (2 * Q)
        with np.errstate(all="ignore"):
            val, sc_ = model.char(N, P, Q, u12, u34)
            rel = abs(val) / sc_ if sc_ > 0 else math.inf
        if np.isfinite(rel):
            best = min(best, float(rel))
    return best


def general_type1_char_spectrum(h: HoppingSet, N: int) -> CharSpectrum:
    """Type-1 chain of ``2N`` sites with arbitrary amplitudes."""
    if h.kind is not Kind.EXT1:
        raise NotApplicable("general_type1_char_spectrum takes a type-1 model")
    _check_length(Kind.EXT1, N)
    return _general_solve(h, N, _type1_model(h), "general_type1")


def general_type2_char_spectrum(h: HoppingSet, N: int) -> CharSpectrum:
    """Type-2 chain of ``2N`` sites with arbitrary amplitudes."""
    if h.kind is not Kind.EXT2:
        raise NotApplicable("general_type2_char_spectrum takes a type-2 model")
    _check_length(Kind.EXT2, N)
    return _general_solve(h, N, _type2_model(h), "general_type2")


def solve_chain(h: HoppingSet, chain: ChainSpec | int, qh_tol: float = 1e-9) -> CharSpectrum:
    """Pick the characteristic-equation solver that fits ``h`` and ``chain``.

    Quasi-Hermitian inputs use the closed Chebyshev forms; other extended
    models use the general solvers, which exist for even chains only.
    """
    if isinstance(chain, int):
        chain = ChainSpec(chain)
    N = chain.n_cells
    eff = effective_params(h)
    if chain.parity is Parity.ODD:
        if not is_quasi_hermitian(h, qh_tol):
            raise NotApplicable("odd chains are solved for quasi-Hermitian amplitudes only")
        return qh_odd_char_spectrum(eff, N)
    if h.kind is Kind.SSH:
        return ssh_char_spectrum(eff, N)
    if is_quasi_hermitian(h, qh_tol):
        solver = qh_type1_char_spectrum if h.kind is Kind.EXT1 else qh_type2_char_spectrum
        return solver(eff, N)
    if h.kind is Kind.EXT1:
        return general_type1_char_spectrum(h, N)
    return general_type2_char_spectrum(h, N)
