"""Model parameterizations and the exact algebraic maps between them.

A model is a set of left/right hopping pairs indexed by bond class:

* ``0``  intra-cell hopping ``A_j <-> B_j``
* ``1``  inter-cell hopping ``A_{j+1} <-> B_j``
* ``2``  third-neighbour hopping ``A_{j+2} <-> B_j`` (type-1 extension)
* ``-1`` third-neighbour hopping ``A_{j-1} <-> B_j`` (type-2 extension)

The left amplitude of class ``i`` multiplies the hop towards smaller site
index, the right amplitude the hop towards larger site index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .errors import InvalidAmplitudes, NotApplicable


class Kind(str, Enum):
    SSH = "ssh"
    EXT1 = "ext1"
    EXT2 = "ext2"

    @property
    def bonds(self) -> tuple[int, ...]:
        return _BONDS[self]


_BONDS = {Kind.SSH: (0, 1), Kind.EXT1: (0, 1, 2), Kind.EXT2: (0, 1, -1)}


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"


class Boundary(str, Enum):
    OBC = "obc"
    PBC = "pbc"


@dataclass(frozen=True)
class HoppingSet:
    """Left/right hopping amplitudes of one model.

    Parameters
    ----------
    kind : Kind
        Model family.
    t : mapping
        Bond class -> ``(left, right)``. Exactly the classes of ``kind``.
    """

    kind: Kind
    t: Mapping[int, tuple[float, float]]

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        t = {int(k): (float(v[0]), float(v[1])) for k, v in dict(self.t).items()}
        if set(t) != set(kind.bonds):
            raise InvalidAmplitudes(
                f"{kind.value} needs bond classes {sorted(kind.bonds)}, got {sorted(t)}")
        for i, (L, R) in t.items():
            if not (math.isfinite(L) and math.isfinite(R)):
                raise InvalidAmplitudes(f"bond {i}: amplitudes must be finite")
            if L * R <= 0:
                raise InvalidAmplitudes(
                    f"bond {i}: product tL*tR = {L * R:g} must be positive")
        object.__setattr__(self, "t", dict(sorted(t.items(), key=lambda kv: _order(kv[0]))))

    def __hash__(self):
        return hash((self.kind, tuple(self.t.items())))

    def L(self, i: int) -> float:
        return self.t[i][0]

    def R(self, i: int) -> float:
        return self.t[i][1]

    @property
    def third(self) -> int | None:
        """Bond class of the third-neighbour hopping, if any."""
        return {Kind.SSH: None, Kind.EXT1: 2, Kind.EXT2: -1}[self.kind]

    @classmethod
    def from_tuple(cls, kind: Kind | str, values: Sequence[float]) -> "HoppingSet":
        """Build from ``(t0L, t0R, t1L, t1R[, t3L, t3R])`` in bond order 0, 1, extra."""
        kind = Kind(kind)
        n = len(kind.bonds)
        if len(values) != 2 * n:
            raise InvalidAmplitudes(f"{kind.value} needs {2 * n} amplitudes, got {len(values)}")
        return cls(kind, {b: (values[2 * k], values[2 * k + 1]) for k, b in enumerate(kind.bonds)})

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(x for b in self.kind.bonds for x in self.t[b])

    def to_json(self) -> dict:
        return {"kind": self.kind.value,
                "t": {str(b): [self.t[b][0], self.t[b][1]] for b in self.kind.bonds}}

    @classmethod
    def from_json(cls, obj: Mapping) -> "HoppingSet":
        try:
            kind = Kind(obj["kind"])
            raw = obj["t"]
        except (KeyError, ValueError, TypeError) as exc:
            raise InvalidAmplitudes(f"malformed hopping set: {exc}") from None
        t = {}
        for key, pair in raw.items():
            # accept the typographic minus as well as ASCII
            k = int(str(key).replace("−", "-"))
            if len(pair) != 2:
                raise InvalidAmplitudes(f"bond {key}: expected [tL, tR]")
            t[k] = (pair[0], pair[1])
        return cls(kind, t)


def _order(b: int) -> int:
    return {0: 0, 1: 1, 2: 2, -1: 2}[b]


@dataclass(frozen=True)
class EffectiveParams:
    """Geometric-mean amplitudes and skin factor ``r``.

    ``tbar[i] = sqrt(tL_i tR_i)`` carries the common sign of the pair, so
    these are the amplitudes of the Hermitian chain similar to the original.
    """

    kind: Kind
    tbar: Mapping[int, float]
    r: float

    def __hash__(self):
        return hash((self.kind, tuple(self.tbar.items()), self.r))

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(self.tbar[b] for b in self.kind.bonds)


@dataclass(frozen=True)
class ChainSpec:
    """Finite-chain geometry: ``n_cells`` unit cells, parity and boundary condition."""

    n_cells: int
    parity: Parity = Parity.EVEN
    boundary: Boundary = Boundary.OBC

    def __post_init__(self):
        object.__setattr__(self, "parity", Parity(self.parity))
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if int(self.n_cells) != self.n_cells or self.n_cells < 1:
            raise ValueError(f"n_cells must be a positive integer, got {self.n_cells!r}")
        if self.parity is Parity.ODD and self.boundary is not Boundary.OBC:
            raise ValueError("odd parity is only defined with open boundaries")

    @property
    def n_sites(self) -> int:
        return 2 * self.n_cells + (self.parity is Parity.ODD)


@dataclass(frozen=True)
class PhaseLabel:
    nu_bar: int

    @property
    def description(self) -> str:
        return "trivial" if self.nu_bar == 0 else "topological"


def effective_params(h: HoppingSet) -> EffectiveParams:
    """Geometric-mean amplitudes and skin factor of ``h``."""
    # the sign matters: flipping t0 alone in a type-1 chain is not a gauge change
    tbar = {b: math.copysign(math.sqrt(h.L(b) * h.R(b)), h.L(b)) for b in h.kind.bonds}
    if h.kind is Kind.SSH:
        r = math.sqrt(h.R(0) * h.R(1) / (h.L(0) * h.L(1)))
    elif h.kind is Kind.EXT1:
        r = (h.R(0) * h.R(2) / (h.L(0) * h.L(2))) ** 0.25
    else:
        r = (h.R(1) * h.R(-1) / (h.L(1) * h.L(-1))) ** 0.25
    return EffectiveParams(h.kind, tbar, r)


def _qhc_sides(h: HoppingSet) -> tuple[float, float]:
    if h.kind is Kind.EXT1:
        rad = h.R(0) * h.L(2) / (h.L(0) * h.R(2))
        lhs, scale = h.L(1), h.R(1)
    elif h.kind is Kind.EXT2:
        rad = h.R(1) * h.L(-1) / (h.L(1) * h.R(-1))
        lhs, scale = h.L(0), h.R(0)
    else:
        raise NotApplicable("the SSH chain needs no quasi-Hermiticity condition")
    if rad <= 0:
        raise InvalidAmplitudes("negative radicand in the quasi-Hermiticity condition")
    return lhs, scale * math.sqrt(rad)


def qhc_residual(h: HoppingSet) -> float:
    """Relative residual of the quasi-Hermiticity condition (0 when exact).

    For type 1 the condition fixes ``t1L`` in terms of the other five
    amplitudes; for type 2 it fixes ``t0L``.
    """
    lhs, rhs = _qhc_sides(h)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


def is_quasi_hermitian(h: HoppingSet, tol: float = 1e-9) -> bool:
    """True if ``h`` maps to a Hermitian model by a single similarity.

    The SSH chain always does, so it returns True by convention.
    """
    if h.kind is Kind.SSH:
        return True
    return qhc_residual(h) <= tol


def qhc_enforce(h: HoppingSet) -> HoppingSet:
    """Overwrite ``t1L`` (type 1) or ``t0L`` (type 2) so the condition holds exactly."""
    _, rhs = _qhc_sides(h)
    b = 1 if h.kind is Kind.EXT1 else 0
    t = dict(h.t)
    t[b] = (rhs, h.R(b))
    return HoppingSet(h.kind, t)


def duality_map(h: HoppingSet) -> HoppingSet:
    """Relabel a type-1 bulk as a type-2 bulk (``B_j -> A~_j``, ``A_{j+1} -> B~_j``)."""
    if h.kind is not Kind.EXT1:
        raise NotApplicable("duality_map takes a type-1 model")
    return HoppingSet(Kind.EXT2, {
        0: (h.L(1), h.R(1)),
        1: (h.L(0), h.R(0)),
        -1: (h.L(2), h.R(2)),
    })


def inverse_duality_map(h: HoppingSet) -> HoppingSet:
    """Inverse of :func:`duality_map`."""
    if h.kind is not Kind.EXT2:
        raise NotApplicable("inverse_duality_map takes a type-2 model")
    return HoppingSet(Kind.EXT1, {
        0: (h.L(1), h.R(1)),
        1: (h.L(0), h.R(0)),
        2: (h.L(-1), h.R(-1)),
    })


def scaling_transform(h: HoppingSet, rt: float) -> HoppingSet:
    """Rescale a type-1 model so ``tbar`` is fixed and ``r`` is multiplied by ``rt``."""
    if h.kind is not Kind.EXT1:
        raise NotApplicable("scaling_transform takes a type-1 model")
    if not rt > 0:
        raise ValueError("scale factor must be positive")
    return HoppingSet(Kind.EXT1, {
        0: (h.L(0) / rt, rt * h.R(0)),
        1: (h.L(1), h.R(1)),
        2: (h.L(2) / rt, rt * h.R(2)),
    })


def from_effective(kind: Kind | str, tbar: Sequence[float], r: float = 1.0) -> HoppingSet:
    """A quasi-Hermitian representative with given ``tbar`` and skin factor ``r``.

    Uses ``t_i^R = tbar_i * r**k_i`` and ``t_i^L = tbar_i / r**k_i``.
    """
    kind = Kind(kind)
    # power of r carried by each bond class; any choice obeying the skin-factor
    # and quasi-Hermiticity relations works, these keep the neutral bond real-symmetric
    expo = {Kind.SSH: {0: 0.5, 1: 0.5},
            Kind.EXT1: {0: 1.0, 1: 0.0, 2: 1.0},
            Kind.EXT2: {0: 0.0, 1: 1.0, -1: 1.0}}[kind]
    t = {b: (tb / r ** expo[b], tb * r ** expo[b]) for b, tb in zip(kind.bonds, tbar)}
    return HoppingSet(kind, t)
