"""Named parameter sets with known spectra and edge-state counts.

Amplitudes are given as ``(t0L, t0R, t1L, t1R, t3L, t3R)`` where the third
pair is ``t2`` for type-1 and ``t-1`` for type-2 chains.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError
from .model import Boundary, ChainSpec, HoppingSet, Kind, Parity


@dataclass(frozen=True)
class FigurePreset:
    id: str
    kind: Kind
    amplitudes: tuple[float, ...]
    n_cells: int
    parity: Parity
    citation: str

    @property
    def hopping(self) -> HoppingSet:
        return HoppingSet.from_tuple(self.kind, self.amplitudes)

    @property
    def chain(self) -> ChainSpec:
        return ChainSpec(self.n_cells, self.parity, Boundary.OBC)


def _p(pid, kind, amps, citation, parity=Parity.EVEN, n=20):
    return FigurePreset(pid, Kind(kind), tuple(float(a) for a in amps), n, parity, citation)


_FIG2 = (1 / 2, 1 / 8, 2, 2, 4, 1)

PRESETS: dict[str, FigurePreset] = {p.id: p for p in (
    _p("fig1", "ssh", (1, 4, 3, 3), "SSH chain, two right edge states"),
    _p("fig2", "ext1", _FIG2, "type-1, 40 sites, three left and one right edge state"),
    _p("fig3", "ext1", (1 / 2, 8, 5, 5, 1 / 4, 4), "type-1, 40 sites, two right edge states"),
    _p("fig4", "ext1", (9 / 2, 2, 2, 2, 1, 9 / 4), "type-1 general, 40 sites, trivial"),
    _p("fig5", "ext1", (1, 1, 10 / 3, 10 / 3, 3 / 4, 3),
       "type-1 general, 40 sites, imaginary edge pair"),
    _p("fig6", "ext1", (1, 1, 3, 3, 7 / 2, 4), "type-1 general, 40 sites, four edge states"),
    _p("fig7", "ext2", (4, 4, 1, 1 / 4, 10, 5 / 2), "type-2, two left edge states"),
    _p("fig8", "ext1", _FIG2, "amplitudes of fig2 on 41 sites, exact zero mode",
       parity=Parity.ODD),
    _p("fig9", "ext2", (2, 2, 9 / 2, 2, 1, 9 / 4), "type-2 general, 40 sites, dual of fig4"),
    _p("fig10", "ext2", (3, 3, 1, 1, 7 / 2, 4), "type-2 general, 40 sites, dual of fig6"),
    _p("appC1", "ext2", (1.1 + 2 / 3, 1.1 - 2 / 3, 1, 1, 1 / 5, 1 / 5),
       "Non-Bloch band theory benchmark, case 1 (Yokomizo and Murakami 2019)"),
    _p("appC2", "ext2", (-1.1 + 2 / 3, -1.1 - 2 / 3, 1, 1, 1 / 5, 1 / 5),
       "Non-Bloch band theory benchmark, case 2 (Yokomizo and Murakami 2019)"),
    _p("appC3", "ext2", (0.3, 0.3, 1.1 + 2 / 3, 1.1 - 2 / 3, 1 / 5, 1 / 5),
       "Non-Bloch band theory benchmark, case 3 (Yokomizo and Murakami 2019)"),
    _p("appC4", "ext2", (0.3, 0.3, 1.1 - 2 / 3, 1.1 + 2 / 3, 1 / 5, 1 / 5),
       "Non-Bloch band theory benchmark, case 4 (Yokomizo and Murakami 2019)"),
)}


def get_preset(pid: str) -> FigurePreset:
    try:
        return PRESETS[pid]
    except KeyError:
        raise ConfigError(f"unknown preset {pid!r}; choose from {', '.join(PRESETS)}") from None
