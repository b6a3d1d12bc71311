"""Static SVG scatter and bar plots with deterministic output."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

WIDTH, HEIGHT, PAD = 420, 300, 40
A_COLOR, B_COLOR = "#1f77b4", "#d62728"


def _f(x: float) -> str:
    return f"{x:.2f}"


@dataclass
class _Frame:
    x0: float
    y0: float
    w: float
    h: float
    xlim: tuple[float, float]
    ylim: tuple[float, float]
    parts: list[str] = field(default_factory=list)

    def X(self, x):
        lo, hi = self.xlim
        return self.x0 + (np.asarray(x) - lo) / (hi - lo) * self.w

    def Y(self, y):
        lo, hi = self.ylim
        return self.y0 + self.h - (np.asarray(y) - lo) / (hi - lo) * self.h

    def axes(self, title: str, xlabel: str, ylabel: str):
        p = self.parts
        p.append(f'<rect x="{_f(self.x0)}" y="{_f(self.y0)}" width="{_f(self.w)}" '
                 f'height="{_f(self.h)}" fill="none" stroke="#444"/>')
        p.append(f'<text x="{_f(self.x0 + self.w / 2)}" y="{_f(self.y0 - 8)}" '
                 f'text-anchor="middle" font-size="12">{title}</text>')
        p.append(f'<text x="{_f(self.x0 + self.w / 2)}" y="{_f(self.y0 + self.h + 28)}" '
                 f'text-anchor="middle" font-size="11">{xlabel}</text>')
        p.append(f'<text x="{_f(self.x0 - 28)}" y="{_f(self.y0 + self.h / 2)}" '
                 f'text-anchor="middle" font-size="11" transform="rotate(-90 {_f(self.x0 - 28)} '
                 f'{_f(self.y0 + self.h / 2)})">{ylabel}</text>')
        for v, anchor in ((self.xlim[0], "start"), (self.xlim[1], "end")):
            p.append(f'<text x="{_f(self.X(v))}" y="{_f(self.y0 + self.h + 13)}" '
                     f'text-anchor="{anchor}" font-size="9">{v:.3g}</text>')
        for v, dy in ((self.ylim[0], 0), (self.ylim[1], 9)):
            p.append(f'<text x="{_f(self.x0 - 3)}" y="{_f(self.Y(v) + dy)}" '
                     f'text-anchor="end" font-size="9">{v:.3g}</text>')


def _limits(values) -> tuple[float, float]:
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    if v.size == 0:
        return -1.0, 1.0
    lo, hi = float(v.min()), float(v.max())
    span = hi - lo
    if span <= 1e-12 * max(1.0, abs(hi)):
        span = max(1.0, abs(hi))
        return lo - span / 2, hi + span / 2
    return lo - 0.05 * span, hi + 0.05 * span


def _document(width: float, height: float, parts: list[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" height="{_f(height)}" '
            f'viewBox="0 0 {_f(width)} {_f(height)}">')
    return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>', *parts, "</svg>"]) + "\n"


def spectrum_plot(energies, title: str = "spectrum", loop=None, highlight=()) -> str:
    """Complex-plane scatter of ``energies``, optionally over a closed ``loop``."""
    E = np.asarray(energies, dtype=complex)
    pts = E if loop is None else np.concatenate([E, np.asarray(loop, dtype=complex)])
    fr = _Frame(PAD + 10, PAD, WIDTH - 2 * PAD, HEIGHT - 2 * PAD - 10,
                _limits(pts.real), _limits(pts.imag))
    fr.axes(title, "Re E", "Im E")
    if loop is not None:
        L = np.asarray(loop, dtype=complex)
        # the square-root branch jumps along the loop, so draw it as dots
        for x, y in zip(fr.X(L.real), fr.Y(L.imag)):
            fr.parts.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="0.8" fill="#999"/>')
    marked = set(int(k) for k in highlight)
    for k, (x, y) in enumerate(zip(fr.X(E.real), fr.Y(E.imag))):
        color = B_COLOR if k in marked else A_COLOR
        fr.parts.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="2.5" fill="{color}"/>')
    return _document(WIDTH, HEIGHT, fr.parts)


def wavefunction_plot(vectors, titles) -> str:
    """One panel per vector showing ``|psi|`` on each site, colored by sublattice."""
    vecs = [np.abs(np.asarray(v)) for v in vectors]
    if not vecs:
        return _document(WIDTH, 60, ['<text x="10" y="30" font-size="12">no edge states</text>'])
    ph = HEIGHT - 60
    parts: list[str] = []
    for n, (amp, title) in enumerate(zip(vecs, titles)):
        fr = _Frame(PAD + 10, PAD + n * (ph + PAD), WIDTH - 2 * PAD, ph - 20,
                    (0.5, len(amp) + 0.5), (0.0, max(float(amp.max()), 1e-300) * 1.05))
        fr.axes(title, "site", "|psi|")
        bw = max(fr.w / len(amp) * 0.8, 0.5)
        base = fr.Y(0.0)
        for site, a in enumerate(amp, start=1):
            top = fr.Y(a)
            color = A_COLOR if (site - 1) % 2 == 0 else B_COLOR
            fr.parts.append(f'<rect x="{_f(fr.X(site) - bw / 2)}" y="{_f(top)}" width="{_f(bw)}" '
                            f'height="{_f(base - top)}" fill="{color}"/>')
        parts.extend(fr.parts)
    return _document(WIDTH, len(vecs) * (ph + PAD) + PAD, parts)
