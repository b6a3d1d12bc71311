"""Dense chain Hamiltonians and Bloch factors.

Sites are interleaved ``A_1, B_1, A_2, B_2, ...``; an odd chain appends
``A_{N+1}`` as the last site.  Row ``A_j`` of the matrix holds the
coefficients of the ``B`` amplitudes in the equation of motion for ``A_j``
and vice versa, so ``H @ psi = E psi`` is the equation of motion itself.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ChainTooShort
from .model import Boundary, ChainSpec, HoppingSet, Kind, Parity

# cell offset between B_j and the A site it couples to, per bond class
OFFSET = {0: 0, 1: 1, 2: 2, -1: -1}


def site_index(cell: int, sublattice: str) -> int:
    """Linear index of ``A_cell`` or ``B_cell`` (cells start at 1)."""
    return 2 * (cell - 1) + (sublattice.upper() == "B")


def _coefficients(h: HoppingSet, b: int) -> tuple[float, float]:
    # (coefficient in the A-row, coefficient in the B-row)
    L, R = h.t[b]
    return (L, R) if b in (0, -1) else (R, L)


def _truncated(h: HoppingSet, n_cells: int, n_a: int) -> np.ndarray:
    dim = n_a + n_cells
    M = np.zeros((dim, dim), dtype=complex)
    for b in h.kind.bonds:
        a_coef, b_coef = _coefficients(h, b)
        for j in range(1, n_cells + 1):
            k = j + OFFSET[b]
            if 1 <= k <= n_a:
                M[site_index(k, "A"), site_index(j, "B")] += a_coef
                M[site_index(j, "B"), site_index(k, "A")] += b_coef
    return M


def _inverted_ext2(h: HoppingSet) -> HoppingSet:
    # Reading an odd type-2 chain from the right end gives an odd type-1 chain:
    # old t0 bonds become t1 bonds, old t1 become t0, old t-1 become t2,
    # with left and right swapped.
    return HoppingSet(Kind.EXT1, {
        0: (h.R(1), h.L(1)),
        1: (h.R(0), h.L(0)),
        2: (h.R(-1), h.L(-1)),
    })


def build_obc(h: HoppingSet, chain: ChainSpec | int) -> np.ndarray:
    """Open-chain Hamiltonian of dimension ``2N`` (even) or ``2N+1`` (odd)."""
    if isinstance(chain, int):
        chain = ChainSpec(chain)
    if chain.boundary is Boundary.PBC:
        return build_pbc(h, chain.n_cells)
    N = chain.n_cells
    if h.kind is not Kind.SSH and N < 2:
        raise ChainTooShort(f"{h.kind.value} chains need at least 2 cells, got {N}")
    if chain.parity is Parity.EVEN:
        return _truncated(h, N, N)
    if h.kind is Kind.EXT2:
        M = _truncated(_inverted_ext2(h), N, N + 1)
        flip = np.arange(2 * N, -1, -1)
        return M[np.ix_(flip, flip)]
    return _truncated(h, N, N + 1)


def build_pbc(h: HoppingSet, n_cells: int) -> np.ndarray:
    """Periodic-chain Hamiltonian: the open chain plus wrap-around hoppings."""
    N = n_cells
    if N < 1:
        raise ChainTooShort("need at least one cell")
    M = np.zeros((2 * N, 2 * N), dtype=complex)
    for b in h.kind.bonds:
        a_coef, b_coef = _coefficients(h, b)
        for j in range(1, N + 1):
            k = (j + OFFSET[b] - 1) % N + 1
            M[site_index(k, "A"), site_index(j, "B")] += a_coef
            M[site_index(j, "B"), site_index(k, "A")] += b_coef
    return M


@dataclass(frozen=True)
class Laurent:
    """Laurent polynomial ``sum_k c[k - kmin] z**k``."""

    kmin: int
    coef: tuple[complex, ...]

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        # Horner on the polynomial part, then shift
        acc = np.zeros_like(z)
        for c in reversed(self.coef):
            acc = acc * z + c
        return acc * z ** self.kmin

    @property
    def kmax(self) -> int:
        return self.kmin + len(self.coef) - 1


@dataclass(frozen=True)
class BlochFactors:
    """The two factors whose product is ``E(p)**2``.

    ``left`` carries the right intra-cell and left inter-cell amplitudes,
    ``right`` the conjugate roles.  Both are Laurent polynomials in
    ``z = exp(ip)``.
    """

    left: Laurent
    right: Laurent

    def f_L(self, p):
        return self.left(np.exp(1j * np.asarray(p, dtype=float)))

    def f_R(self, p):
        return self.right(np.exp(1j * np.asarray(p, dtype=float)))

    def energy_squared(self, p):
        return self.f_L(p) * self.f_R(p)


def bloch_factors(h: HoppingSet) -> BlochFactors:
    """Bloch factors of ``h``; the Bloch matrix is ``[[0, f_R], [f_L, 0]]``."""
    if h.kind is Kind.SSH:
        left = Laurent(0, (h.R(0), h.L(1)))
        right = Laurent(-1, (h.R(1), h.L(0)))
    elif h.kind is Kind.EXT1:
        left = Laurent(0, (h.R(0), h.L(1), h.L(2)))
        right = Laurent(-2, (h.R(2), h.R(1), h.L(0)))
    else:
        left = Laurent(-1, (h.R(-1), h.R(0), h.L(1)))
        right = Laurent(-1, (h.R(1), h.L(0), h.L(-1)))
    return BlochFactors(left, right)


def bloch_matrix(h: HoppingSet, p: float) -> np.ndarray:
    """2x2 Bloch Hamiltonian in the (A, B) basis.

    Its determinant is ``-f_L f_R``; the energy is ``E**2 = f_L f_R``.
    """
    bf = bloch_factors(h)
    return np.array([[0, bf.f_R(p)], [bf.f_L(p), 0]], dtype=complex)


def pbc_spectrum(h: HoppingSet, n_cells: int) -> np.ndarray:
    """All ``2N`` periodic-chain energies, ``+-sqrt(f_L f_R)`` at ``p = 2 pi k / N``."""
    p = 2 * np.pi * np.arange(n_cells) / n_cells
    E = np.sqrt(bloch_factors(h).energy_squared(p).astype(complex))
    return np.concatenate([E, -E])


def export_matrix(M: np.ndarray) -> str:
    """Plain-text dump: ``dim`` then ``row col re im`` per nonzero entry."""
    lines = [str(M.shape[0])]
    for i, j in zip(*np.nonzero(M)):
        lines.append(f"{i} {j} {float(M[i, j].real)!r} {float(M[i, j].imag)!r}")
    return "\n".join(lines) + "\n"


def import_matrix(text: str) -> np.ndarray:
    rows = text.split("\n")
    dim = int(rows[0])
    M = np.zeros((dim, dim), dtype=complex)
    for line in rows[1:]:
        if line.strip():
            i, j, re, im = line.split()
            M[int(i), int(j)] = complex(float(re), float(im))
    return M


def sublattice_mask(dim: int) -> np.ndarray:
    """Boolean mask of A sites for a chain of ``dim`` sites."""
    return np.arange(dim) % 2 == 0


def cell_of_site(dim: int) -> np.ndarray:
    return np.arange(dim) // 2 + 1

