"""Walk across the type-1 phase diagram and compare with dense diagonalization.

For a quasi-Hermitian chain the number of near-zero energies is twice the
modified winding number; the sweep crosses the boundary tbar1 = tbar0 + tbar2.

    python demos/phase_sweep.py
"""
import numpy as np

from nhssh import CriticalPoint, build_obc, eigendecompose, from_effective, solve_chain
from nhssh import effective_params, matching_distance, modified_winding


def main():
    tbar0, tbar2, r = 0.5, 1.5, 0.7
    print(" tbar1  nu_bar  near-zero  charpoly-vs-dense")
    for tbar1 in np.linspace(0.5, 3.5, 13):
        h = from_effective("ext1", (tbar0, tbar1, tbar2), r)
        try:
            nu = modified_winding(effective_params(h))
        except CriticalPoint:
            print(f"{tbar1:6.2f}  boundary")
            continue
        E = eigendecompose(build_obc(h, 30), want_vectors=False).values
        near_zero = int(np.sum(np.abs(E) < 1e-3))
        dist = matching_distance(solve_chain(h, 30).energies, E)[0]
        print(f"{tbar1:6.2f}  {nu:6d}  {near_zero:9d}  {dist:.1e}")


if __name__ == "__main__":
    main()
