"""Print the winding numbers and edge-state split of every preset.

    python demos/figure_table.py
"""
from nhssh import PRESETS, run
from nhssh.report import preset_config


def main():
    print(f"{'preset':7s} {'nu_bar':>6s} {'nu_E_L':>6s} {'nu_E_R':>6s}  left right  solver         distance")
    for pid in PRESETS:
        rep = run(preset_config(pid)).report
        t, e, c = rep["topology"], rep["edges"], rep["charpoly"]
        print(f"{pid:7s} {t['nu_bar']:6d} {t['nu_E_L']:6d} {t['nu_E_R']:6d}  "
              f"{e['n_left']:4d} {e['n_right']:5d}  {c['method']:14s} {c['max_distance']:.1e}")


if __name__ == "__main__":
    main()
