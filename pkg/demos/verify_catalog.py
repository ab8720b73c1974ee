"""Scan every catalog soliton against the soliton equation and print a table.

Run:  python3 demos/verify_catalog.py [grid]
"""

import sys

from imcf_solitons import catalog_get, scan
from imcf_solitons.curves import SolitonCurve

ENTRIES = [
    ("round_sphere", {"n": 2}),
    ("clifford", {"n1": 1, "n2": 2}),
    ("circles_product", {"n": 3}),
    ("hopf_sphere", {"n": 3}),
    ("cylinder_circles", {"n": 3, "k": 1}),
    ("curve_cylinder", {"sc": SolitonCurve(0.75, 1.0, 0.0), "n": 2}),
    ("veronese", {}),
]


def main(grid=12):
    print(f"{'entry':44s} {'a':>7s} {'max residual':>13s} {'ratio':>8s} {'lemma gap':>10s}")
    for name, params in ENTRIES:
        imm, facts = catalog_get(name, **params)
        rep = scan(imm, facts.velocity_a, grid, lemma_samples=64)
        print(
            f"{imm.name:44s} {facts.velocity_a:7.4f} {rep.max_residual:13.2e} "
            f"{rep.ratio_stats['mean']:8.5f} {rep.lemma_b_max_dev:10.2e}"
        )
    # the same sphere at the wrong velocity is rejected by a wide margin
    imm, _ = catalog_get("round_sphere", n=2)
    print("round_sphere(2) at a = 1:", f"{scan(imm, 1.0, grid, lemma_samples=0).max_residual:.3f}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 12)
