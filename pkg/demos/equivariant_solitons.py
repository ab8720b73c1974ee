"""Build Lagrangian solitons alpha(t) psi(x) from n-th roots of soliton curves.

The root alpha of a soliton curve with velocity n a is a profile whose product
with the round Legendrian sphere is a soliton with velocity a.

Run:  python3 demos/equivariant_solitons.py
"""

import numpy as np

from imcf_solitons.curves import SolitonCurve, sample_curve
from imcf_solitons.lagrangian import equivariant_soliton, lagrangian_residual, pseudoumbilical_residual, root_curve
from imcf_solitons.verifier import scan

CASES = [(2, 0.5, 2.0, 0.0), (3, 1 / 3, 3**1.5, 0.0), (2, 1.0, 1.0, 1.0), (3, -1 / 3, 1.0, 0.0), (3, 2 / 3, 1.0, 1.0)]


def main():
    for n, a, c1, c2 in CASES:
        imm = equivariant_soliton(n, a, c1, c2)
        dom = imm.domain[0]
        alpha = root_curve(sample_curve(SolitonCurve(n * a, c1, c2), np.linspace(dom.lo, dom.hi, 2049)), n)
        rep = scan(imm, a, 10, lemma_samples=32)
        print(
            f"n={n} a={a:+.4f} closed={dom.periodic!s:5s} profile={pseudoumbilical_residual(alpha, n, a):.1e} "
            f"soliton={rep.max_residual:.1e} Kaehler={lagrangian_residual(imm, 5):.1e} ratio={rep.ratio_stats['min']:.4f}"
        )
    # a circle is a valid profile only at a = 1/n
    t = np.linspace(0, 2 * np.pi, 200)
    circle = root_curve(sample_curve(SolitonCurve(1.0, 1.0, 0.0), t), 1)
    for a in (0.5, 1.0):
        print(f"unit circle, n=2, a={a}: profile residual {pseudoumbilical_residual(circle, 2, a):.3f}")


if __name__ == "__main__":
    main()
