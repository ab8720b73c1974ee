"""Draw the named members of the soliton curve family as SVG files.

Run:  python3 demos/curve_family.py [output directory]
"""

import sys
from pathlib import Path

import numpy as np

from imcf_solitons.curves import SolitonCurve, classify_family, default_theta_range, icsf_residual, sample_curve
from imcf_solitons.export import curve_samples, curve_svg

MEMBERS = {
    "circle": (1.0, 2.0, 0.0),
    "involute": (1.0, 0.0, 1.0),
    "epicycloid": (0.75, 1.0, 0.0),
    "hypocycloid": (-1.25, 1.0, 0.0),
    "log_spiral": (2.0, 1.0, 1.0),
}


def main(out="demo_output/curves"):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    for label, (a, c1, c2) in MEMBERS.items():
        sc = SolitonCurve(a, c1, c2)
        lo, hi = default_theta_range(sc)
        cj = curve_samples(sc, lo, hi, 2001)
        regular = sample_curve(sc, cj.theta[~cj.cusp])
        worst = np.max(icsf_residual(regular, a))
        path = out / f"{label}.svg"
        path.write_text(curve_svg(cj, title=f"{label} a={a:g}"))
        print(f"{label:12s} {str(classify_family(a, c1, c2)):32s} cusps={int(cj.cusp.sum()):2d} residual={worst:.1e} -> {path}")


if __name__ == "__main__":
    main(*sys.argv[1:2])
