"""Flow a circle and an ellipse by inverse mean curvature and save SVG frames.

The circle stays a circle of radius e^t; the ellipse grows rounder.

Run:  python3 demos/flow_circle.py [output directory]
"""

import math
import sys
from pathlib import Path

from imcf_solitons.export import flow_svg_frames
from imcf_solitons.flow import (
    FlowState,
    circle_polygon,
    ellipse_polygon,
    flow_convex_curve,
    homothety_deviation,
    isoperimetric_ratio,
)


def main(out="demo_output/flow"):
    out = Path(out)
    circle = FlowState(0.0, 1e-4, curve=circle_polygon(1.0, 256))
    end = flow_convex_curve(circle, 1.0, snapshot_every=2000)
    print(f"circle: deviation from e * circle {homothety_deviation(circle.curve, end.curve, 1.0, 1.0):.2e}, e = {math.e:.6f}")
    flow_svg_frames(end.snapshots, out / "circle")

    ellipse = FlowState(0.0, 6e-5, curve=ellipse_polygon(1.5, 1.0, 256))
    end = flow_convex_curve(ellipse, 0.6, snapshot_every=2500)
    for t, pts in end.snapshots:
        print(f"ellipse t={t:.2f}: isoperimetric ratio {isoperimetric_ratio(pts):.6f}")
    flow_svg_frames(end.snapshots, out / "ellipse")
    print("frames written to", out)


if __name__ == "__main__":
    main(*sys.argv[1:2])
