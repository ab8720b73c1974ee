"""Lagrangian angle of the Hopf examples: theta grows like n t along the circle
factor and its gradient, turned by J, is the mean curvature.

Run:  python3 demos/lagrangian_angle.py
"""

import numpy as np

from imcf_solitons import catalog_get
from imcf_solitons.geometry import geometry_at
from imcf_solitons.lagrangian import J, angle_gradient_fd, lagrangian_angle

for n in (2, 3, 4):
    imm, _ = catalog_get("hopf_sphere", n=n)
    t = np.linspace(0.0, 1.0, 6)
    u = np.column_stack([t] + [np.full_like(t, 0.7)] * (n - 1))
    theta, jgrad = lagrangian_angle(imm, u)
    slope = np.polyfit(t, np.unwrap(theta), 1)[0]
    gs = geometry_at(imm.jet(u))
    fd = angle_gradient_fd(imm, u)
    print(
        f"hopf_sphere({n}): d theta/dt = {slope:.6f}, |J grad theta - H| = {np.max(np.abs(jgrad - gs.H)):.1e}, "
        f"finite differences {np.max(np.abs(fd + J(gs.H))):.1e}"
    )
