"""Coordinate charts shared by the catalog and the Lagrangian constructions."""

from __future__ import annotations

import numpy as np

from . import taylor as tp
from .geometry import Interval

POLE_MARGIN = 1e-2
TWO_PI = 2.0 * np.pi


def sphere_domain(k: int, margin: float = POLE_MARGIN) -> tuple[Interval, ...]:
    """Hyperspherical coordinates on S^k: k-1 polar angles then one azimuth."""
    polar = tuple(Interval(margin, np.pi - margin) for _ in range(k - 1))
    return polar + (Interval(0.0, TWO_PI, periodic=True),)


def sphere_coords(params, radius=1.0):
    """Unit-sphere coordinates x_1..x_{k+1} from k hyperspherical angles.

    x_1 = cos t_1, x_2 = sin t_1 cos t_2, ..., the last two coordinates use the
    azimuth.  For k = 1 this is (cos s, sin s).
    """
    k = len(params)
    out = []
    prefix = None
    for j in range(k - 1):
        c = tp.cos(params[j])
        out.append(c if prefix is None else prefix * c)
        s = tp.sin(params[j])
        prefix = s if prefix is None else prefix * s
    az = params[-1]
    c, s = tp.cos(az), tp.sin(az)
    out.append(c if prefix is None else prefix * c)
    out.append(s if prefix is None else prefix * s)
    if radius != 1.0:
        out = [radius * x for x in out]
    return out


def complex_to_real(zs):
    """Interleave (Re z_1, Im z_1, Re z_2, ...) as the identification C^n = R^{2n}."""
    out = []
    for z in zs:
        out.append(z.real)
        out.append(z.imag)
    return out


def real_to_complex(xs):
    return [xs[2 * j] + 1j * xs[2 * j + 1] for j in range(len(xs) // 2)]
