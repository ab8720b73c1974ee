"""Small explicit integrators for the inverse mean curvature flow.

Spheres are integrated by their exact radius law.  Strictly convex closed
polygons move each vertex along the outward normal of the circle through it
and its two neighbours, with speed equal to that circle's radius (1/kappa).

The polygon scheme is stiff: linearised about a regular N-gon it behaves like
a heat equation in the normal angle, so plain forward Euler needs
dt < (2 pi / N)^2 / 2.  Each time step is therefore split into ``s`` forward
Euler substeps whose lengths are the reciprocals of the Chebyshev roots
(super-time-stepping).  The step stays explicit and first order, and its
stability interval grows to ``2 s^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.spatial.distance import directed_hausdorff

from .errors import ConvexityLost

DT_PER_RADIUS = 1e-4
REDISTRIBUTE_EVERY = 100
MIN_STAGES = 2
STABILITY_SAFETY = 0.8


def flow_sphere(n: int, r0: float, t):
    """Radius r0 e^{t/n} of a round n-sphere, the solution of r' = r/n."""
    if r0 <= 0:
        raise ValueError("radius must be positive")
    return r0 * np.exp(np.asarray(t, dtype=float) / n)


@dataclass(frozen=True)
class FlowState:
    time: float
    dt: float
    method: str = "ConvexCurve"
    curve: np.ndarray | None = None
    radius: float | None = None
    snapshots: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.method == "SphereODE":
            if self.radius is None or self.radius <= 0:
                raise ValueError("SphereODE needs a positive radius")
        elif self.method == "ConvexCurve":
            if self.curve is None or not is_strictly_convex(self.curve):
                raise ConvexityLost("polygon is not strictly convex")
        else:
            raise ValueError(f"unknown method {self.method!r}")


def circle_polygon(radius: float = 1.0, count: int = 512) -> np.ndarray:
    t = 2 * np.pi * np.arange(count) / count
    return radius * np.stack([np.cos(t), np.sin(t)], axis=-1)


def ellipse_polygon(a: float, b: float, count: int = 512) -> np.ndarray:
    t = 2 * np.pi * np.arange(count) / count
    return np.stack([a * np.cos(t), b * np.sin(t)], axis=-1)


def _edge_cross(pts):
    e = np.roll(pts, -1, axis=0) - pts
    e_next = np.roll(e, -1, axis=0)
    return e[:, 0] * e_next[:, 1] - e[:, 1] * e_next[:, 0]


def is_strictly_convex(pts) -> bool:
    cross = _edge_cross(np.asarray(pts, dtype=float))
    return bool(np.all(cross > 0) or np.all(cross < 0))


def circumcenters(pts):
    """Centres and radii of the circles through consecutive vertex triples."""
    prev, nxt = np.roll(pts, 1, axis=0), np.roll(pts, -1, axis=0)
    b = prev - pts
    c = nxt - pts
    bb = np.einsum("ij,ij->i", b, b)
    cc = np.einsum("ij,ij->i", c, c)
    d = 2.0 * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
    off = np.stack([(c[:, 1] * bb - b[:, 1] * cc) / d, (b[:, 0] * cc - c[:, 0] * bb) / d], axis=-1)
    return pts + off, np.linalg.norm(off, axis=-1)


def redistribute(pts) -> np.ndarray:
    """Resample a closed polygon at equal arc length, keeping the first vertex."""
    closed = np.vstack([pts, pts[:1]])
    seg = np.linalg.norm(np.diff(closed, axis=0), axis=-1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    target = s[-1] * np.arange(len(pts)) / len(pts)
    return np.stack([np.interp(target, s, closed[:, k]) for k in range(2)], axis=-1)


def chebyshev_substeps(stages: int) -> np.ndarray:
    """Fractions of a time step whose Euler factors multiply to T_s(1 + z / s^2)."""
    k = np.arange(1, stages + 1)
    roots = np.cos((2 * k - 1) * np.pi / (2 * stages))
    return np.sort(1.0 / (stages**2 * (1.0 - roots)))


def stiffness(pts) -> float:
    """Largest eigenvalue estimate of the linearised polygon flow, 4 max (R_j / l_j)^2."""
    _, radii = circumcenters(pts)
    edges = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=-1)
    shortest = np.minimum(edges, np.roll(edges, 1))
    return float(4.0 * np.max((radii / shortest) ** 2))


def stages_for(dt: float, pts) -> int:
    need = dt * stiffness(pts) / (2.0 * STABILITY_SAFETY)
    return max(MIN_STAGES, math.ceil(math.sqrt(need)))


def flow_convex_curve(
    state: FlowState,
    T: float,
    redistribute_every: int | None = REDISTRIBUTE_EVERY,
    snapshot_every: int | None = None,
    stages: int | None = None,
) -> FlowState:
    """Advance a strictly convex polygon to time ``state.time + T``.

    ``stages`` fixes the number of Euler substeps per step; by default the
    smallest count (at least two) that is stable for the initial polygon.
    """
    if state.method != "ConvexCurve":
        raise ValueError("flow_convex_curve needs a ConvexCurve state")
    pts = np.array(state.curve, dtype=float)
    _, radii = circumcenters(pts)
    if state.dt > DT_PER_RADIUS * radii.min() * (1 + 1e-6):
        raise ValueError(f"dt must not exceed {DT_PER_RADIUS:g} x minimal radius of curvature ({radii.min():.4g})")
    if not is_strictly_convex(pts):
        raise ConvexityLost("initial polygon is not strictly convex")
    steps = max(1, round(T / state.dt))
    dt = T / steps
    fractions = chebyshev_substeps(stages or stages_for(dt, pts))
    snaps = list(state.snapshots)
    t = state.time
    if snapshot_every:
        snaps.append((t, pts.copy()))
    for k in range(1, steps + 1):
        for frac in fractions:
            centers, _ = circumcenters(pts)
            # outward displacement of length radius * (frac * dt)
            pts = pts + (frac * dt) * (pts - centers)
        t = state.time + k * dt
        if not is_strictly_convex(pts):
            raise ConvexityLost(f"convexity lost at t = {t:.6g}")
        if redistribute_every and k % redistribute_every == 0:
            pts = redistribute(pts)
        if snapshot_every and (k % snapshot_every == 0 or k == steps):
            snaps.append((t, pts.copy()))
    return replace(state, time=t, curve=pts, snapshots=tuple(snaps))


def _rotate(pts, angle):
    c, s = math.cos(angle), math.sin(angle)
    return pts @ np.array([[c, s], [-s, c]])


def _hausdorff(p, q):
    return max(directed_hausdorff(p, q)[0], directed_hausdorff(q, p)[0])


def diameter(pts) -> float:
    pts = np.asarray(pts)
    d = pts[:, None, :] - pts[None, :, :]
    return float(np.sqrt(np.max(np.einsum("ijk,ijk->ij", d, d))))


def homothety_deviation(curve0, curveT, a: float, T: float) -> float:
    """Hausdorff distance between e^{aT} curve0 and curveT, best rotation about the origin.

    Normalised by half the diameter of the rescaled reference, i.e. by its radius
    for a circle.
    """
    ref = np.exp(a * T) * np.asarray(curve0, dtype=float)
    cur = np.asarray(curveT, dtype=float)
    angles = np.linspace(-np.pi, np.pi, 73)
    vals = [_hausdorff(_rotate(ref, t), cur) for t in angles]
    k = int(np.argmin(vals))
    step = angles[1] - angles[0]
    res = minimize_scalar(
        lambda t: _hausdorff(_rotate(ref, t), cur),
        bounds=(angles[k] - step, angles[k] + step),
        method="bounded",
        options={"xatol": 1e-10},
    )
    best = min(vals[k], res.fun)
    return float(best / (0.5 * diameter(ref)))


def isoperimetric_ratio(pts) -> float:
    """4 pi A / L^2, equal to 1 only for circles."""
    pts = np.asarray(pts)
    x, y = pts[:, 0], pts[:, 1]
    area = 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))
    length = np.sum(np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=-1))
    return float(4 * np.pi * area / length**2)
