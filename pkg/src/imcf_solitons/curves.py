"""Homothetic soliton curves of the inverse curve shortening flow.

The curves are parametrised by the slope ``theta`` of their tangent line through
a support-type function ``nu`` solving ``nu'' = (a - 1) nu``::

    alpha(theta) = e^{i theta} (-nu'(theta) + i nu(theta))

so that ``alpha' = -a nu e^{i theta}`` and ``alpha'' = -a (nu' + i nu) e^{i theta}``.
Points with ``nu = 0`` are cusps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import taylor as tp
from .errors import CuspPoint

CUSP_TOL = 1e-12
RATIONAL_MAX_DEN = 64
RATIONAL_TOL = 1e-9
ODE_MAX_STEP = 1e-3


@dataclass(frozen=True)
class SolitonCurve:
    a: float
    c1: float
    c2: float

    def __post_init__(self):
        if self.a == 0:
            raise ValueError("velocity a must be nonzero")
        if self.c1 == 0 and self.c2 == 0:
            raise ValueError("(c1, c2) = (0, 0) collapses the curve to the origin")

    @property
    def branch(self) -> str:
        if self.a < 1:
            return "Sub"
        if self.a == 1:
            return "Linear"
        return "Super"

    def nu(self, theta):
        """nu and nu' as functions of theta; accepts arrays or Taylor2 values."""
        a, c1, c2 = self.a, self.c1, self.c2
        if a < 1:
            w = math.sqrt(1.0 - a)
            c, s = tp.cos(w * theta), tp.sin(w * theta)
            return c1 * c + c2 * s, w * (c2 * c - c1 * s)
        if a == 1:
            return c2 * theta + c1, c2 + 0.0 * theta
        w = math.sqrt(a - 1.0)
        c, s = tp.cosh(w * theta), tp.sinh(w * theta)
        return c1 * c + c2 * s, w * (c1 * s + c2 * c)

    def complex_point(self, theta):
        """alpha(theta) as a complex number; works on Taylor2 values too."""
        nu, dnu = self.nu(theta)
        return (tp.cos(theta) + 1j * tp.sin(theta)) * (-dnu + 1j * nu)

    def cusps(self, lo: float, hi: float) -> np.ndarray:
        """Sorted parameters in ``[lo, hi]`` where nu vanishes."""
        a, c1, c2 = self.a, self.c1, self.c2
        if a < 1:
            w = math.sqrt(1.0 - a)
            delta = math.atan2(c2, c1)
            j0 = math.ceil((w * lo - delta - math.pi / 2) / math.pi)
            j1 = math.floor((w * hi - delta - math.pi / 2) / math.pi)
            return np.array([(delta + math.pi / 2 + j * math.pi) / w for j in range(j0, j1 + 1)])
        if a == 1:
            z = [] if c2 == 0 else [-c1 / c2]
        else:
            w = math.sqrt(a - 1.0)
            z = [math.atanh(-c1 / c2) / w] if abs(c1) < abs(c2) else []
        return np.array([t for t in z if lo <= t <= hi])

    def regular_interval(self, lo: float = -2 * math.pi, hi: float = 2 * math.pi, pad: float = 0.05):
        """Longest cusp-free subinterval of ``[lo, hi]``, shrunk by ``pad`` at cusp ends."""
        cuts = self.cusps(lo, hi)
        if cuts.size == 0:
            return lo, hi
        edges = np.concatenate([[lo], cuts, [hi]])
        k = int(np.argmax(np.diff(edges)))
        a, b = edges[k], edges[k + 1]
        margin = pad * (b - a)
        return (a + margin if k > 0 else a), (b - margin if k + 1 < edges.size - 1 else b)


@dataclass(frozen=True)
class CurveJet:
    """Sampled plane curve with its first two derivatives.

    ``alpha``, ``alpha1`` and ``alpha2`` have shape ``(..., 2)``.  ``kappa`` is NaN
    and ``cusp`` True where the velocity vanishes.
    """

    theta: np.ndarray
    alpha: np.ndarray
    alpha1: np.ndarray
    alpha2: np.ndarray
    kappa: np.ndarray
    support: np.ndarray
    cusp: np.ndarray

    @classmethod
    def from_complex(cls, t, z, dz, d2z, support=None):
        t = np.asarray(t, dtype=float)
        z, dz, d2z = (np.broadcast_to(np.asarray(v, dtype=complex), t.shape) for v in (z, dz, d2z))
        speed = np.abs(dz)
        cusp = speed < CUSP_TOL * np.maximum(1.0, np.abs(z))
        with np.errstate(divide="ignore", invalid="ignore"):
            kappa = np.where(cusp, np.nan, np.imag(np.conj(dz) * d2z) / speed**3)
        if support is None:
            support = np.full(t.shape, np.nan)
        as_r2 = lambda v: np.stack([v.real, v.imag], axis=-1)  # noqa: E731
        return cls(t, as_r2(z), as_r2(dz), as_r2(d2z), kappa, np.asarray(support, dtype=float), cusp)

    @property
    def z(self):
        return self.alpha[..., 0] + 1j * self.alpha[..., 1]

    @property
    def dz(self):
        return self.alpha1[..., 0] + 1j * self.alpha1[..., 1]

    @property
    def d2z(self):
        return self.alpha2[..., 0] + 1j * self.alpha2[..., 1]


def nu_eval(a: float, c1: float, c2: float, theta):
    """(nu, nu', nu'') of the branch selected by ``a``."""
    sc = SolitonCurve(a, c1, c2) if (c1 or c2) else None
    theta = np.asarray(theta, dtype=float)
    if sc is None:
        zero = np.zeros_like(theta)
        return zero, zero, zero
    nu, dnu = sc.nu(theta)
    return nu, dnu, (a - 1.0) * nu


def sample_curve(sc: SolitonCurve, theta) -> CurveJet:
    """CurveJet of a family member; cusps are flagged, not raised."""
    theta = np.asarray(theta, dtype=float)
    nu, dnu = sc.nu(theta)
    rot = np.exp(1j * theta)
    z = rot * (-dnu + 1j * nu)
    dz = -sc.a * nu * rot
    d2z = -sc.a * (dnu + 1j * nu) * rot
    return CurveJet.from_complex(theta, z, dz, d2z, support=nu)


def curve_point(sc: SolitonCurve, theta) -> CurveJet:
    cj = sample_curve(sc, theta)
    if np.any(cj.cusp):
        raise CuspPoint(f"|alpha'| vanishes at theta = {cj.theta[cj.cusp]}")
    return cj


def signed_area_rate(cj: CurveJet) -> np.ndarray:
    """<alpha', J alpha> with J the +pi/2 rotation."""
    return np.imag(np.conj(cj.z) * cj.dz)


def icsf_residual(cj: CurveJet, a: float) -> np.ndarray:
    """|a kappa <alpha', J alpha> - |alpha'||."""
    if np.any(cj.cusp):
        raise CuspPoint("icsf residual undefined at a cusp")
    return np.abs(a * cj.kappa * signed_area_rate(cj) - np.abs(cj.dz))


def nu_ode_oracle(a: float, nu0: float, dnu0: float, theta_grid, max_step: float = ODE_MAX_STEP) -> np.ndarray:
    """Classical RK4 for nu'' = (a - 1) nu, starting at ``theta_grid[0]``.

    ``nu0``/``dnu0`` may be arrays to integrate several initial conditions at once.
    """
    grid = np.asarray(theta_grid, dtype=float)
    if np.any(np.diff(grid) <= 0):
        raise ValueError("theta_grid must be strictly increasing")
    k = a - 1.0
    y = np.array([np.asarray(nu0, dtype=float), np.asarray(dnu0, dtype=float)])

    def rhs(y):
        return np.array([y[1], k * y[0]])

    out = [y[0].copy()]
    for t0, t1 in zip(grid[:-1], grid[1:]):
        steps = max(1, math.ceil((t1 - t0) / max_step))
        h = (t1 - t0) / steps
        for _ in range(steps):
            k1 = rhs(y)
            k2 = rhs(y + 0.5 * h * k1)
            k3 = rhs(y + 0.5 * h * k2)
            k4 = rhs(y + h * k3)
            y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        out.append(y[0].copy())
    return np.array(out)


@dataclass(frozen=True)
class FamilyTag:
    kind: str
    m: int | None = None
    k: int | None = None
    radius: float | None = None

    def __str__(self):
        if self.m is not None:
            return f"{self.kind}({self.m},{self.k})"
        return self.kind


def classify_family(a: float, c1: float, c2: float) -> FamilyTag:
    if a == 0:
        raise ValueError("velocity a must be nonzero")
    if a == 1:
        if c2 == 0:
            return FamilyTag("CircleOrigin", radius=abs(c1))
        return FamilyTag("InvoluteOfCircle", radius=abs(c2))
    if a > 1:
        return FamilyTag("LogSpiralFamily")
    s = math.sqrt(1.0 - a)
    frac = Fraction(s).limit_denominator(RATIONAL_MAX_DEN)
    m, k = frac.numerator, frac.denominator
    if m == 0 or m == k or abs(s - m / k) >= RATIONAL_TOL:
        return FamilyTag("Generic")
    return FamilyTag("Epicycloid" if m < k else "Hypocycloid", m=m, k=k)


def closing_period(sc: SolitonCurve) -> float | None:
    """Theta-period after which the curve closes up, if it does."""
    tag = classify_family(sc.a, sc.c1, sc.c2)
    if tag.kind == "CircleOrigin":
        return 2 * math.pi
    if tag.m is not None:
        return 2 * math.pi * tag.k
    return None


def default_theta_range(sc: SolitonCurve) -> tuple[float, float]:
    """Plotting range: one full closing period for cycloids, [-2pi, 2pi] otherwise."""
    tag = classify_family(sc.a, sc.c1, sc.c2)
    if tag.m is not None:
        return 0.0, 2 * math.pi * tag.k
    return -2 * math.pi, 2 * math.pi


def phase_shifted(sc: SolitonCurve, delta: float) -> SolitonCurve:
    """Coefficients of nu(theta + delta); the resulting curve is the original rotated by -delta."""
    if sc.a >= 1:
        raise ValueError("phase shifts are only rigid on the a < 1 branch")
    w = math.sqrt(1.0 - sc.a)
    c, s = math.cos(w * delta), math.sin(w * delta)
    return SolitonCurve(sc.a, sc.c1 * c + sc.c2 * s, sc.c2 * c - sc.c1 * s)
