"""Lagrangian constructions in C^n = R^{2n}.

Coordinates are paired as ``(Re z_1, Im z_1, Re z_2, ...)`` and the complex
structure acts blockwise as multiplication by ``i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import taylor as tp
from .charts import TWO_PI, complex_to_real, real_to_complex, sphere_coords, sphere_domain
from .curves import CurveJet, SolitonCurve, classify_family, signed_area_rate
from .errors import (
    ArgumentJumpTooLarge,
    CurveThroughOrigin,
    DimensionMismatch,
    NonRegularFactor,
    NotLagrangian,
)
from .geometry import DEFAULT_FD_STEP, Immersion, Interval, geometry_at
from .taylor import Taylor2
from .verifier import sample_grid

ORIGIN_TOL = 1e-12
REGULAR_TOL = 1e-12
MINIMALITY_TOL = 1e-8
LAGRANGIAN_TOL = 1e-8
MAX_ARG_JUMP = math.pi / 2


class ComplexStructure:
    """Multiplication by i on R^{2n}, acting on the trailing axis."""

    def __init__(self, n: int):
        self.n = n

    def __call__(self, v):
        v = np.asarray(v)
        if v.shape[-1] != 2 * self.n:
            raise DimensionMismatch(f"expected trailing dimension {2 * self.n}")
        pairs = v.reshape(v.shape[:-1] + (self.n, 2))
        out = np.stack([-pairs[..., 1], pairs[..., 0]], axis=-1)
        return out.reshape(v.shape)

    def matrix(self) -> np.ndarray:
        # columns are the images of the standard basis
        return self(np.eye(2 * self.n)).T


def J(v) -> np.ndarray:
    v = np.asarray(v)
    return ComplexStructure(v.shape[-1] // 2)(v)


# plane curves ---------------------------------------------------------------


@dataclass(frozen=True)
class PlaneCurve:
    """Plane curve given by a complex-valued formula of one parameter."""

    domain: Interval
    formula: Callable
    name: str = ""

    def samples(self, t) -> CurveJet:
        t = np.asarray(t, dtype=float)
        (var,) = Taylor2.variables(t[..., None])
        z = self.formula(var)
        if not isinstance(z, Taylor2):
            z = var._lift(z)
        return CurveJet.from_complex(t, z.val, z.grad[..., 0], z.hess[..., 0, 0])

    def default_samples(self, count: int = 513) -> CurveJet:
        iv = self.domain
        t = iv.lo + iv.length * np.arange(count) / count if iv.periodic else np.linspace(iv.lo, iv.hi, count)
        return self.samples(t)


def circle(radius: float = 1.0) -> PlaneCurve:
    return PlaneCurve(Interval(0.0, TWO_PI, periodic=True), lambda t: radius * (tp.cos(t) + 1j * tp.sin(t)), "circle")


def line(half_length: float = 1.0) -> PlaneCurve:
    return PlaneCurve(Interval(-half_length, half_length), lambda t: t + 0j, "line")


def soliton_plane_curve(sc: SolitonCurve, theta_range=None) -> PlaneCurve:
    """Family member as a PlaneCurve; by default on its longest cusp-free piece of [-2pi, 2pi]."""
    if theta_range is None:
        if classify_family(sc.a, sc.c1, sc.c2).kind == "CircleOrigin":
            return PlaneCurve(Interval(0.0, TWO_PI, periodic=True), sc.complex_point, "circle")
        theta_range = sc.regular_interval()
    return PlaneCurve(Interval(*theta_range), sc.complex_point, "soliton")


def _check_curve(curve: PlaneCurve, count: int = 513):
    cj = curve.default_samples(count)
    if np.any(np.abs(cj.z) < ORIGIN_TOL):
        raise CurveThroughOrigin(f"curve {curve.name!r} passes through the origin")
    if np.any(np.abs(cj.dz) < REGULAR_TOL):
        raise NonRegularFactor(f"curve {curve.name!r} is not regular")


# Legendrian immersions ------------------------------------------------------


def spherical_tangential_curvature(imm: Immersion, u) -> np.ndarray:
    """Norm of the part of H tangent to the sphere through phi (zero iff spherically minimal)."""
    gs = geometry_at(imm.jet(u))
    p = gs.position
    radial = np.einsum("...m,...m->...", gs.H, p) / np.einsum("...m,...m->...", p, p)
    return np.linalg.norm(gs.H - radial[..., None] * p, axis=-1)


@dataclass(frozen=True)
class LegendrianImmersion:
    immersion: Immersion
    minimal: bool = False

    def __post_init__(self):
        imm = self.immersion
        if imm.ambient_dim % 2 or imm.intrinsic_dim != imm.ambient_dim // 2 - 1:
            raise DimensionMismatch("a Legendrian in S^{2n-1} has dimension n-1")
        if self.minimal:
            pts = sample_grid(imm.domain, (8,) * imm.intrinsic_dim)
            worst = float(np.max(spherical_tangential_curvature(imm, pts)))
            if worst > MINIMALITY_TOL:
                raise ValueError(f"declared minimal but tangential mean curvature reaches {worst:.3g}")

    @property
    def n(self) -> int:
        return self.immersion.ambient_dim // 2


def legendrian_sphere(n: int) -> LegendrianImmersion:
    """Totally geodesic S^{n-1} of real points in S^{2n-1}."""
    if n < 2:
        raise ValueError("n >= 2 required")

    def formula(params):
        return complex_to_real(sphere_coords(params))

    imm = Immersion(n - 1, 2 * n, sphere_domain(n - 1), formula, f"legendrian_sphere({n})")
    return LegendrianImmersion(imm, minimal=True)


def legendrian_torus(n: int) -> LegendrianImmersion:
    """Flat minimal Legendrian torus (e^{ix_1}, ..., e^{ix_{n-1}}, e^{-i(x_1+...+x_{n-1})}) / sqrt(n)."""
    if n < 2:
        raise ValueError("n >= 2 required")
    r = 1.0 / math.sqrt(n)

    def formula(params):
        total = params[0]
        for p in params[1:]:
            total = total + p
        zs = [r * (tp.cos(p) + 1j * tp.sin(p)) for p in params]
        zs.append(r * (tp.cos(total) - 1j * tp.sin(total)))
        return complex_to_real(zs)

    dom = tuple(Interval(0.0, TWO_PI, periodic=True) for _ in range(n - 1))
    return LegendrianImmersion(Immersion(n - 1, 2 * n, dom, formula, f"legendrian_torus({n})"), minimal=True)


# residuals -----------------------------------------------------------------


def _grid_points(imm: Immersion, grid):
    n = imm.intrinsic_dim
    counts = (grid,) * n if np.isscalar(grid) else tuple(grid)
    return sample_grid(imm.domain, counts).reshape(-1, n)


def lagrangian_residual(imm: Immersion, grid=16) -> float:
    """max |<J d_i phi, d_j phi>| / (|d_i phi| |d_j phi|) over the grid."""
    if imm.ambient_dim != 2 * imm.intrinsic_dim:
        raise DimensionMismatch("Lagrangian needs ambient_dim == 2 * intrinsic_dim")
    return float(np.max(_omega_normalized(imm.jet(_grid_points(imm, grid)).d1)))


def _omega_normalized(d1):
    omega = np.einsum("...im,...jm->...ij", J(d1), d1)
    lengths = np.linalg.norm(d1, axis=-1)
    return np.abs(omega) / (lengths[..., :, None] * lengths[..., None, :])


def legendrian_residual(psi, grid=16) -> float:
    """max of ||psi| - 1| and |<d_i psi, J psi>| / |d_i psi| over the grid."""
    imm = psi.immersion if isinstance(psi, LegendrianImmersion) else psi
    if imm.ambient_dim % 2:
        raise DimensionMismatch("ambient space must be even dimensional")
    jet = imm.jet(_grid_points(imm, grid))
    radial = np.abs(np.linalg.norm(jet.position, axis=-1) - 1.0)
    contact = np.einsum("...im,...m->...i", jet.d1, J(jet.position)) / np.linalg.norm(jet.d1, axis=-1)
    return float(max(radial.max(), np.abs(contact).max()))


# constructions -------------------------------------------------------------


def hopf_product(alpha: PlaneCurve, psi: LegendrianImmersion) -> Immersion:
    """The immersion (t, x) -> alpha(t) psi(x) in C^n."""
    _check_curve(alpha)
    n = psi.n
    psi_formula = psi.immersion.formula

    def formula(params):
        z = alpha.formula(params[0])
        ws = real_to_complex(psi_formula(params[1:]))
        return complex_to_real([z * w for w in ws])

    name = f"hopf_product({alpha.name}, {psi.immersion.name})"
    return Immersion(n, 2 * n, (alpha.domain,) + psi.immersion.domain, formula, name)


def product_immersion(curves: Sequence[PlaneCurve]) -> Immersion:
    """(s_1, ..., s_n) -> (alpha_1(s_1), ..., alpha_n(s_n)) in C^n."""
    for c in curves:
        # lines through the origin are legitimate factors, so only regularity is checked
        if np.any(np.abs(c.default_samples().dz) < REGULAR_TOL):
            raise NonRegularFactor(f"curve {c.name!r} is not regular")
    n = len(curves)

    def formula(params):
        return complex_to_real([c.formula(p) for c, p in zip(curves, params)])

    name = "product(" + ", ".join(c.name for c in curves) + ")"
    return Immersion(n, 2 * n, tuple(c.domain for c in curves), formula, name)


def unwrap_argument(z) -> np.ndarray:
    """Continuous argument along a sampled curve, anchored at the principal value of z[0]."""
    z = np.asarray(z)
    if np.any(np.abs(z) < ORIGIN_TOL):
        raise CurveThroughOrigin("curve passes through the origin")
    ang = np.angle(z)
    step = np.angle(z[1:] / z[:-1])
    if np.any(np.abs(step) > MAX_ARG_JUMP):
        raise ArgumentJumpTooLarge("adjacent samples differ in argument by more than pi/2; resample")
    return ang[0] + np.concatenate([[0.0], np.cumsum(step)])


def _complex_power(cj: CurveJet, p: float) -> CurveJet:
    z, dz, d2z = cj.z, cj.dz, cj.d2z
    arg = unwrap_argument(z)
    w = np.exp(p * (np.log(np.abs(z)) + 1j * arg))
    r1 = dz / z
    dw = p * w * r1
    d2w = p * w * ((p - 1.0) * r1 * r1 + d2z / z)
    return CurveJet.from_complex(cj.theta, w, dw, d2w)


def power_curve(cj: CurveJet, n: int) -> CurveJet:
    """beta = alpha^n with jets by the chain rule; ``cusp`` flags non-regular samples."""
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    return _complex_power(cj, float(n))


def root_curve(cj: CurveJet, n: int) -> CurveJet:
    """Continuous n-th root, branch fixed by the principal argument at the first sample."""
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    return _complex_power(cj, 1.0 / n)


def pseudoumbilical_deviation(cj: CurveJet, n: int, a: float) -> np.ndarray:
    """Signed a<a',Ja>(|a'| k + (n-1)<a',Ja>/|a|^2) - |a'|^2 along the curve a."""
    if np.any(np.abs(cj.z) < ORIGIN_TOL):
        raise CurveThroughOrigin("curve passes through the origin")
    w = signed_area_rate(cj)
    speed = np.abs(cj.dz)
    return a * w * (speed * cj.kappa + (n - 1) * w / np.abs(cj.z) ** 2) - speed**2


def pseudoumbilical_residual(cj: CurveJet, n: int, a: float) -> float:
    return float(np.max(np.abs(pseudoumbilical_deviation(cj, n, a))))


def beta_deviation(cj_beta: CurveJet, n: int, a: float) -> np.ndarray:
    """Signed n a <b',Jb> k_b - |b'| for b = alpha^n."""
    return n * a * signed_area_rate(cj_beta) * cj_beta.kappa - np.abs(cj_beta.dz)


def beta_deviation_rescaled(cj_alpha: CurveJet, n: int, a: float) -> np.ndarray:
    """The beta-route deviation mapped onto the scale of :func:`pseudoumbilical_deviation`.

    With b = alpha^n one has |b'| = n |alpha|^{n-1} |alpha'| and both equations
    differ by the factor |b'| / (n^2 |alpha|^{2n-2}), so the two numbers agree
    for any regular alpha, soliton or not.
    """
    beta = power_curve(cj_alpha, n)
    r = np.abs(cj_alpha.z)
    return beta_deviation(beta, n, a) * np.abs(beta.dz) / (n * n * r ** (2 * n - 2))


class _RootBranch:
    """Continuous argument of a soliton curve, tabulated for branch selection."""

    def __init__(self, sc: SolitonCurve, lo: float, hi: float, count: int = 4097):
        self.sc = sc
        self.grid = np.linspace(lo, hi, count)
        self.table = unwrap_argument(sc.complex_point(self.grid))

    def __call__(self, theta_val, z_val):
        ang = np.angle(z_val)
        ref = np.interp(theta_val, self.grid, self.table)
        return ang + TWO_PI * np.round((ref - ang) / TWO_PI)


def equivariant_soliton(n: int, a: float, c1: float, c2: float, theta_range=None) -> Immersion:
    """SO(n)-equivariant Lagrangian soliton with velocity ``a``.

    Built as alpha(theta) x with alpha the continuous n-th root of the soliton
    curve of velocity ``n a``, and x on the round S^{n-1}.  The closed case
    ``n a = 1, c2 = 0`` is periodic in theta with period 2 pi n.
    """
    if n < 2:
        raise ValueError("n >= 2 required")
    sc = SolitonCurve(n * a, c1, c2)
    if classify_family(sc.a, c1, c2).kind == "CircleOrigin":
        dom = Interval(0.0, n * TWO_PI, periodic=True)
    else:
        dom = Interval(*(theta_range or sc.regular_interval(-math.pi, math.pi)))
    branch = _RootBranch(sc, dom.lo, dom.hi)

    def root(theta):
        beta = sc.complex_point(theta)
        arg = branch(tp.value(theta), tp.value(beta))
        return tp.exp(tp.log(beta, branch=arg) / n)

    alpha = PlaneCurve(dom, root, f"root{n}(soliton a={sc.a:g})")
    imm = hopf_product(alpha, legendrian_sphere(n))
    return Immersion(imm.intrinsic_dim, imm.ambient_dim, imm.domain, imm.formula, f"equivariant(n={n}, a={a:g})")


# Lagrangian angle ------------------------------------------------------------


def _frame_matrix(d1):
    # Z[..., j, k] = complex coordinate j of the k-th tangent vector
    zc = d1[..., 0::2] + 1j * d1[..., 1::2]
    return np.swapaxes(zc, -1, -2)


def lagrangian_angle(imm: Immersion, u):
    """Lagrangian angle arg det(d_1 phi, ..., d_n phi) and the ambient vector J grad(theta).

    The gradient is exact: d_l theta = Im tr(Z^{-1} d_l Z) with Z the complex
    tangent frame.  For a Lagrangian immersion J grad(theta) equals H.
    """
    n = imm.intrinsic_dim
    if imm.ambient_dim != 2 * n:
        raise DimensionMismatch("Lagrangian needs ambient_dim == 2 * intrinsic_dim")
    jet = imm.jet(u)
    if np.max(_omega_normalized(jet.d1)) > LAGRANGIAN_TOL:
        raise NotLagrangian("Kaehler form does not vanish on the tangent space")
    z = _frame_matrix(jet.d1)
    theta = np.mod(np.angle(np.linalg.det(z)), TWO_PI)
    zinv = np.linalg.inv(z)
    dz = np.stack([_frame_matrix(jet.d2[..., l, :, :]) for l in range(n)], axis=-3)
    dtheta = np.imag(np.einsum("...jk,...lkj->...l", zinv, dz))
    gram = np.einsum("...im,...jm->...ij", jet.d1, jet.d1)
    grad = np.einsum("...kl,...l,...km->...m", np.linalg.inv(gram), dtheta, jet.d1)
    return theta, J(grad)


def angle_gradient_fd(imm: Immersion, u, h: float = DEFAULT_FD_STEP) -> np.ndarray:
    """Ambient gradient of the Lagrangian angle from central differences of theta."""
    u = np.asarray(u, dtype=float)
    n = imm.intrinsic_dim
    e = np.eye(n) * h
    d = np.empty(u.shape[:-1] + (n,))
    for i in range(n):
        tp_, _ = lagrangian_angle(imm, u + e[i])
        tm_, _ = lagrangian_angle(imm, u - e[i])
        d[..., i] = np.angle(np.exp(1j * (tp_ - tm_))) / (2 * h)
    d1 = imm.jet(u).d1
    gram = np.einsum("...im,...jm->...ij", d1, d1)
    return np.einsum("...kl,...l,...km->...m", np.linalg.inv(gram), d, d1)
