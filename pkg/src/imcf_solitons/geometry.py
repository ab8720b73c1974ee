"""Immersions with exact 2-jets and their pointwise extrinsic geometry.

An :class:`Immersion` is a map from a box of parameters into R^m given by a
*formula*: a callable taking a list of ``n`` parameter values and returning a
list of ``m`` ambient coordinates.  Formulas are written with the functions of
:mod:`imcf_solitons.taylor`, so the same code yields positions (plain arrays)
or exact first and second partials (:class:`~imcf_solitons.taylor.Taylor2`).

All routines are vectorised over leading batch axes: a parameter array of
shape ``B + (n,)`` produces jets of shape ``B + (m,)``, ``B + (n, m)`` and
``B + (n, n, m)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateMetric, OutOfDomain, StepTooLarge
from .taylor import Taylor2

DEGENERACY_TOL = 1e-12
DEFAULT_FD_STEP = 1e-4


@dataclass(frozen=True)
class Interval:
    """Parameter range; periodic intervals wrap onto ``[lo, hi)``."""

    lo: float
    hi: float
    periodic: bool = False

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class Jet2:
    position: np.ndarray
    d1: np.ndarray
    d2: np.ndarray

    @property
    def intrinsic_dim(self) -> int:
        return self.d1.shape[-2]

    @property
    def ambient_dim(self) -> int:
        return self.position.shape[-1]

    def __getitem__(self, idx):
        return Jet2(self.position[idx], self.d1[idx], self.d2[idx])


@dataclass(frozen=True)
class Immersion:
    intrinsic_dim: int
    ambient_dim: int
    domain: tuple[Interval, ...]
    formula: Callable[[Sequence], list] = field(repr=False)
    name: str = ""

    def __post_init__(self):
        if not 1 <= self.intrinsic_dim < self.ambient_dim:
            raise ValueError("need 1 <= intrinsic_dim < ambient_dim")
        if len(self.domain) != self.intrinsic_dim:
            raise ValueError("one interval per parameter required")

    def wrap(self, u) -> np.ndarray:
        """Map periodic parameters into their base interval; reject points outside the rest."""
        u = np.array(u, dtype=float)
        if u.shape[-1] != self.intrinsic_dim:
            raise ValueError(f"expected {self.intrinsic_dim} parameters, got {u.shape[-1]}")
        for i, iv in enumerate(self.domain):
            if iv.periodic:
                u[..., i] = iv.lo + np.mod(u[..., i] - iv.lo, iv.length)
            elif np.any(u[..., i] < iv.lo) or np.any(u[..., i] > iv.hi):
                raise OutOfDomain(f"parameter {i} outside [{iv.lo}, {iv.hi}]")
        return u

    def _components(self, params):
        out = self.formula(params)
        if len(out) != self.ambient_dim:
            raise ValueError(f"formula returned {len(out)} components, expected {self.ambient_dim}")
        return out

    def position(self, u) -> np.ndarray:
        u = self.wrap(u)
        comps = self._components([u[..., i] for i in range(self.intrinsic_dim)])
        return np.stack([np.broadcast_to(c, u.shape[:-1]) for c in comps], axis=-1).astype(float)

    def jet(self, u) -> Jet2:
        u = self.wrap(u)
        params = Taylor2.variables(u)
        comps = [c if isinstance(c, Taylor2) else params[0]._lift(c) for c in self._components(params)]
        pos = np.stack([np.real(c.val) for c in comps], axis=-1)
        d1 = np.stack([np.real(c.grad) for c in comps], axis=-1)
        d2 = np.stack([np.real(c.hess) for c in comps], axis=-1)
        # products of partials are commutative in floating point, so this is exact
        d2 = 0.5 * (d2 + np.swapaxes(d2, -2, -3))
        return Jet2(np.broadcast_to(pos, u.shape[:-1] + (self.ambient_dim,)).copy(), d1, d2)

    def transformed(self, matrix=None, scale: float = 1.0, name: str | None = None) -> "Immersion":
        """Compose with the linear map ``scale * matrix`` of the ambient space.

        ``matrix`` may be rectangular (``m_new x m``) to embed into a larger space.
        """
        if matrix is None:
            matrix = np.eye(self.ambient_dim)
        matrix = np.asarray(matrix, dtype=float) * scale
        base = self.formula

        def formula(params):
            comps = base(params)
            out = []
            for row in matrix:
                acc = 0.0
                for coef, c in zip(row, comps):
                    if coef != 0.0:
                        acc = acc + coef * c
                out.append(acc)
            return out

        return Immersion(self.intrinsic_dim, matrix.shape[0], self.domain, formula, name or self.name)

    def scaled(self, rho: float) -> "Immersion":
        return self.transformed(scale=rho, name=self.name)


def eval_jet(imm: Immersion, u) -> Jet2:
    """Exact 2-jet of ``imm`` at ``u`` (periodic parameters are wrapped first)."""
    return imm.jet(u)


def fd_jet(position, u, h: float = DEFAULT_FD_STEP, domain: Sequence[Interval] | None = None) -> Jet2:
    """Central-difference 2-jet from position evaluations only.

    ``position`` is either an :class:`Immersion` (its domain is then used for the
    margin check) or a vectorised callable ``u -> R^m``.
    """
    if h <= 0:
        raise ValueError("step must be positive")
    if isinstance(position, Immersion):
        domain = position.domain if domain is None else domain
        position = position.position
    u = np.asarray(u, dtype=float)
    n = u.shape[-1]
    if domain is not None:
        for i, iv in enumerate(domain):
            if not iv.periodic and (np.any(u[..., i] - 2 * h < iv.lo) or np.any(u[..., i] + 2 * h > iv.hi)):
                raise StepTooLarge(f"u[{i}] +- 2h leaves [{iv.lo}, {iv.hi}]")
    e = np.eye(n) * h

    def f(shift):
        return np.asarray(position(u + shift), dtype=float)

    f0 = f(0.0)
    m = f0.shape[-1]
    d1 = np.empty(u.shape[:-1] + (n, m))
    d2 = np.empty(u.shape[:-1] + (n, n, m))
    for i in range(n):
        fp, fm = f(e[i]), f(-e[i])
        d1[..., i, :] = (fp - fm) / (2 * h)
        d2[..., i, i, :] = (fp - 2 * f0 + fm) / h**2
        for j in range(i):
            mixed = (f(e[i] + e[j]) - f(e[i] - e[j]) - f(-e[i] + e[j]) + f(-e[i] - e[j])) / (4 * h * h)
            d2[..., i, j, :] = mixed
            d2[..., j, i, :] = mixed
    return Jet2(f0, d1, d2)


@dataclass(frozen=True)
class GeometrySample:
    """First and second order extrinsic data at one or many points."""

    position: np.ndarray
    metric: np.ndarray
    metric_inv: np.ndarray
    H: np.ndarray
    sigma_norm_sq: np.ndarray
    phi_normal: np.ndarray
    phi_tangent: np.ndarray
    H_norm_sq: np.ndarray

    @property
    def intrinsic_dim(self) -> int:
        return self.metric.shape[-1]

    def __getitem__(self, idx):
        return GeometrySample(*(getattr(self, f)[idx] for f in self.__dataclass_fields__))


def degenerate_mask(jet: Jet2, tol: float = DEGENERACY_TOL) -> np.ndarray:
    """True where the tangent frame is (numerically) rank deficient.

    The Gram determinant is compared against the product of the squared frame
    lengths (Hadamard's bound), so the test is scale free.  Frames with a
    vanishing vector, e.g. at a cusp of a curve, are caught separately.
    """
    d1 = jet.d1
    gram = np.einsum("...im,...jm->...ij", d1, d1)
    lengths_sq = np.einsum("...ii->...i", gram)
    scale = np.maximum(1.0, np.einsum("...m,...m->...", jet.position, jet.position))
    tiny = np.any(lengths_sq < tol**2 * scale[..., None], axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.linalg.det(gram) / np.prod(lengths_sq, axis=-1)
    return tiny | ~(ratio >= tol)


def _normal_part(v, d1, ginv):
    # v - sum_ij g^{ij} <v, d_j> d_i
    coeff = np.einsum("...ij,...jm,...m->...i", ginv, d1, v)
    return v - np.einsum("...i,...im->...m", coeff, d1)


def geometry_batch(jet: Jet2, tol: float = DEGENERACY_TOL) -> tuple[GeometrySample, np.ndarray]:
    """Geometry on a batch, returning the sample together with the degeneracy mask.

    Degenerate points are evaluated with an identity placeholder metric and must
    be discarded by the caller.
    """
    bad = degenerate_mask(jet, tol)
    d1, d2, pos = jet.d1, jet.d2, jet.position
    n = d1.shape[-2]
    gram = np.einsum("...im,...jm->...ij", d1, d1)
    safe = np.where(bad[..., None, None], np.eye(n), gram)
    chol = np.linalg.cholesky(safe)
    linv = np.linalg.inv(chol)
    ginv = np.einsum("...ki,...kj->...ij", linv, linv)

    # plain matmuls; multi-operand einsums are an order of magnitude slower here
    frame_dual = ginv @ d1
    normal_d2 = d2 - (d2 @ np.swapaxes(frame_dual, -1, -2)[..., None, :, :]) @ d1[..., None, :, :]
    m = d1.shape[-1]
    batch = d2.shape[:-3]
    H = (ginv.reshape(batch + (1, n * n)) @ normal_d2.reshape(batch + (n * n, m)))[..., 0, :]
    raised = (ginv @ normal_d2.reshape(batch + (n, n * m))).reshape(batch + (n, n, m))
    raised = np.swapaxes(raised, -1, -2) @ ginv[..., None, :, :]
    sigma_sq = np.einsum("...cdm,...cmd->...", normal_d2, raised)

    phi_t = ((d1 @ pos[..., :, None])[..., 0][..., None, :] @ frame_dual)[..., 0, :]
    phi_n = pos - phi_t
    sample = GeometrySample(
        position=pos,
        metric=gram,
        metric_inv=ginv,
        H=H,
        sigma_norm_sq=sigma_sq,
        phi_normal=phi_n,
        phi_tangent=phi_t,
        H_norm_sq=np.einsum("...m,...m->...", H, H),
    )
    return sample, bad


def geometry_at(jet: Jet2) -> GeometrySample:
    """Induced metric, mean curvature vector, |sigma|^2 and the normal/tangent split of the position."""
    sample, bad = geometry_batch(jet)
    if np.any(bad):
        raise DegenerateMetric(f"{int(np.sum(bad))} point(s) with degenerate tangent frame")
    return sample


def normal_projection(v, jet: Jet2) -> np.ndarray:
    """Normal component of ambient vectors ``v`` at the points of ``jet``."""
    sample = geometry_at(jet)
    return _normal_part(np.asarray(v, dtype=float), jet.d1, sample.metric_inv)


# fourth order central stencils on the offsets -2..2 (the centre weight of the
# second difference, -5/2, is applied separately)
D1_WEIGHTS = {-2: 1 / 12, -1: -8 / 12, 1: 8 / 12, 2: -1 / 12}
D2_WEIGHTS = {-2: -1 / 12, -1: 16 / 12, 1: 16 / 12, 2: -1 / 12}


def laplace_beltrami_normsq(imm: Immersion, u, h: float = DEFAULT_FD_STEP) -> np.ndarray:
    """Intrinsic Laplacian of f = |phi|^2 by finite differences.

    Uses only positions and the induced metric: the Hessian and gradient of f
    come from fourth order central differences of f, the Christoffel symbols
    from the same differences of the metric.  No second fundamental form is
    involved.

    ``h`` is a relative arc length: along parameter i the step is
    ``h max(1, |phi|) / sqrt(g_ii)``, shortened where needed so that the stencil stays inside bounded parameter
    ranges.  Equal geometric steps keep the roundoff of the second differences
    from being amplified by ``g^{ij}`` near coordinate singularities.
    """
    u = np.asarray(u, dtype=float)
    n = imm.intrinsic_dim

    def f(x):
        p = imm.position(x)
        return np.einsum("...m,...m->...", p, p)

    def metric(x):
        d1 = imm.jet(x).d1
        return np.einsum("...im,...jm->...ij", d1, d1)

    g = metric(u)
    f0 = f(u)
    steps = h * np.sqrt(np.maximum(1.0, f0))[..., None] / np.sqrt(np.einsum("...ii->...i", g))
    for i, iv in enumerate(imm.domain):
        if iv.periodic:
            continue
        room = 0.5 * np.minimum(u[..., i] - iv.lo, iv.hi - u[..., i])
        if np.any(room <= 0):
            raise StepTooLarge(f"u[{i}] on or outside [{iv.lo}, {iv.hi}]")
        steps[..., i] = np.minimum(steps[..., i], room)

    def shift(i, k):
        out = np.zeros(u.shape)
        out[..., i] = k * steps[..., i]
        return out

    df = np.empty(u.shape[:-1] + (n,))
    hess = np.empty(u.shape[:-1] + (n, n))
    dg = np.empty(u.shape[:-1] + (n, n, n))  # dg[..., k, i, j] = d_k g_ij
    for i in range(n):
        hi = steps[..., i]
        fi = {k: f(u + shift(i, k)) for k in D1_WEIGHTS}
        df[..., i] = sum(w * fi[k] for k, w in D1_WEIGHTS.items()) / hi
        hess[..., i, i] = (sum(w * fi[k] for k, w in D2_WEIGHTS.items()) - 2.5 * f0) / hi**2
        for j in range(i):
            mixed = sum(
                wi * wj * f(u + shift(i, ki) + shift(j, kj))
                for ki, wi in D1_WEIGHTS.items()
                for kj, wj in D1_WEIGHTS.items()
            ) / (hi * steps[..., j])
            hess[..., i, j] = hess[..., j, i] = mixed
        dg[..., i, :, :] = sum(w * metric(u + shift(i, k)) for k, w in D1_WEIGHTS.items()) / hi[..., None, None]

    if np.any(np.linalg.det(g) <= 0):
        raise DegenerateMetric("metric not positive definite")
    ginv = np.linalg.inv(np.linalg.cholesky(g))
    ginv = np.einsum("...ki,...kj->...ij", ginv, ginv)
    # Gamma_{l ij} = (d_i g_jl + d_j g_il - d_l g_ij) / 2
    gamma_low = 0.5 * (
        np.einsum("...ijl->...lij", dg) + np.einsum("...jil->...lij", dg) - dg
    )
    gamma = np.einsum("...kl,...lij->...kij", ginv, gamma_low)
    inner = hess - np.einsum("...kij,...k->...ij", gamma, df)
    return np.einsum("...ij,...ij->...", ginv, inner)
