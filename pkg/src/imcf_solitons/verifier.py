"""Soliton equation residuals, velocity estimates and grid scans."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import AllSamplesDegenerate, MeanCurvatureVanishes, NotASoliton
from .geometry import (
    GeometrySample,
    Immersion,
    geometry_at,
    geometry_batch,
    laplace_beltrami_normsq,
)

MEAN_CURVATURE_TOL = 1e-20
VELOCITY_TOL = 1e-12
SCAN_CHUNK = 2048
LAPLACIAN_STEP = 3e-4


def _check_mean_curvature(gs: GeometrySample):
    if np.any(gs.H_norm_sq < MEAN_CURVATURE_TOL):
        raise MeanCurvatureVanishes("|H| vanishes at some sample")


def _residual(gs, a):
    speed = -gs.H / gs.H_norm_sq[..., None]
    return np.linalg.norm(speed - a * gs.phi_normal, axis=-1)


def soliton_residual(gs: GeometrySample, a: float) -> np.ndarray:
    """Ambient norm of ``-H/|H|^2 - a * phi_normal``."""
    if a == 0:
        raise ValueError("velocity must be nonzero")
    _check_mean_curvature(gs)
    return _residual(gs, a)


def _h_dot_phi(gs):
    return np.einsum("...m,...m->...", gs.H, gs.position)


def estimate_velocity(gs: GeometrySample) -> np.ndarray:
    """Velocity constant implied by <H, phi> = -1/a."""
    hp = _h_dot_phi(gs)
    scale = np.sqrt(gs.H_norm_sq) * np.linalg.norm(gs.position, axis=-1)
    if np.any(np.abs(hp) <= VELOCITY_TOL * scale):
        raise NotASoliton("<H, phi> vanishes; no finite velocity fits")
    return -1.0 / hp


def pinching_ratio(gs: GeometrySample) -> np.ndarray:
    """|sigma|^2 / |H|^2."""
    _check_mean_curvature(gs)
    return gs.sigma_norm_sq / gs.H_norm_sq


def sample_grid(domain, counts) -> np.ndarray:
    """Tensor grid over the domain, shape ``counts + (n,)``.

    Periodic parameters use the half-open ``[lo, hi)``; bounded ones are inset
    by 1% of their length at both ends.
    """
    axes = []
    for iv, k in zip(domain, counts):
        if iv.periodic:
            axes.append(iv.lo + iv.length * np.arange(k) / k)
        elif k == 1:
            axes.append(np.array([0.5 * (iv.lo + iv.hi)]))
        else:
            inset = 0.01 * iv.length
            axes.append(np.linspace(iv.lo + inset, iv.hi - inset, k))
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack(mesh, axis=-1)


def _stats(x):
    x = x[np.isfinite(x)]
    if x.size == 0:
        return {"min": float("nan"), "max": float("nan"), "mean": float("nan")}
    return {"min": float(x.min()), "max": float(x.max()), "mean": float(x.mean())}


@dataclass
class ScanSamples:
    params: np.ndarray
    residual: np.ndarray
    estimated_a: np.ndarray
    ratio: np.ndarray
    degenerate: np.ndarray


@dataclass
class SolitonReport:
    velocity_a: float
    max_residual: float
    mean_residual: float
    estimated_a_stats: dict
    lemma_b_max_dev: float
    ratio_stats: dict
    samples_total: int
    samples_degenerate: int
    samples: ScanSamples | None = field(default=None, repr=False)

    _FIELDS = (
        "velocity_a",
        "max_residual",
        "mean_residual",
        "estimated_a_stats",
        "lemma_b_max_dev",
        "ratio_stats",
        "samples_total",
        "samples_degenerate",
    )

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self._FIELDS}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def scan(
    imm: Immersion,
    a: float,
    grid: int | Sequence[int],
    lemma_samples: int | None = 256,
    lemma_step: float = LAPLACIAN_STEP,
    keep_samples: bool = False,
) -> SolitonReport:
    """Evaluate the soliton checks on a tensor grid and aggregate them.

    Degenerate frames and points with vanishing |H| are counted, not fatal.
    The identity Delta |phi|^2 = 2(n - 1/a) is checked by finite differences on at
    most ``lemma_samples`` evenly strided valid samples (``None`` for all of
    them, ``0`` to skip).
    """
    if a == 0:
        raise ValueError("velocity must be nonzero")
    n = imm.intrinsic_dim
    counts = (grid,) * n if np.isscalar(grid) else tuple(grid)
    if len(counts) != n or min(counts) < 1:
        raise ValueError("grid needs one positive count per parameter")
    pts = sample_grid(imm.domain, counts).reshape(-1, n)
    total = pts.shape[0]

    residual = np.full(total, np.nan)
    est = np.full(total, np.nan)
    ratio = np.full(total, np.nan)
    bad = np.zeros(total, dtype=bool)
    for start in range(0, total, SCAN_CHUNK):
        sl = slice(start, start + SCAN_CHUNK)
        gs, deg = geometry_batch(imm.jet(pts[sl]))
        deg = deg | ~(gs.H_norm_sq >= MEAN_CURVATURE_TOL)
        ok = ~deg
        with np.errstate(divide="ignore", invalid="ignore"):
            residual[sl] = np.where(ok, _residual(gs, a), np.nan)
            hp = _h_dot_phi(gs)
            est[sl] = np.where(ok & (hp != 0), -1.0 / hp, np.nan)
            ratio[sl] = np.where(ok, gs.sigma_norm_sq / gs.H_norm_sq, np.nan)
        bad[sl] = deg

    valid = np.flatnonzero(~bad)
    if valid.size == 0:
        raise AllSamplesDegenerate(f"all {total} samples degenerate")

    lemma_dev = float("nan")
    if lemma_samples != 0:
        idx = valid
        if lemma_samples is not None and valid.size > lemma_samples:
            idx = valid[np.linspace(0, valid.size - 1, lemma_samples).round().astype(int)]
        lap = laplace_beltrami_normsq(imm, pts[idx], h=lemma_step)
        lemma_dev = float(np.max(np.abs(lap - 2.0 * (n - 1.0 / a))))

    res = residual[valid]
    return SolitonReport(
        velocity_a=float(a),
        max_residual=float(res.max()),
        mean_residual=float(res.mean()),
        estimated_a_stats=_stats(est[valid]),
        lemma_b_max_dev=lemma_dev,
        ratio_stats=_stats(ratio[valid]),
        samples_total=int(total),
        samples_degenerate=int(bad.sum()),
        samples=ScanSamples(pts, residual, est, ratio, bad) if keep_samples else None,
    )


def lemma_identity_gap(imm: Immersion, u, h: float = LAPLACIAN_STEP) -> np.ndarray:
    """|Delta |phi|^2 - 2(<H, phi> + n)| with the Laplacian taken by finite differences."""
    gs = geometry_at(imm.jet(u))
    lap = laplace_beltrami_normsq(imm, u, h=h)
    return np.abs(lap - 2.0 * (_h_dot_phi(gs) + imm.intrinsic_dim))

