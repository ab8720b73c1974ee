"""Deterministic CSV, JSON and SVG emitters.

Floats go to CSV as 17 significant digits in scientific notation and to JSON
with Python's shortest round-trip repr, so repeated runs are byte identical.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .curves import CurveJet, SolitonCurve, sample_curve
from .verifier import SolitonReport

CSV_FLOAT = "{:.16e}"
SVG_MARGIN = 0.05
SVG_WIDTH = 480


def fmt(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    return CSV_FLOAT.format(x)


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def report_json(report: SolitonReport, extra: dict | None = None) -> str:
    payload = report.to_dict()
    if extra:
        payload.update(extra)
    return json.dumps(payload, indent=2, sort_keys=False, allow_nan=True) + "\n"


def report_csv(report: SolitonReport) -> str:
    """One row per sample: parameters u0..u{n-1}, residual, estimated_a, ratio.

    Degenerate samples keep their row with ``nan`` values.
    """
    s = report.samples
    if s is None:
        raise ValueError("report was built without keep_samples=True")
    n = s.params.shape[-1]
    header = [f"u{i}" for i in range(n)] + ["residual", "estimated_a", "ratio"]
    rows = np.column_stack([s.params, s.residual, s.estimated_a, s.ratio])
    return _csv(header, rows)


def curve_csv(cj: CurveJet) -> str:
    """Columns theta, x, y, kappa; kappa is ``nan`` at cusps."""
    rows = np.column_stack([cj.theta, cj.alpha[:, 0], cj.alpha[:, 1], cj.kappa])
    return _csv(["theta", "x", "y", "kappa"], rows)


def flow_csv(snapshots) -> str:
    """Columns t, vertex, x, y; one row per vertex of each snapshot."""
    rows = []
    for t, pts in snapshots:
        for k, (x, y) in enumerate(pts):
            rows.append((t, k, x, y))
    lines = ["t,vertex,x,y"]
    lines.extend(f"{fmt(t)},{k},{fmt(x)},{fmt(y)}" for t, k, x, y in rows)
    return "\n".join(lines) + "\n"


def curve_samples(sc: SolitonCurve, lo: float, hi: float, count: int = 2001) -> CurveJet:
    """Evenly spaced samples of ``sc`` on ``[lo, hi]`` plus its exact cusp parameters."""
    grid = np.linspace(lo, hi, count)
    cusps = np.asarray(sc.cusps(lo, hi), dtype=float)
    if cusps.size:
        # drop grid points that only differ from a cusp by rounding
        near = np.min(np.abs(grid[:, None] - cusps[None, :]), axis=1) <= 1e-9 * max(1.0, hi - lo)
        grid = grid[~near]
    return sample_curve(sc, np.union1d(grid, cusps))


def _split_at_cusps(cj: CurveJet):
    pieces, current = [], []
    for p, bad in zip(cj.alpha, cj.cusp):
        if bad or not np.all(np.isfinite(p)):
            if len(current) > 1:
                pieces.append(np.array(current))
            current = []
        else:
            current.append(p)
    if len(current) > 1:
        pieces.append(np.array(current))
    return pieces


def _num(x) -> str:
    return f"{x:.6g}"


def _pieces(pts):
    if isinstance(pts, (list, tuple)):
        return [np.asarray(p, dtype=float).reshape(-1, 2) for p in pts]
    return [np.asarray(pts, dtype=float).reshape(-1, 2)]


def _path_d(pts, closed=False) -> str:
    # SVG y grows downwards; flip so that the plot keeps the usual orientation
    subpaths = []
    for piece in _pieces(pts):
        body = " L ".join(f"{_num(x)} {_num(-y)}" for x, y in piece)
        subpaths.append("M " + body + (" Z" if closed else ""))
    return " ".join(subpaths)


def svg_document(paths, markers=(), title: str = "", extent=None) -> str:
    """Static SVG with one path per polyline and small circles at ``markers``.

    ``paths`` is a list of ``(points, closed)``; ``points`` may also be a list
    of arrays, drawn as separate subpaths of one path.  Coordinates stay in curve
    units; the viewBox fits all points (or the ``extent`` points, if given)
    with a 5% margin.
    """
    clouds = [piece for p, _ in paths for piece in _pieces(p)]
    marks = np.asarray(markers, dtype=float).reshape(-1, 2)
    every = np.asarray(extent, dtype=float).reshape(-1, 2) if extent is not None else np.vstack(clouds + [marks])
    if every.size == 0:
        every = np.zeros((1, 2))
    lo, hi = every.min(axis=0), every.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    pad = SVG_MARGIN * span.max()
    x0, y0 = lo[0] - pad, -hi[1] - pad
    w, h = span[0] + 2 * pad, span[1] + 2 * pad
    stroke = 0.004 * max(w, h)
    height = max(1, round(SVG_WIDTH * h / w))
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{height}" '
        f'viewBox="{_num(x0)} {_num(y0)} {_num(w)} {_num(h)}">'
    ]
    if title:
        out.append(f"  <title>{title}</title>")
    for pts, closed in paths:
        out.append(f'  <path d="{_path_d(pts, closed)}" fill="none" stroke="black" stroke-width="{_num(stroke)}"/>')
    for x, y in marks:
        out.append(f'  <circle cx="{_num(x)}" cy="{_num(-y)}" r="{_num(3 * stroke)}" fill="red"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def curve_svg(cj: CurveJet, title: str = "") -> str:
    """The curve as one path, broken into subpaths at flagged cusp samples.

    Cusps are marked in red.  Include the cusp parameters in the sample grid
    (see ``curve_samples``) so that no segment is drawn through a cusp.
    """
    cusps = cj.alpha[cj.cusp]
    return svg_document([(_split_at_cusps(cj), False)], cusps, title)


def flow_svg_frames(snapshots, directory, stem: str = "frame") -> list[Path]:
    """Write one SVG per snapshot, all sharing one viewBox."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    everything = np.vstack([pts for _, pts in snapshots])
    files = []
    for k, (t, pts) in enumerate(snapshots):
        path = directory / f"{stem}_{k:04d}.svg"
        path.write_text(svg_document([(pts, True)], title=f"t = {t:.6g}", extent=everything))
        files.append(path)
    return files
