"""Named immersions with exact jets and the facts they are expected to satisfy."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import taylor as tp
from .charts import TWO_PI, complex_to_real, sphere_coords, sphere_domain
from .curves import SolitonCurve
from .errors import BadParams, UnknownName
from .geometry import Immersion, Interval, geometry_batch
from .lagrangian import legendrian_torus, line, soliton_plane_curve
from .verifier import pinching_ratio, sample_grid


@dataclass(frozen=True)
class ExpectedFacts:
    velocity_a: float | None
    ratio: float | None
    closed: bool
    lagrangian: bool
    intrinsic_dim: int
    ambient_dim: int

    def __post_init__(self):
        if self.closed and self.velocity_a is not None and not math.isclose(self.velocity_a, 1 / self.intrinsic_dim):
            raise ValueError("a closed soliton must have velocity 1/n")


def _need(cond, msg):
    if not cond:
        raise BadParams(msg)


def round_sphere(n: int = 2, R: float = 1.0):
    _need(n >= 1 and R > 0, "round_sphere needs n >= 1, R > 0")
    imm = Immersion(n, n + 1, sphere_domain(n), lambda p: sphere_coords(p, R), f"round_sphere({n},{R:g})")
    return imm, ExpectedFacts(1 / n, 1 / n, True, n == 1, n, n + 1)


def clifford(n1: int = 1, n2: int = 1):
    """S^{n1}(sqrt n1) x S^{n2}(sqrt n2) in R^{n1+n2+2}."""
    _need(n1 >= 1 and n2 >= 1, "clifford needs n1, n2 >= 1")
    n = n1 + n2

    def formula(params):
        return sphere_coords(params[:n1], math.sqrt(n1)) + sphere_coords(params[n1:], math.sqrt(n2))

    imm = Immersion(n, n + 2, sphere_domain(n1) + sphere_domain(n2), formula, f"clifford({n1},{n2})")
    return imm, ExpectedFacts(1 / n, 2 / n, True, n1 == n2 == 1, n, n + 2)


def _unit_circle(t):
    return tp.cos(t) + 1j * tp.sin(t)


def circles_product(n: int = 2):
    _need(n >= 1, "circles_product needs n >= 1")

    def formula(params):
        return complex_to_real([_unit_circle(p) for p in params])

    dom = tuple(Interval(0.0, TWO_PI, periodic=True) for _ in range(n))
    imm = Immersion(n, 2 * n, dom, formula, f"circles_product({n})")
    return imm, ExpectedFacts(1 / n, 1.0, True, True, n, 2 * n)


def hopf_sphere(n: int = 2):
    """(t, x) -> sqrt(n) e^{it} x for x on the round S^{n-1}."""
    _need(n >= 2, "hopf_sphere needs n >= 2")
    r = math.sqrt(n)

    def formula(params):
        rot = r * _unit_circle(params[0])
        return complex_to_real([rot * x for x in sphere_coords(params[1:])])

    dom = (Interval(0.0, TWO_PI, periodic=True),) + sphere_domain(n - 1)
    imm = Immersion(n, 2 * n, dom, formula, f"hopf_sphere({n})")
    return imm, ExpectedFacts(1 / n, (3 * n - 2) / n**2, True, True, n, 2 * n)


def _measured_ratio(imm: Immersion) -> float:
    """Ratio at the first regular point of a coarse grid (the entries using it are homogeneous)."""
    u = sample_grid(imm.domain, (5,) * imm.intrinsic_dim).reshape(-1, imm.intrinsic_dim)
    gs, bad = geometry_batch(imm.jet(u))
    k = int(np.argmin(bad))
    if bad[k]:
        raise BadParams(f"{imm.name}: no regular point to measure the ratio")
    return float(pinching_ratio(gs[k]))


def cylinder_circles(n: int = 2, k: int = 1, half_length: float = 1.0):
    """k unit circles times R^{n-k}, the line factors along the real axes."""
    _need(1 <= k <= n - 1, "cylinder_circles needs 1 <= k <= n-1")

    def formula(params):
        return complex_to_real([_unit_circle(p) for p in params[:k]] + [p + 0j for p in params[k:]])

    dom = tuple(Interval(0.0, TWO_PI, periodic=True) for _ in range(k)) + tuple(
        Interval(-half_length, half_length) for _ in range(n - k)
    )
    imm = Immersion(n, 2 * n, dom, formula, f"cylinder_circles({n},{k})")
    return imm, ExpectedFacts(1 / k, _measured_ratio(imm), False, True, n, 2 * n)


def curve_cylinder(sc: SolitonCurve | None = None, n: int = 1, theta_range=None, half_length: float = 1.0, **coeffs):
    """C x R^{n-1} for a soliton curve C; accepts ``sc`` or ``a=, c1=, c2=``."""
    if sc is None:
        try:
            sc = SolitonCurve(float(coeffs["a"]), float(coeffs.get("c1", 1.0)), float(coeffs.get("c2", 0.0)))
        except (KeyError, ValueError) as exc:
            raise BadParams(f"curve_cylinder needs a valid SolitonCurve: {exc}") from None
    _need(n >= 1, "curve_cylinder needs n >= 1")
    curve = soliton_plane_curve(sc, theta_range)
    lines = [line(half_length) for _ in range(n - 1)]

    def formula(params):
        return complex_to_real([curve.formula(params[0])] + [ln.formula(p) for ln, p in zip(lines, params[1:])])

    dom = (curve.domain,) + tuple(ln.domain for ln in lines)
    name = f"curve_cylinder(a={sc.a:g},c1={sc.c1:g},c2={sc.c2:g},n={n})"
    imm = Immersion(n, 2 * n, dom, formula, name)
    closed = curve.domain.periodic and n == 1
    return imm, ExpectedFacts(sc.a, _measured_ratio(imm), closed, True, n, 2 * n)


def legendrian_torus_entry(n: int = 3):
    _need(n >= 2, "legendrian_torus needs n >= 2")
    imm = legendrian_torus(n).immersion
    return imm, ExpectedFacts(None, None, True, False, n - 1, 2 * n)


def veronese():
    """Veronese surface: the degree-2 harmonic map of the unit S^2 into the unit S^4 of R^5."""
    s3 = math.sqrt(3.0)

    def formula(params):
        x, y, z = sphere_coords(params)
        return [
            s3 * y * z,
            s3 * z * x,
            s3 * x * y,
            0.5 * s3 * (x * x - y * y),
            0.5 * (x * x + y * y - 2.0 * z * z),
        ]

    imm = Immersion(2, 5, sphere_domain(2), formula, "veronese")
    return imm, ExpectedFacts(0.5, 5 / 6, True, False, 2, 5)


_REGISTRY = {
    "round_sphere": (round_sphere, {"n": "int >= 1", "R": "float > 0"}, {"velocity_a": "1/n", "ratio": "1/n", "closed": True}),
    "clifford": (clifford, {"n1": "int >= 1", "n2": "int >= 1"}, {"velocity_a": "1/(n1+n2)", "ratio": "2/(n1+n2)", "closed": True}),
    "circles_product": (circles_product, {"n": "int >= 1"}, {"velocity_a": "1/n", "ratio": "1", "closed": True}),
    "hopf_sphere": (hopf_sphere, {"n": "int >= 2"}, {"velocity_a": "1/n", "ratio": "(3n-2)/n^2", "closed": True}),
    "cylinder_circles": (cylinder_circles, {"n": "int >= 2", "k": "1 <= int <= n-1"}, {"velocity_a": "1/k", "ratio": "measured", "closed": False}),
    "curve_cylinder": (curve_cylinder, {"sc": "SolitonCurve (or a, c1, c2)", "n": "int >= 1"}, {"velocity_a": "sc.a", "ratio": "measured", "closed": False}),
    "legendrian_torus": (legendrian_torus_entry, {"n": "int >= 2"}, {"velocity_a": None, "ratio": None, "closed": True}),
    "veronese": (veronese, {}, {"velocity_a": "1/2", "ratio": "5/6", "closed": True}),
}


def catalog_get(name: str, **params):
    """Build a catalog entry, returning ``(Immersion, ExpectedFacts)``."""
    try:
        factory = _REGISTRY[name][0]
    except KeyError:
        raise UnknownName(f"unknown catalog entry {name!r}") from None
    try:
        return factory(**params)
    except TypeError as exc:
        raise BadParams(str(exc)) from None


def catalog_list() -> list[dict]:
    return [{"name": k, "params": v[1], "facts": v[2]} for k, v in _REGISTRY.items()]


def catalog_json() -> str:
    return json.dumps(catalog_list(), indent=2)


def facts_dict(facts: ExpectedFacts) -> dict:
    return asdict(facts)
