"""The ten acceptance criteria, each at its stated tolerance."""

import math
import time

import numpy as np
import pytest
from scipy.stats import special_ortho_group

from conftest import EQUIVARIANT, record_criterion, small_grid, soliton_cases
from imcf_solitons import taylor as tp
from imcf_solitons.catalog import catalog_get
from imcf_solitons.charts import TWO_PI
from imcf_solitons.curves import SolitonCurve, icsf_residual, nu_eval, nu_ode_oracle, sample_curve
from imcf_solitons.flow import FlowState, circle_polygon, flow_convex_curve, flow_sphere, homothety_deviation
from imcf_solitons.geometry import Interval, fd_jet, geometry_at
from imcf_solitons.lagrangian import (
    PlaneCurve,
    beta_deviation,
    circle,
    equivariant_soliton,
    lagrangian_residual,
    power_curve,
    product_immersion,
    pseudoumbilical_residual,
    root_curve,
)
from imcf_solitons.verifier import pinching_ratio, scan, soliton_residual

GRID = 32


@pytest.fixture(scope="module")
def full_scans():
    """Scan of every soliton of the list on a 32^n grid, with wall time."""
    start = time.perf_counter()
    out = []
    for cid, imm, a, facts in soliton_cases():
        out.append((cid, imm, a, facts, scan(imm, a, GRID, keep_samples=True)))
    return out, time.perf_counter() - start


def test_criterion_1_soliton_equation(full_scans):
    scans, elapsed = full_scans
    worst = max(scans, key=lambda s: s[4].max_residual)
    degenerate = sum(s[4].samples_degenerate for s in scans)
    ok = worst[4].max_residual < 1e-8 and elapsed < 60 and len(scans) == 26
    record_criterion(
        1,
        ok,
        f"{len(scans)} solitons, worst residual {worst[4].max_residual:.2e} ({worst[0]}), "
        f"{degenerate} degenerate samples skipped, {elapsed:.1f} s",
    )
    assert ok


def test_criterion_2_soliton_identities(full_scans):
    scans, _ = full_scans
    worst_hp, worst_lap = 0.0, 0.0
    for _, imm, a, _, rep in scans:
        est = rep.samples.estimated_a[~rep.samples.degenerate]
        # estimated_a is -1/<H, phi> at each sample
        worst_hp = max(worst_hp, float(np.max(np.abs(-1.0 / est + 1.0 / a))))
        worst_lap = max(worst_lap, rep.lemma_b_max_dev)
    ok = worst_hp < 1e-9 and worst_lap < 1e-4
    record_criterion(2, ok, f"max |<H,phi> + 1/a| {worst_hp:.2e}, max Laplacian gap {worst_lap:.2e}")
    assert ok


def _ratio_range(imm, per_axis=6):
    gs = geometry_at(imm.jet(small_grid(imm, per_axis)))
    r = pinching_ratio(gs)
    return float(r.min()), float(r.max())


def test_criterion_3_ratios():
    targets = []
    for n in range(2, 6):
        for n1 in range(1, n):
            targets.append((f"clifford({n1},{n - n1})", catalog_get("clifford", n1=n1, n2=n - n1)[0], 2 / n))
        targets.append((f"circles_product({n})", catalog_get("circles_product", n=n)[0], 1.0))
        targets.append((f"hopf_sphere({n})", catalog_get("hopf_sphere", n=n)[0], (3 * n - 2) / n**2))
    for n in range(1, 6):
        targets.append((f"round_sphere({n})", catalog_get("round_sphere", n=n)[0], 1 / n))
    targets.append(("veronese", catalog_get("veronese")[0], 5 / 6))
    worst, where = 0.0, ""
    for name, imm, target in targets:
        lo, hi = _ratio_range(imm, 5 if imm.intrinsic_dim < 5 else 3)
        dev = max(abs(lo - target), abs(hi - target))
        if dev >= worst:
            worst, where = dev, name
    ok = worst < 1e-9
    record_criterion(3, ok, f"{len(targets)} entries, worst ratio deviation {worst:.2e} ({where}); hopf_sphere(3) = 7/9")
    assert ok


def test_criterion_4_closed_solitons(full_scans):
    scans, _ = full_scans
    worst_a, worst_hphi, count = 0.0, 0.0, 0
    for _, imm, a, facts, rep in scans:
        if facts is None or not facts.closed:
            continue
        count += 1
        n = imm.intrinsic_dim
        est = rep.samples.estimated_a[~rep.samples.degenerate]
        worst_a = max(worst_a, float(np.max(np.abs(est - 1 / n))))
        gs = geometry_at(imm.jet(small_grid(imm, 8)))
        prod = np.sqrt(gs.H_norm_sq) * np.linalg.norm(gs.position, axis=-1)
        worst_hphi = max(worst_hphi, float(np.max(np.abs(prod - n))))
    # the closed equivariant member is the Hopf example again
    for n, a, c1, c2 in EQUIVARIANT:
        imm = equivariant_soliton(n, a, c1, c2)
        if imm.domain[0].periodic:
            count += 1
            gs = geometry_at(imm.jet(small_grid(imm, 8)))
            worst_a = max(worst_a, float(np.max(np.abs(-1 / np.einsum("im,im->i", gs.H, gs.position) - 1 / n))))
            prod = np.sqrt(gs.H_norm_sq) * np.linalg.norm(gs.position, axis=-1)
            worst_hphi = max(worst_hphi, float(np.max(np.abs(prod - n))))
    ok = worst_a < 1e-9 and worst_hphi < 1e-9 and count >= 15
    record_criterion(4, ok, f"{count} closed solitons, max |a_est - 1/n| {worst_a:.2e}, max ||H||phi| - n| {worst_hphi:.2e}")
    assert ok


def _random_members(count, seed):
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        a = (rng.uniform(-3.0, 0.95), 1.0, rng.uniform(1.05, 3.0))[k % 3]
        c1, c2 = rng.uniform(-2.0, 2.0, 2)
        out.append(SolitonCurve(a, c1, c2))
    return out


def test_criterion_5_curve_family():
    members = _random_members(20, 2024)
    assert {sc.branch for sc in members} == {"Sub", "Linear", "Super"}
    rng = np.random.default_rng(11)
    worst_icsf, worst_ode, cusps = 0.0, 0.0, 0
    for sc in members:
        cj = sample_curve(sc, rng.uniform(-2 * np.pi, 2 * np.pi, 100))
        keep = ~cj.cusp
        cusps += int(cj.cusp.sum())
        sub = sample_curve(sc, cj.theta[keep])
        worst_icsf = max(worst_icsf, float(np.max(icsf_residual(sub, sc.a))))
        theta = np.linspace(0.0, 4 * np.pi, 201)
        nu, dnu, _ = nu_eval(sc.a, sc.c1, sc.c2, theta)
        ode = nu_ode_oracle(sc.a, nu[0], dnu[0], theta)
        worst_ode = max(worst_ode, float(np.max(np.abs(ode - nu)) / max(1.0, np.max(np.abs(nu)))))
    ok = worst_icsf < 1e-10 and worst_ode < 1e-7
    record_criterion(
        5, ok, f"20 members x 100 theta, max icsf residual {worst_icsf:.2e} ({cusps} cusp samples skipped), max RK4 gap {worst_ode:.2e} (relative)"
    )
    assert ok


def _root(n, velocity, c1, c2, count=3001):
    sc = SolitonCurve(n * velocity, c1, c2)
    lo, hi = sc.regular_interval(-math.pi, math.pi)
    return root_curve(sample_curve(sc, np.linspace(lo, hi, count)), n)


def _wobbly(amp, k):
    return lambda t: (1.5 + amp * tp.cos(k * t)) * (tp.cos(t) + 1j * tp.sin(t))


def _beta_ok(alpha, n, a):
    beta = power_curve(alpha, n)
    dev = np.abs(beta_deviation(beta, n, a)) / np.maximum(1.0, np.abs(beta.dz))
    return float(np.max(dev)) < 1e-9


def test_criterion_6_power_profiles():
    positive = [
        (2, 0.5, 1.0, 0.0),
        (3, 1 / 3, 2.0, 0.0),
        (2, 0.3, 1.0, 0.5),
        (3, 0.2, -0.7, 1.0),
        (2, 1.0, 1.0, 1.0),
        (4, 0.4, 1.0, -0.3),
        (3, -0.5, 1.0, 0.2),
        (2, -1.0, 0.5, 1.0),
        (5, 0.1, 1.0, 1.0),
        (3, 0.9, 0.2, 1.0),
    ]
    cases = [(_root(n, a, c1, c2), n, a, True) for n, a, c1, c2 in positive]
    # roots of soliton curves tested at the wrong velocity, and generic closed curves
    cases += [(_root(2, 0.5, 1.0, 0.3), 2, 0.6, False), (_root(3, 0.3, 1.0, 1.0), 3, -0.3, False), (_root(2, 1.0, 1.0, 1.0), 3, 1.0, False)]
    t = np.linspace(0, TWO_PI, 800)
    for amp, k, n, a in ((0.3, 3, 2, 0.5), (0.45, 2, 3, 1 / 3)):
        cases.append((PlaneCurve(Interval(0.0, TWO_PI, True), _wobbly(amp, k)).samples(t), n, a, False))
    agree, worst_pos, best_neg = 0, 0.0, math.inf
    for alpha, n, a, expected in cases:
        res = pseudoumbilical_residual(alpha, n, a)
        beta_ok = _beta_ok(alpha, n, a)
        agree += (res < 1e-9) == beta_ok == expected
        if expected:
            worst_pos = max(worst_pos, res)
        else:
            best_neg = min(best_neg, res)
    ok = agree == len(cases) == 15
    record_criterion(6, ok, f"{agree}/15 agree; positives <= {worst_pos:.2e}, negatives >= {best_neg:.2e}")
    assert ok


def test_criterion_7_unequal_radii():
    imm = product_immersion([circle(1.0), circle(1.1)])
    gs = geometry_at(imm.jet(small_grid(imm, 16)))
    velocities = np.linspace(-2, 2, 401)
    velocities = velocities[velocities != 0]
    worst = np.array([np.max(soliton_residual(gs, a)) for a in velocities])
    k = int(np.argmin(worst))
    ok = velocities.size == 400 and worst[k] > 1e-3
    record_criterion(7, ok, f"min over 400 velocities of max residual {worst[k]:.3e} at a = {velocities[k]:.3f}")
    assert ok


def test_criterion_8_flow_homothety():
    state = FlowState(0.0, 1e-4, curve=circle_polygon(1.0, 512))
    end = flow_convex_curve(state, 1.0)
    dev = homothety_deviation(state.curve, end.curve, 1.0, 1.0)
    # the sphere law r' = r/n is the IMCF speed 1/|H| of a round sphere
    sphere_gap = 0.0
    t = np.linspace(0, 2, 5)
    for n in (1, 2, 3):
        r = flow_sphere(n, 1.0, t)
        for rt in r:
            imm, _ = catalog_get("round_sphere", n=n, R=float(rt))
            gs = geometry_at(imm.jet(small_grid(imm, 3)))
            sphere_gap = max(sphere_gap, float(np.max(np.abs(rt / n - 1 / np.sqrt(gs.H_norm_sq)) / rt)))
        sphere_gap = max(sphere_gap, float(np.max(np.abs(r - np.exp(t / n)) / r)))
    ok = dev < 1e-3 and sphere_gap < 1e-12
    record_criterion(8, ok, f"circle deviation {dev:.2e} at T = 1; sphere law relative gap {sphere_gap:.1e}")
    assert ok


def test_criterion_9_pinching_floor():
    entries = [("round_sphere", {"n": 1}), ("clifford", {"n1": 1, "n2": 1})]
    entries += [("circles_product", {"n": n}) for n in range(2, 6)]
    entries += [("hopf_sphere", {"n": n}) for n in range(2, 6)]
    entries += [("curve_cylinder", {"sc": SolitonCurve(1.0, 1.0, 0.0), "n": 1})]
    checked, violations, equal = 0, [], []
    for name, params in entries:
        imm, facts = catalog_get(name, **params)
        assert facts.closed and facts.lagrangian
        assert lagrangian_residual(imm, 5) < 1e-12
        n = imm.intrinsic_dim
        floor = (3 * n - 2) / n**2
        lo, hi = _ratio_range(imm, 5)
        checked += 1
        if lo < floor - 1e-10:
            violations.append(imm.name)
        if abs(lo - floor) <= 1e-10:
            # equality must be the Hopf example: for n <= 2 the circle and the
            # Clifford torus of radius sqrt(n) are the Hopf examples themselves
            radius = np.linalg.norm(imm.position(small_grid(imm, 5)), axis=-1)
            is_hopf = name == "hopf_sphere" or (n <= 2 and np.allclose(radius, math.sqrt(n), atol=1e-12))
            equal.append((imm.name, is_hopf))
    ok = not violations and all(h for _, h in equal) and any(name.startswith("hopf_sphere(5") for name, _ in equal)
    names = ", ".join(n for n, _ in equal)
    record_criterion(9, ok, f"{checked} closed Lagrangian solitons, {len(violations)} below floor; equality at {names}")
    assert ok


def test_criterion_10_jets_and_invariance():
    cases = [(cid, imm, a) for cid, imm, a, _ in soliton_cases()]
    cases.append(("legendrian_torus-n3", catalog_get("legendrian_torus", n=3)[0], None))
    worst_fd, worst_inv = 0.0, 0.0
    for _, imm, a in cases:
        u = small_grid(imm, 4)
        exact, fd = imm.jet(u), fd_jet(imm, u, h=1e-4)
        scale = max(1.0, float(np.max(np.abs(exact.d2))))
        worst_fd = max(worst_fd, float(np.max(np.abs(fd.d1 - exact.d1))) / scale, float(np.max(np.abs(fd.d2 - exact.d2))) / scale)
        g0 = geometry_at(exact)
        rot = special_ortho_group.rvs(imm.ambient_dim, random_state=7)
        g1 = geometry_at(imm.transformed(rot).jet(u))
        rel = lambda x, y: float(np.max(np.abs(x - y) / np.maximum(1.0, np.abs(y))))  # noqa: E731
        worst_inv = max(worst_inv, rel(g1.H_norm_sq, g0.H_norm_sq), rel(g1.sigma_norm_sq, g0.sigma_norm_sq))
        for rho in (0.5, 3.0):
            g2 = geometry_at(imm.scaled(rho).jet(u))
            worst_inv = max(worst_inv, rel(rho**2 * g2.H_norm_sq, g0.H_norm_sq), rel(rho**2 * g2.sigma_norm_sq, g0.sigma_norm_sq))
            if a is not None:
                wrong = 1.5 * a
                worst_inv = max(worst_inv, rel(soliton_residual(g2, wrong), rho * soliton_residual(g0, wrong)))
    ok = worst_fd < 1e-5 and worst_inv < 1e-10
    record_criterion(10, ok, f"{len(cases)} entries, max FD jet gap {worst_fd:.2e} (relative), max invariance gap {worst_inv:.2e}")
    assert ok
