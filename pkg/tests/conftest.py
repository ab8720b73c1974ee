import numpy as np
import pytest

from imcf_solitons.catalog import catalog_get
from imcf_solitons.curves import SolitonCurve
from imcf_solitons.lagrangian import equivariant_soliton

# five family curves: circle, involute, log spiral, epicycloid, hypocycloid
FAMILY_CURVES = [(1.0, 1.0, 0.0), (1.0, 0.0, 1.0), (2.0, 1.0, 1.0), (0.75, 1.0, 0.0), (-1.25, 1.0, 0.5)]

# (n, a, c1, c2): closed Hopf case, expanders, shrinker
EQUIVARIANT = [
    (2, 0.5, 2.0, 0.0),
    (3, 1 / 3, 3**1.5, 0.0),
    (2, 1.0, 1.0, 1.0),
    (3, -1 / 3, 1.0, 0.0),
    (3, 2 / 3, 1.0, 1.0),
]

CATALOG_SOLITONS = (
    [("round_sphere", {"n": n}) for n in (1, 2, 3, 4)]
    + [("clifford", {"n1": a, "n2": b}) for a, b in ((1, 1), (1, 2), (2, 2))]
    + [("circles_product", {"n": n}) for n in (2, 3, 4)]
    + [("hopf_sphere", {"n": n}) for n in (2, 3, 4)]
    + [("cylinder_circles", {"n": 3, "k": k}) for k in (1, 2)]
    + [("curve_cylinder", {"sc": SolitonCurve(*p), "n": 2}) for p in FAMILY_CURVES]
    + [("veronese", {})]
)


def case_id(case):
    name, params = case
    if "sc" in params:
        sc = params["sc"]
        return f"{name}-a{sc.a:g}-c{sc.c1:g},{sc.c2:g}"
    return name + "".join(f"-{k}{v}" for k, v in params.items())


def soliton_cases():
    """(id, immersion, velocity, facts or None) for every soliton of the acceptance list."""
    out = []
    for case in CATALOG_SOLITONS:
        imm, facts = catalog_get(case[0], **case[1])
        out.append((case_id(case), imm, facts.velocity_a, facts))
    for n, a, c1, c2 in EQUIVARIANT:
        out.append((f"equivariant-n{n}-a{a:.4g}", equivariant_soliton(n, a, c1, c2), a, None))
    return out


@pytest.fixture(scope="session")
def all_solitons():
    return soliton_cases()


def small_grid(imm, per_axis=5):
    from imcf_solitons.verifier import sample_grid

    return sample_grid(imm.domain, (per_axis,) * imm.intrinsic_dim).reshape(-1, imm.intrinsic_dim)




# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(k: int, ok: bool, detail: str) -> bool:
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
    ACCEPTANCE_LINES[k] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
