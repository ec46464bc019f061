import random
from fractions import Fraction
from itertools import product

import pytest

from toric_ricci.bundle import BundleSpec, FanoFiber, TorusMap, check_fano
from toric_ricci.exceptions import PolytopeError, SurjectivityError
from toric_ricci.lie import build_root_system, make_flag
from toric_ricci.polytope import from_fano_rays


@pytest.fixture
def su2_spec():
    flag = make_flag(build_root_system([("A", 1)]), [], [(-1,)])
    return BundleSpec(flag, FanoFiber.from_rays([(1,), (-1,)]), TorusMap([[1]]))


def _reflexive_fibers():
    """Reflexive 1- and 2-dimensional fiber polytopes from small primitive rays."""
    found = [((1,), (-1,))]
    box = [v for v in product(range(-1, 2), repeat=2) if v != (0, 0)]
    rng = random.Random(7)
    seen = set()
    for _ in range(400):
        rays = tuple(sorted(rng.sample(box, rng.randint(3, 6))))
        if rays in seen:
            continue
        seen.add(rays)
        try:
            poly = from_fano_rays(rays)
        except PolytopeError:
            continue
        if all(c.denominator == 1 for v in poly.vertices for c in v):
            found.append(rays)
    return found


REFLEXIVE_FIBERS = _reflexive_fibers()


def random_specs(count, seed=2024):
    """Valid Fano specs: flags on A1-A3, reflexive fibers of dim <= 2, random rational D."""
    rng = random.Random(seed)
    specs = []
    while len(specs) < count:
        rs = build_root_system([("A", rng.randint(1, 3))])
        S = [i for i in range(rs.rank) if rng.random() < 0.3]
        if len(S) == rs.rank:
            S = S[:-1]
        flag = make_flag(rs, S)
        rays = rng.choice([f for f in REFLEXIVE_FIBERS if len(f[0]) <= flag.dim_center])
        m = len(rays[0])
        D = [[Fraction(0) if j in S else Fraction(rng.randint(-4, 4), rng.randint(1, 3))
              for j in range(rs.rank)] for _ in range(m)]
        try:
            spec = BundleSpec(flag, FanoFiber.from_rays(rays), TorusMap(D))
        except SurjectivityError:
            continue
        for _ in range(30):
            if check_fano(spec).ample:
                specs.append(spec)
                break
            spec = BundleSpec(flag, spec.fiber, spec.tau.scaled(2))
    return specs


ACCEPTANCE_LINES = []


def record(criterion, ok, detail=""):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}" + (f": {detail}" if detail else ""))
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
