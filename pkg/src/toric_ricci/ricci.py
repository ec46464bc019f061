"""The greatest lower bound on Ricci curvature from the weighted barycenter."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _linalg as la
from .bundle import (BundleSpec, build_delta_M, canonical_shift, density_forms, embedding,
                     pullback_forms, require_fano)
from .exceptions import PolytopeError
from .polytope import RationalPolytope, contains, weighted_barycenter


@dataclass(frozen=True)
class RicciBoundResult:
    R: Fraction
    P: tuple
    P_F: tuple
    binding_facets: tuple
    shift: tuple

    @property
    def is_KE(self) -> bool:
        return self.R == 1

    @property
    def R_float(self) -> str:
        return f"{float(self.R):.15g}"


def path_point(P: Sequence, origin: Sequence, t) -> list[Fraction]:
    """``(-t P + origin) / (1 - t)``."""
    t = Fraction(t)
    return [(o - t * p) / (1 - t) for p, o in zip(P, origin)]


def path_bound(hrep, P: Sequence, origin: Sequence) -> tuple[Fraction, tuple]:
    """Largest ``t`` in ``[0, 1]`` keeping ``path_point(P, origin, t)`` in ``{f >= 0}``.

    After clearing ``1 - t`` each facet gives ``f(origin) - t f(P) >= 0``.
    Returns the bound and the facets attaining it (none when it is 1).
    """
    R = Fraction(1)
    ratios = []
    for f in hrep:
        a, b = f(list(origin)), f(list(P))
        if a <= 0:
            raise PolytopeError("origin of the path is not interior", witness=tuple(origin))
        ratios.append(a / b if b > a else None)
        if b > a:
            R = min(R, a / b)
    binding = tuple(i for i, q in enumerate(ratios) if q is not None and q == R) if R < 1 else ()
    return R, binding


def compute_R(spec: BundleSpec) -> RicciBoundResult:
    """Exact ``R(M)`` through the fiber polytope and the pulled-back density."""
    require_fano(spec)
    delta_F = spec.fiber.delta_F
    P_F = weighted_barycenter(delta_F, pullback_forms(spec))
    R, binding = path_bound(delta_F.hrep, P_F, [0] * len(P_F))
    shift = canonical_shift(spec)
    P = tuple(la.add(la.matvec(embedding(spec), P_F), shift))
    return RicciBoundResult(R, P, P_F, binding, tuple(shift))


def direct_R(spec: BundleSpec) -> tuple[Fraction, tuple, RationalPolytope]:
    """Same bound computed entirely on the polytope of the total space.

    Independent of :func:`compute_R`'s pullback; used for cross-checks.
    Returns ``(R, P, delta_M)``.
    """
    require_fano(spec)
    delta_M = build_delta_M(spec)
    P = weighted_barycenter(delta_M, [d.form for d in density_forms(spec)])
    R, _ = path_bound(delta_M.hrep, P, canonical_shift(spec))
    return R, P, delta_M


def toric_R(polytope: RationalPolytope) -> RicciBoundResult:
    """Toric case: uniform density, no shift."""
    origin = [0] * polytope.ambient_dim
    if not contains(polytope, origin, strict=True):
        raise PolytopeError("origin is not interior to the polytope")
    b = weighted_barycenter(polytope, [])
    R, binding = path_bound(polytope.hrep, b, origin)
    return RicciBoundResult(R, b, b, binding, tuple(Fraction(0) for _ in origin))


def bisect_check(spec: BundleSpec, tolerance=Fraction(1, 10**12)) -> Fraction:
    """Approximate ``R`` by bisection on exact membership tests along the path.

    Returns the largest tested ``t`` whose path point lies in the polytope;
    the true value is within ``tolerance`` above it.
    """
    tolerance = Fraction(tolerance)
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    _, P, delta_M = direct_R(spec)
    origin = canonical_shift(spec)
    lo, hi = Fraction(0), Fraction(1)
    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        if contains(delta_M, path_point(P, origin, mid)):
            lo = mid
        else:
            hi = mid
    return lo
