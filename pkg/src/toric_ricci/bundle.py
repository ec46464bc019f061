"""Homogeneous toric bundle data: the polytope of the total space, the
Duistermaat-Heckman density, and the ampleness / Fano tests.

All polytopes living in Z(k)^* are stored multiplied by 2*pi, so that every
coordinate is rational.  A point of Z(k)^* is recorded by the coordinates
``x`` of its dual vector ``sum_j x_j W_j`` in Z(k), where ``W_j`` are the
rows of ``FlagStructure.Zk_basis``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import _linalg as la
from .exceptions import NotFanoError, PolytopeError, SurjectivityError
from .lie import FlagStructure, character_shift, compute_IV
from .polytope import AffineForm, RationalPolytope, contains, from_fano_rays


@dataclass(frozen=True)
class TorusMap:
    """Differential of the torus homomorphism, ``D[i][j] = dtau(iH_{a_j})_i``."""

    D: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(c) for c in row) for row in self.D)
        if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("torus map must be a non-empty rectangular matrix")
        object.__setattr__(self, "D", rows)

    @property
    def m(self) -> int:
        return len(self.D)

    @property
    def r(self) -> int:
        return len(self.D[0])

    def scaled(self, lam) -> "TorusMap":
        lam = Fraction(lam)
        return TorusMap([[c / lam for c in row] for row in self.D])


@dataclass(frozen=True)
class FanoFiber:
    rays: tuple
    delta_F: RationalPolytope = field(compare=False, repr=False)

    @classmethod
    def from_rays(cls, rays: Sequence[Sequence[int]]) -> "FanoFiber":
        rays = tuple(tuple(int(c) for c in r) for r in rays)
        return cls(rays, from_fano_rays(rays))

    @property
    def m(self) -> int:
        return len(self.rays[0])


@dataclass(frozen=True)
class BundleSpec:
    """Flag, fiber and torus map of a homogeneous toric bundle.

    With ``flag=None`` the spec is in toric mode: the base is a point, the
    embedding is the identity, the shift is zero and the density is 1.
    """

    flag: Optional[FlagStructure]
    fiber: FanoFiber
    tau: Optional[TorusMap] = None
    lifted_polytope: Optional[RationalPolytope] = None
    character: Optional[tuple] = None

    def __post_init__(self):
        if self.flag is None:
            return
        if self.tau is None:
            raise ValueError("a torus map is required outside toric mode")
        if self.tau.m != self.fiber.m:
            raise ValueError(f"torus map has {self.tau.m} rows, fiber torus has rank {self.fiber.m}")
        if self.tau.r != self.flag.rootsys.rank:
            raise ValueError(f"torus map has {self.tau.r} columns, root system has rank {self.flag.rootsys.rank}")
        for j in self.flag.parabolic:
            if any(row[j] != 0 for row in self.tau.D):
                raise SurjectivityError(f"torus map must vanish on iH_a{j + 1} (simple root of K)", witness=j)
        restricted = la.matmul(self.tau.D, la.transpose(self.flag.Zk_basis)) if self.flag.Zk_basis else []
        if not restricted or la.rank(restricted) != self.tau.m:
            raise SurjectivityError("dtau restricted to Z(k) is not surjective", witness=restricted)

    @classmethod
    def toric(cls, polytope: RationalPolytope) -> "BundleSpec":
        return cls(None, FanoFiber((), polytope))

    @property
    def is_toric(self) -> bool:
        return self.flag is None


def embedding(spec: BundleSpec) -> list[list[Fraction]]:
    """Matrix of ``A``: fiber coordinates ``y`` to Z(k)^* coordinates ``x``.

    ``A(y)`` is the covector ``W -> y(dtau(W))``; its dual vector has
    coordinates ``gram_Zk^{-1} (D Zk^T)^T y``.
    """
    if spec.is_toric:
        m = spec.fiber.delta_F.ambient_dim
        return [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    flag = spec.flag
    restricted = la.matmul(spec.tau.D, la.transpose(flag.Zk_basis))
    return la.matmul(la.inverse(flag.gram_Zk), la.transpose(restricted))


def canonical_shift(spec: BundleSpec) -> list[Fraction]:
    """``2*pi*I_V^vee`` in Z(k)^* coordinates."""
    if spec.is_toric:
        return [Fraction(0)] * spec.fiber.delta_F.ambient_dim
    return spec.flag.center_coords(compute_IV(spec.flag))


def anticanonical_character(flag: FlagStructure) -> list[Fraction]:
    """Values on the simple coroots of the covector dual to ``2*pi*I_V``."""
    return la.matvec(flag.rootsys.gram, compute_IV(flag))


def build_delta_M(spec: BundleSpec) -> RationalPolytope:
    """``2*pi*Delta_M = A(Delta_F) + 2*pi*I_V^vee``; facets follow the fiber's."""
    return spec.fiber.delta_F.affine_image(embedding(spec), canonical_shift(spec))


@dataclass(frozen=True)
class DensityForm:
    root: tuple
    form: AffineForm


def density_forms(spec: BundleSpec) -> list[DensityForm]:
    """One linear form ``x -> rho_b(sum_j x_j W_j)`` per root ``b`` in R_m+."""
    if spec.is_toric:
        return []
    flag = spec.flag
    return [DensityForm(beta, AffineForm(flag.rho_coeffs(beta), 0)) for beta in flag.R_m_plus]


def pullback_forms(spec: BundleSpec) -> list[AffineForm]:
    """Density factors composed with ``y -> A(y) + shift``, as forms on the fiber polytope."""
    A = embedding(spec)
    s = canonical_shift(spec)
    return [d.form.pullback(A, s) for d in density_forms(spec)]


@dataclass(frozen=True)
class AmpleVerdict:
    """Outcome of the vertex positivity test.

    ``status`` is ``"ample"``, ``"not_ample"`` or ``"boundary"`` (some factor
    vanishes at a vertex but none is negative).  ``witness`` is the worst
    ``(vertex, root, value)`` triple, ``None`` when there are no roots.
    """

    status: str
    polytope: RationalPolytope
    witness: Optional[tuple] = None

    @property
    def ample(self) -> bool:
        return self.status == "ample"

    def __bool__(self):
        return self.ample


def _positivity(spec: BundleSpec, poly: RationalPolytope) -> AmpleVerdict:
    worst = None
    for v in poly.vertices:
        for d in density_forms(spec):
            val = d.form(v)
            if worst is None or val < worst[2]:
                worst = (v, d.root, val)
    if worst is None or worst[2] > 0:
        return AmpleVerdict("ample", poly, worst)
    return AmpleVerdict("boundary" if worst[2] == 0 else "not_ample", poly, worst)


def check_ample(spec: BundleSpec, lifted_polytope: RationalPolytope, character: Sequence) -> AmpleVerdict:
    """Shift ``A(lifted_polytope)`` by the restricted character and test every
    density factor for strict positivity at every vertex."""
    if lifted_polytope.ambient_dim != spec.fiber.delta_F.ambient_dim:
        raise PolytopeError("lifted polytope lives in a space of the wrong dimension")
    if spec.is_toric:
        shift = [Fraction(0)] * lifted_polytope.ambient_dim
    else:
        shift = character_shift(spec.flag, character)
    return _positivity(spec, lifted_polytope.affine_image(embedding(spec), shift))


def check_fano(spec: BundleSpec) -> AmpleVerdict:
    """Ampleness of the anticanonical bundle: the fiber's own polytope shifted
    by ``2*pi*I_V^vee``."""
    if spec.is_toric:
        return _positivity(spec, spec.fiber.delta_F)
    return check_ample(spec, spec.fiber.delta_F, anticanonical_character(spec.flag))


def require_fano(spec: BundleSpec) -> None:
    verdict = check_fano(spec)
    if not verdict.ample:
        raise NotFanoError(f"bundle is not Fano ({verdict.status})", witness=verdict.witness)
    if not contains(spec.fiber.delta_F, [0] * spec.fiber.delta_F.ambient_dim, strict=True):
        raise PolytopeError("origin is not interior to the fiber polytope")
