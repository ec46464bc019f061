"""Root systems and generalized flag data over exact rationals.

Conventions used throughout the package:

* Elements of the Cartan subalgebra are coordinate vectors in the basis
  ``iH_{a_1}, ..., iH_{a_r}`` attached to the simple roots.  The invariant
  inner product on that basis is the root Gram matrix, so ``iH_b`` for an
  arbitrary root ``b`` has the same coordinates as ``b`` itself.
* The real root functional ``rho_b = i*b`` acts by
  ``rho_b(iH_c) = -<b, c>``.
* Long roots of every simple factor have squared length 2.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from . import _linalg as la
from .exceptions import ChamberError, ComplexStructureError, RootDataError

Root = tuple  # integer coefficient vector over the simple roots

_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 4}
_EXCEPTIONAL = {"E": (6, 7, 8), "F": (4,), "G": (2,)}


def _dynkin(family: str, n: int) -> tuple[list[Fraction], list[tuple[int, int]]]:
    """Squared root lengths and Dynkin edges (Bourbaki numbering, 0-based)."""
    two, one = Fraction(2), Fraction(1)
    chain = [(i, i + 1) for i in range(n - 1)]
    if family == "A":
        return [two] * n, chain
    if family == "B":
        return [two] * (n - 1) + [one], chain
    if family == "C":
        return [one] * (n - 1) + [two], chain
    if family == "D":
        return [two] * n, [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    if family == "E":
        edges = [(0, 2), (1, 3), (2, 3)] + [(i, i + 1) for i in range(3, n - 1)]
        return [two] * n, edges
    if family == "F":
        return [two, two, one, one], chain
    if family == "G":
        return [Fraction(2, 3), two], chain
    raise RootDataError(f"unknown root system family {family!r}")


def _check_factor(family: str, rank: int) -> None:
    if family in _EXCEPTIONAL:
        if rank not in _EXCEPTIONAL[family]:
            raise RootDataError(f"invalid rank {rank} for type {family}")
    elif family in _MIN_RANK:
        if not isinstance(rank, int) or rank < _MIN_RANK[family]:
            raise RootDataError(f"invalid rank {rank} for type {family}")
    else:
        raise RootDataError(f"unknown root system family {family!r}")


def _sort_key(root: Root):
    # by height, then simple-root index order (a_1 before a_2, ...)
    return (sum(root), tuple(-c for c in root))


@dataclass(frozen=True)
class RootSystem:
    factors: tuple
    rank: int
    positive_roots: tuple
    gram: tuple

    # -- basic pairings -------------------------------------------------
    def inner(self, a: Sequence, b: Sequence) -> Fraction:
        """Invariant inner product of two vectors in simple-root/coroot coordinates."""
        return la.dot(a, la.matvec(self.gram, b))

    def rho(self, root: Sequence, h: Sequence) -> Fraction:
        """Value of the real root functional ``i*root`` on ``h``."""
        return -self.inner(root, h)

    @property
    def roots(self) -> tuple:
        return self.positive_roots + tuple(tuple(-c for c in r) for r in self.positive_roots)

    @property
    def root_set(self) -> frozenset:
        return frozenset(self.roots)

    def cartan_matrix(self) -> list[list[int]]:
        G = self.gram
        return [[int(2 * G[i][j] / G[j][j]) for j in range(self.rank)] for i in range(self.rank)]

    def simple_root(self, i: int) -> Root:
        return tuple(int(k == i) for k in range(self.rank))

    def scaled(self, lam) -> "RootSystem":
        """Same root data with the Gram matrix divided by ``lam``."""
        lam = Fraction(lam)
        if lam <= 0:
            raise ValueError("scale must be positive")
        return RootSystem(self.factors, self.rank, self.positive_roots,
                          tuple(tuple(g / lam for g in row) for row in self.gram))


def build_root_system(factors: Iterable) -> RootSystem:
    """Root system of a semisimple algebra given as ``[(family, rank), ...]``.

    ``("E", 6)`` etc. name the exceptional types.  Positive roots are found by
    closing the simple roots under simple reflections while staying positive.
    """
    factors = tuple((str(f).upper(), int(n)) for f, n in factors)
    if not factors:
        raise RootDataError("at least one simple factor is required")
    lengths: list[Fraction] = []
    edges: list[tuple[int, int]] = []
    for family, n in factors:
        _check_factor(family, n)
        d, e = _dynkin(family, n)
        off = len(lengths)
        lengths += d
        edges += [(i + off, j + off) for i, j in e]
    r = len(lengths)
    gram = [[Fraction(0)] * r for _ in range(r)]
    for i in range(r):
        gram[i][i] = lengths[i]
    for i, j in edges:
        gram[i][j] = gram[j][i] = -max(lengths[i], lengths[j]) / 2

    simple = [tuple(int(k == i) for k in range(r)) for i in range(r)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(r):
                if beta == simple[i]:
                    continue
                pair = sum(beta[k] * gram[k][i] for k in range(r))
                coeff = 2 * pair / gram[i][i]
                assert coeff.denominator == 1
                image = tuple(beta[k] - (int(coeff) if k == i else 0) for k in range(r))
                if image not in found:
                    found.add(image)
                    nxt.append(image)
        frontier = nxt
    positive = tuple(sorted(found, key=_sort_key))
    return RootSystem(factors, r, positive, tuple(tuple(row) for row in gram))


# ---------------------------------------------------------------------------
# flags


@dataclass(frozen=True)
class Violation:
    """Witness ``(alpha, beta, alpha + beta)`` breaking the closure condition."""

    alpha: Root
    beta: Root
    total: Root

    def __str__(self):
        return f"alpha={self.alpha}, beta={self.beta}, alpha+beta={self.total}"


@dataclass(frozen=True)
class FlagStructure:
    rootsys: RootSystem
    parabolic: tuple
    R_k: tuple
    R_m_plus: tuple
    Zk_basis: tuple
    gram_Zk: tuple

    @property
    def dim_center(self) -> int:
        return len(self.Zk_basis)

    # coordinates on Z(k): x -> sum_j x_j W_j  (W_j the rows of Zk_basis)
    def from_center_coords(self, x: Sequence) -> list[Fraction]:
        return la.vecmat(x, self.Zk_basis) if self.Zk_basis else [Fraction(0)] * self.rootsys.rank

    def center_coords(self, h: Sequence) -> list[Fraction]:
        """Coordinates in ``Zk_basis`` of the orthogonal projection of ``h`` onto Z(k)."""
        G = self.rootsys.gram
        rhs = [la.dot(W, la.matvec(G, h)) for W in self.Zk_basis]
        return la.solve(self.gram_Zk, rhs) if rhs else []

    def covector_values(self, x: Sequence) -> list[Fraction]:
        """Values on the ``Zk_basis`` rows of the covector whose dual has coordinates ``x``."""
        return la.matvec(self.gram_Zk, x)

    def rho_coeffs(self, beta: Sequence) -> list[Fraction]:
        """Coefficients of ``x -> rho_beta(sum_j x_j W_j)``."""
        return [self.rootsys.rho(beta, W) for W in self.Zk_basis]


def _kernel_basis(rootsys: RootSystem, parabolic: Sequence[int]) -> list[list[Fraction]]:
    G = rootsys.gram
    rows = [list(G[i]) for i in parabolic]
    return la.nullspace(rows, rootsys.rank)


def find_violation(rootsys: RootSystem, R_k: Iterable, R_m_plus: Iterable) -> Violation | None:
    """First failure of: a in R_k u R_m+, b in R_m+, a+b a root  =>  a+b in R_m+."""
    roots = rootsys.root_set
    plus = list(R_m_plus)
    plus_set = set(plus)
    for alpha in list(R_k) + plus:
        for beta in plus:
            total = tuple(a + b for a, b in zip(alpha, beta))
            if total in roots and total not in plus_set:
                return Violation(tuple(alpha), tuple(beta), total)
    return None


def make_flag(rootsys: RootSystem, parabolic: Iterable[int] = (), orientation="default") -> FlagStructure:
    """Partition the roots for the parabolic set ``parabolic`` of simple-root indices.

    ``orientation`` is ``"default"`` (R_m+ = positive roots outside R_k) or an
    explicit list of roots making up R_m+.
    """
    S = tuple(sorted(set(int(i) for i in parabolic)))
    if any(i < 0 or i >= rootsys.rank for i in S):
        raise RootDataError(f"parabolic indices {S} out of range for rank {rootsys.rank}")
    inside = lambda root: all(root[j] == 0 for j in range(rootsys.rank) if j not in S)
    R_k = tuple(r for r in rootsys.roots if inside(r))
    outside_pos = [r for r in rootsys.positive_roots if not inside(r)]

    if isinstance(orientation, str):
        if orientation != "default":
            raise ComplexStructureError(f"unknown orientation {orientation!r}")
        plus = tuple(outside_pos)
    else:
        plus = tuple(tuple(int(c) for c in r) for r in orientation)
        roots = rootsys.root_set
        for r in plus:
            if len(r) != rootsys.rank or r not in roots:
                raise ComplexStructureError(f"{r} is not a root", witness=r)
            if inside(r):
                raise ComplexStructureError(f"{r} lies in R_k", witness=r)
        if len(set(plus)) != len(plus):
            raise ComplexStructureError("repeated root in orientation")
        for r in outside_pos:
            neg = tuple(-c for c in r)
            if (r in plus) == (neg in plus):
                raise ComplexStructureError(
                    f"exactly one of {r}, {neg} must be in R_m+", witness=r)
        bad = find_violation(rootsys, R_k, plus)
        if bad is not None:
            raise ComplexStructureError(f"orientation not closed: {bad}", witness=bad)

    basis = _kernel_basis(rootsys, S)
    G = rootsys.gram
    gram_Zk = [[la.dot(u, la.matvec(G, v)) for v in basis] for u in basis]
    return FlagStructure(
        rootsys=rootsys,
        parabolic=S,
        R_k=R_k,
        R_m_plus=plus,
        Zk_basis=tuple(tuple(row) for row in basis),
        gram_Zk=tuple(tuple(row) for row in gram_Zk),
    )


def validate_complex_structure(flag: FlagStructure) -> Violation | None:
    """``None`` if the partition defines an invariant complex structure, else a witness.

    Checks R_m+ = -R_m-, that R_k, R_m+, -R_m+ cover the roots disjointly, and
    the closure condition by exhaustive enumeration.
    """
    roots = flag.rootsys.root_set
    plus = set(flag.R_m_plus)
    minus = {tuple(-c for c in r) for r in plus}
    k = set(flag.R_k)
    if plus & minus or plus & k or (plus | minus | k) != roots:
        return Violation((), (), ())
    return find_violation(flag.rootsys, flag.R_k, flag.R_m_plus)


def center_project(flag: FlagStructure, h: Sequence) -> list[Fraction]:
    """Z(k)-component of ``h`` for the decomposition orthogonal w.r.t. the invariant form."""
    return flag.from_center_coords(flag.center_coords(h))


def in_center(flag: FlagStructure, h: Sequence) -> bool:
    h = [Fraction(c) for c in h]
    return center_project(flag, h) == h


def compute_IV(flag: FlagStructure) -> list[Fraction]:
    """``2*pi*I_V = -sum_{a in R_m+} iH_a`` in coroot coordinates.

    Raises :class:`ChamberError` if the result is not strictly inside the
    chamber, which would mean the orientation is inconsistent.
    """
    r = flag.rootsys.rank
    I = [Fraction(-sum(a[j] for a in flag.R_m_plus)) for j in range(r)]
    if not in_center(flag, I):
        raise ChamberError("2*pi*I_V does not lie in Z(k)", witness=I)
    for beta in flag.R_m_plus:
        if flag.rootsys.rho(beta, I) <= 0:
            raise ChamberError(f"2*pi*I_V not in the chamber: rho_{beta} <= 0", witness=beta)
    return I


def chamber_membership(flag: FlagStructure, w: Sequence, strict: bool = True) -> bool:
    if not in_center(flag, w):
        raise ValueError(f"{list(w)} does not lie in Z(k)")
    vals = (flag.rootsys.rho(beta, w) for beta in flag.R_m_plus)
    return all(v > 0 for v in vals) if strict else all(v >= 0 for v in vals)


def character_shift(flag: FlagStructure, values: Sequence) -> list[Fraction]:
    """Restrict a covector (given by its values on ``iH_{a_j}``) to Z(k).

    The result is in the same chart as every Z(k)^* polytope of the package:
    coordinates ``x`` of the Z(k)-vector dual to the restricted covector.
    """
    values = [Fraction(v) for v in values]
    if len(values) != flag.rootsys.rank:
        raise ValueError("character needs one value per simple coroot")
    rhs = [la.dot(W, values) for W in flag.Zk_basis]
    return la.solve(flag.gram_Zk, rhs) if rhs else []


def sign_assignments(rootsys: RootSystem, parabolic: Iterable[int] = ()):
    """Every choice of one root from each pair {b, -b} outside R_k."""
    S = set(parabolic)
    outside = [r for r in rootsys.positive_roots
               if any(r[j] != 0 for j in range(rootsys.rank) if j not in S)]
    for signs in product((1, -1), repeat=len(outside)):
        yield tuple(tuple(s * c for c in r) for s, r in zip(signs, outside))
