"""Exact rational polytopes and integration of products of affine forms.

Polytopes of lower dimension than their ambient space are measured in the
chart given by the pivot coordinates of their affine span (the reduced row
echelon form of the span's direction vectors).  That measure differs from
induced Lebesgue measure by a constant factor, which cancels in every
barycenter and ratio computed here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import _linalg as la
from .exceptions import PolytopeError

Point = tuple


@dataclass(frozen=True)
class AffineForm:
    """``y -> coeffs . y + constant``."""

    coeffs: tuple
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        object.__setattr__(self, "constant", Fraction(self.constant))

    @classmethod
    def coordinate(cls, dim: int, i: int) -> "AffineForm":
        return cls(tuple(int(j == i) for j in range(dim)), 0)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __call__(self, y: Sequence) -> Fraction:
        if len(y) != self.dim:
            raise ValueError(f"form of dimension {self.dim} evaluated at a point of dimension {len(y)}")
        return la.dot(self.coeffs, y) + self.constant

    def __add__(self, other: "AffineForm") -> "AffineForm":
        return AffineForm(la.add(self.coeffs, other.coeffs), self.constant + other.constant)

    def __mul__(self, c) -> "AffineForm":
        return AffineForm(la.scale(c, self.coeffs), Fraction(c) * self.constant)

    __rmul__ = __mul__

    def pullback(self, matrix: Sequence[Sequence], offset: Sequence) -> "AffineForm":
        """The form ``u -> self(matrix @ u + offset)``."""
        return AffineForm(la.vecmat(self.coeffs, matrix), self(list(offset)))

    def is_positive_multiple_of(self, other: "AffineForm") -> bool:
        a = list(self.coeffs) + [self.constant]
        b = list(other.coeffs) + [other.constant]
        i = next((k for k, v in enumerate(b) if v != 0), None)
        if i is None or a[i] == 0 or (a[i] > 0) != (b[i] > 0):
            return False
        r = a[i] / b[i]
        return all(x == r * y for x, y in zip(a, b))


def _affine_dim(points: Sequence[Sequence]) -> int:
    if not points:
        return -1
    p0 = points[0]
    return la.rank([la.sub(p, p0) for p in points[1:]]) if len(points) > 1 else 0


def _span_pivots(points: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    p0 = points[0]
    R, piv = la.rref([la.sub(p, p0) for p in points[1:]] or [[0] * len(p0)])
    return R[: len(piv)], piv


@dataclass(frozen=True)
class Simplex:
    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(tuple(Fraction(c) for c in p) for p in self.points))

    @property
    def dim(self) -> int:
        return len(self.points) - 1

    @cached_property
    def volume(self) -> Fraction:
        """Volume in the pivot-coordinate chart of the simplex's affine span."""
        k = self.dim
        if k == 0:
            return Fraction(1)
        p0 = self.points[0]
        edges = [la.sub(p, p0) for p in self.points[1:]]
        _, piv = la.rref(edges)
        if len(piv) != k:
            return Fraction(0)
        return abs(la.det([[e[c] for c in piv] for e in edges])) / math.factorial(k)


@dataclass(frozen=True)
class RationalPolytope:
    """Bounded polytope ``{y : f(y) >= 0 for f in hrep, g(y) = 0 for g in equations}``."""

    hrep: tuple
    vertices: tuple
    equations: tuple = ()

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @cached_property
    def affine_dim(self) -> int:
        return _affine_dim(self.vertices)

    @classmethod
    def from_hrep(cls, forms: Iterable[AffineForm], equations: Iterable[AffineForm] = (),
                  check_redundancy: bool = True) -> "RationalPolytope":
        forms = tuple(forms)
        equations = tuple(equations)
        verts = vertex_enumeration(forms, equations)
        poly = cls(forms, tuple(verts), equations)
        if check_redundancy:
            _check_irredundant(poly)
        return poly

    def active(self, form_index: int) -> list[Point]:
        f = self.hrep[form_index]
        return [v for v in self.vertices if f(v) == 0]

    def volume(self) -> Fraction:
        return sum((s.volume for s in triangulate(self)), Fraction(0))

    def translate(self, shift: Sequence) -> "RationalPolytope":
        return self.affine_image(None, shift)

    def affine_image(self, matrix, offset: Sequence) -> "RationalPolytope":
        """Image under the injective map ``y -> matrix @ y + offset``.

        ``matrix=None`` means the identity.  Facets keep their order, and each
        image facet form takes the same value as its preimage form.
        """
        d = self.ambient_dim
        offset = [Fraction(c) for c in offset]
        if matrix is None:
            matrix = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
        matrix = la.to_fraction_matrix(matrix)
        s, m = len(matrix), len(matrix[0])
        if m != d or len(offset) != s:
            raise ValueError("dimension mismatch in affine image")
        if la.rank(matrix) != m:
            raise PolytopeError("affine map is not injective")
        # left inverse through an invertible m x m block of rows
        _, rows = la.rref(la.transpose(matrix))
        block_inv = la.inverse([matrix[i] for i in rows])
        left = [[Fraction(0)] * s for _ in range(m)]
        for a in range(m):
            for b, i in enumerate(rows):
                left[a][i] = block_inv[a][b]
        back = la.matvec(left, offset)
        hrep = tuple(AffineForm(la.vecmat(f.coeffs, left), f.constant - la.dot(f.coeffs, back))
                     for f in self.hrep)
        normals = la.nullspace(la.transpose(matrix), s)
        eqs = [AffineForm(n, -la.dot(n, offset)) for n in normals]
        eqs += [AffineForm(la.vecmat(g.coeffs, left), g.constant - la.dot(g.coeffs, back))
                for g in self.equations]
        verts = tuple(tuple(la.add(la.matvec(matrix, v), offset)) for v in self.vertices)
        return RationalPolytope(hrep, tuple(sorted(verts)), tuple(eqs))


def _check_irredundant(poly: RationalPolytope) -> None:
    k = poly.affine_dim
    seen = []
    for i, f in enumerate(poly.hrep):
        act = frozenset(poly.active(i))
        if _affine_dim(sorted(act)) != k - 1:
            raise PolytopeError(f"redundant inequality #{i} (no facet)", witness=i)
        if act in seen:
            raise PolytopeError(f"inequality #{i} duplicates another facet", witness=i)
        seen.append(act)


def _solve_active(rows: list[AffineForm], d: int):
    A = [list(f.coeffs) for f in rows]
    b = [-f.constant for f in rows]
    R, piv = la.rref([a + [c] for a, c in zip(A, b)])
    if piv != list(range(d)):
        return None
    return tuple(R[i][d] for i in range(d))


def _check_bounded(forms: Sequence[AffineForm], equations: Sequence[AffineForm], d: int) -> None:
    """Raise unless the recession cone ``{r : a.r >= 0, e.r = 0}`` is zero."""
    A = [list(f.coeffs) for f in forms]
    E = [list(g.coeffs) for g in equations]
    if la.rank(A + E) < d:
        raise PolytopeError("unbounded: the constraint normals do not span")
    base = la.rank(E) if E else 0
    for sub in combinations(range(len(A)), d - 1 - base):
        M = [A[i] for i in sub] + E
        ker = la.nullspace(M, d)
        if len(ker) != 1:
            continue
        r = ker[0]
        for ray in (r, la.scale(-1, r)):
            if all(la.dot(a, ray) >= 0 for a in A):
                raise PolytopeError("unbounded: recession direction found", witness=tuple(ray))


def vertex_enumeration(forms: Sequence[AffineForm], equations: Sequence[AffineForm] = ()) -> list[Point]:
    """Vertices of ``{f >= 0, g = 0}`` by exhaustive active-set enumeration.

    Output is deduplicated and sorted lexicographically.
    """
    forms = list(forms)
    equations = list(equations)
    if not forms and not equations:
        raise PolytopeError("empty constraint system")
    d = (forms or equations)[0].dim
    _check_bounded(forms, equations, d)
    need = d - (la.rank([list(g.coeffs) for g in equations]) if equations else 0)
    found = set()
    for sub in combinations(forms, need):
        v = _solve_active(list(sub) + equations, d)
        if v is None:
            continue
        if all(f(v) >= 0 for f in forms):
            found.add(v)
    if not found:
        raise PolytopeError("infeasible constraint system")
    return sorted(found)


def from_fano_rays(rays: Iterable[Sequence[int]]) -> RationalPolytope:
    """``{y : <p_i, y> + 1 >= 0}`` for primitive integer rays ``p_i``."""
    rays = [tuple(r) for r in rays]
    if not rays:
        raise PolytopeError("at least one ray is required")
    d = len(rays[0])
    for r in rays:
        if len(r) != d:
            raise PolytopeError("rays of different dimensions")
        if any(int(c) != c for c in r):
            raise PolytopeError(f"ray {r} is not integral", witness=r)
        if math.gcd(*(int(c) for c in r)) != 1:
            raise PolytopeError(f"ray {r} is not primitive", witness=r)
    poly = RationalPolytope.from_hrep([AffineForm(r, 1) for r in rays])
    if poly.affine_dim != d:
        raise PolytopeError("polytope is not full-dimensional")
    return poly


def contains(poly: RationalPolytope, point: Sequence, strict: bool = False) -> bool:
    if len(point) != poly.ambient_dim:
        raise ValueError("dimension mismatch")
    if any(g(point) != 0 for g in poly.equations):
        return False
    vals = [f(point) for f in poly.hrep]
    return all(v > 0 for v in vals) if strict else all(v >= 0 for v in vals)


def hrep_from_vertices(points: Sequence[Sequence]) -> list[AffineForm]:
    """Facet forms of the convex hull of full-dimensional ``points``.

    Brute force over affinely independent point subsets; each facet form is
    scaled so its coefficient vector is primitive-integral when possible.
    """
    pts = sorted({tuple(Fraction(c) for c in p) for p in points})
    d = len(pts[0])
    facets = []
    for sub in combinations(pts, d):
        p0 = sub[0]
        edges = [la.sub(p, p0) for p in sub[1:]]
        if d > 1 and la.rank(edges) != d - 1:
            continue
        normal = la.nullspace(edges, d)[0] if d > 1 else [Fraction(1)]
        f = AffineForm(normal, -la.dot(normal, p0))
        vals = [f(p) for p in pts]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            f = f * -1
        else:
            continue
        f = _normalize(f)
        if not any(f == g for g in facets):
            facets.append(f)
    return facets


def _normalize(f: AffineForm) -> AffineForm:
    vals = list(f.coeffs) + [f.constant]
    den = math.lcm(*(v.denominator for v in vals))
    ints = [int(v * den) for v in vals]
    g = math.gcd(*ints)
    return AffineForm([Fraction(x, g) for x in ints[:-1]], Fraction(ints[-1], g))


# ---------------------------------------------------------------------------
# triangulation and integration


def triangulate(poly: RationalPolytope) -> list[Simplex]:
    """Pulling triangulation: cone from the lexicographically smallest vertex
    over the recursively triangulated facets not containing it."""
    return [Simplex(s) for s in _pull(tuple(poly.vertices), poly.affine_dim, poly.hrep)]


def _pull(verts: tuple, k: int, forms: Sequence[AffineForm]) -> list[tuple]:
    if k == 0:
        return [(verts[0],)]
    if k == 1:
        return [(verts[0], verts[-1])]
    apex = verts[0]
    out = []
    seen = set()
    for f in forms:
        face = tuple(v for v in verts if f(v) == 0)
        if not face or apex in face or face in seen:
            continue
        seen.add(face)
        if _affine_dim(face) != k - 1:
            continue
        for s in _pull(face, k - 1, forms):
            out.append((apex,) + s)
    return out


def _complete_homogeneous(values: Sequence[Fraction], q: int) -> Fraction:
    h = [Fraction(1)] + [Fraction(0)] * q
    for w in values:
        for j in range(1, q + 1):
            h[j] += w * h[j - 1]
    return h[q]


def integrate_product_of_affine_forms(simplex: Simplex, forms: Sequence[AffineForm]) -> Fraction:
    """Exact integral of ``prod(forms)`` over ``simplex``.

    Polarizes the product into powers of single affine forms and integrates
    each with ``int l^q = vol * q! k! / (q+k)! * h_q(l(v_0), ..., l(v_k))``.
    """
    forms = list(forms)
    dim = len(simplex.points[0])
    for f in forms:
        if f.dim != dim:
            raise ValueError(f"form dimension {f.dim} does not match simplex dimension {dim}")
    vol = simplex.volume
    q = len(forms)
    if q == 0 or vol == 0:
        return vol
    k = simplex.dim
    vals = [[f(p) for p in simplex.points] for f in forms]
    total = Fraction(0)
    # sum over nonempty subsets S of (-1)^(q-|S|) h_q(sum_{j in S} l_j at vertices)
    for mask in range(1, 1 << q):
        members = [j for j in range(q) if mask >> j & 1]
        w = [sum(vals[j][i] for j in members) for i in range(k + 1)]
        sign = -1 if (q - len(members)) % 2 else 1
        total += sign * _complete_homogeneous(w, q)
    return vol * math.factorial(k) * total / math.factorial(q + k)


def integrate_by_expansion(simplex: Simplex, forms: Sequence[AffineForm]) -> Fraction:
    """Same integral by expanding into monomials in barycentric parameters.

    ``int_{std simplex} lam^a = prod(a_i!) / (|a| + k)!``; the Jacobian of the
    standard simplex onto ``simplex`` is ``k! * vol``.
    """
    k = simplex.dim
    p0 = simplex.points[0]
    poly = {(0,) * k: Fraction(1)}
    for f in forms:
        lin = [f(p0)] + [f(p) - f(p0) for p in simplex.points[1:]]
        nxt: dict = {}
        for expo, c in poly.items():
            nxt[expo] = nxt.get(expo, 0) + c * lin[0]
            for i in range(k):
                if lin[i + 1]:
                    e = list(expo)
                    e[i] += 1
                    e = tuple(e)
                    nxt[e] = nxt.get(e, 0) + c * lin[i + 1]
        poly = nxt
    total = Fraction(0)
    for expo, c in poly.items():
        num = math.prod(math.factorial(a) for a in expo)
        total += c * Fraction(num, math.factorial(sum(expo) + k))
    return total * math.factorial(k) * simplex.volume


def integrate(poly: RationalPolytope, forms: Sequence[AffineForm]) -> Fraction:
    return sum((integrate_product_of_affine_forms(s, forms) for s in triangulate(poly)), Fraction(0))


def moments(poly: RationalPolytope, forms: Sequence[AffineForm]) -> tuple[Fraction, list[Fraction]]:
    """Mass and first moments of the density ``prod(forms)``."""
    simplices = triangulate(poly)
    d = poly.ambient_dim
    mass = Fraction(0)
    first = [Fraction(0)] * d
    for s in simplices:
        mass += integrate_product_of_affine_forms(s, forms)
        for i in range(d):
            first[i] += integrate_product_of_affine_forms(s, [AffineForm.coordinate(d, i), *forms])
    return mass, first


def weighted_barycenter(poly: RationalPolytope, forms: Sequence[AffineForm]) -> tuple:
    mass, first = moments(poly, forms)
    if mass == 0:
        raise PolytopeError("density has zero total mass")
    return tuple(m / mass for m in first)


def brute_force_integrate(poly: RationalPolytope, forms: Sequence[AffineForm],
                          subdivisions: int = 10**6) -> float:
    """Midpoint Riemann sum of ``prod(forms)`` over a grid clipped to ``poly``.

    The grid covers the bounding box of the polytope (in its span chart) with
    about ``subdivisions`` cells.  Floating point throughout; an oracle for the
    exact routines, not a replacement.
    """
    if subdivisions < 1:
        raise ValueError("subdivisions must be >= 1")
    k = poly.affine_dim
    verts = [list(v) for v in poly.vertices]
    if k == 0:
        return float(np.prod([float(f(verts[0])) for f in forms]))
    R, piv = _span_pivots(verts)
    x0 = verts[0]
    # lift(u) = x0 + sum_i (u_i - x0[piv_i]) R_i
    lift = la.transpose(R)
    lift_off = la.sub(x0, la.vecmat([x0[p] for p in piv], R))

    def to_chart(f: AffineForm):
        g = f.pullback(lift, lift_off)
        return np.array([float(c) for c in g.coeffs]), float(g.constant)

    cons = [to_chart(f) for f in poly.hrep]
    dens = [to_chart(f) for f in forms]
    U = np.array([[float(v[p]) for p in piv] for v in verts])
    lo, hi = U.min(axis=0), U.max(axis=0)
    n = max(1, int(round(subdivisions ** (1.0 / k))))
    h = (hi - lo) / n
    axes = [lo[i] + h[i] * (np.arange(n) + 0.5) for i in range(k)]
    # cells cut by a facet are resampled on a finer sub-grid
    sub = 16 if k <= 2 else 4
    radius = [float(np.abs(a) @ h) / 2 for a, _ in cons]
    offsets = np.stack(np.meshgrid(*[(np.arange(sub) + 0.5) / sub - 0.5] * k, indexing="ij"),
                       axis=-1).reshape(-1, k) * h

    def density(p):
        val = np.ones(len(p))
        for a, c in dens:
            val *= p @ a + c
        return val

    total = 0.0
    ncells = n ** k
    chunk = 1 << 18
    for start in range(0, ncells, chunk):
        idx = np.unravel_index(np.arange(start, min(start + chunk, ncells)), (n,) * k)
        pts = np.stack([axes[i][idx[i]] for i in range(k)], axis=-1)
        inside = np.ones(len(pts), dtype=bool)
        outside = np.zeros(len(pts), dtype=bool)
        for (a, c), rad in zip(cons, radius):
            v = pts @ a + c
            inside &= v >= rad
            outside |= v < -rad
        total += density(pts[inside]).sum()
        cut = pts[~inside & ~outside]
        if len(cut):
            fine = (cut[:, None, :] + offsets[None, :, :]).reshape(-1, k)
            mask = np.ones(len(fine), dtype=bool)
            for a, c in cons:
                mask &= fine @ a + c >= 0
            total += density(fine[mask]).sum() / len(offsets)
    return float(total * np.prod(h))
