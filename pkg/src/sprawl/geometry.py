"""Centrally symmetric polytopes with exact rational coordinates.

A :class:`Perimeter` carries both representations of a symmetric convex
polytope: its extreme points and its facet functionals ``a`` (the body is
``{x : a.x <= 1}``), together with a triangulation of every facet and the
cone measure of each facet.  Everything here is exact; floats never enter.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import mpmath
import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from . import exact
from .errors import (
    DegenerateFacet,
    DimensionMismatch,
    InvalidInput,
    NotFullDimensional,
    NotGenerating,
    SingularMatrix,
    SprawlError,
)
from .exact import ONE, ZERO, Q, cross2, dot

# Above this many d-subsets the facet search takes candidate simplices from
# qhull and verifies each one exactly instead of trying every subset.
BRUTE_FORCE_SUBSETS = 20000


@dataclass(frozen=True)
class GeneratorSet:
    """A finite symmetric set of integer vectors in Z^d."""

    dimension: int
    vectors: tuple

    def __post_init__(self):
        if not self.vectors:
            raise InvalidInput("generating set is empty")
        for v in self.vectors:
            if len(v) != self.dimension:
                raise DimensionMismatch(f"vector {v} is not {self.dimension}-dimensional")
        vs = set(self.vectors)
        if any(tuple(-c for c in v) not in vs for v in vs):
            raise InvalidInput("generating set is not symmetric")

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence[int]], symmetrize: bool = True) -> "GeneratorSet":
        vs = set()
        for v in vectors:
            v = tuple(int(c) for c in v)
            if any(v):
                vs.add(v)
                if symmetrize:
                    vs.add(tuple(-c for c in v))
        if not vs:
            raise InvalidInput("generating set is empty")
        dims = {len(v) for v in vs}
        if len(dims) != 1:
            raise DimensionMismatch(f"mixed vector dimensions {sorted(dims)}")
        return cls(dims.pop(), tuple(sorted(vs)))

    @classmethod
    def standard(cls, d: int) -> "GeneratorSet":
        return cls.from_vectors([tuple(int(i == j) for j in range(d)) for i in range(d)])

    def is_full_rank(self) -> bool:
        return exact.rank([exact.vec(v) for v in self.vectors]) == self.dimension

    def generates(self) -> bool:
        """True iff the vectors generate all of Z^d (all elementary divisors are 1)."""
        if not self.is_full_rank():
            return False
        snf = smith_normal_form(Matrix([list(v) for v in self.vectors]), domain=ZZ)
        return all(abs(snf[i, i]) == 1 for i in range(self.dimension))


@dataclass(frozen=True)
class PolytopeV:
    dimension: int
    vertices: tuple


@dataclass(frozen=True)
class PolytopeH:
    dimension: int
    functionals: tuple


@dataclass(frozen=True, eq=False)
class Perimeter:
    """Boundary of a centrally symmetric convex polytope.

    ``facets[i]`` lists the vertex indices on the facet cut out by
    ``functionals[i]``; ``simplices[i]`` triangulates that facet (each simplex
    is a tuple of ``dimension`` vertex indices, fanned from the facet's first
    vertex); ``weights[i]`` is the facet's cone measure.  In the plane the
    vertices run clockwise and facet ``i`` is the edge from vertex ``i`` to
    vertex ``i + 1``.
    """

    dimension: int
    vertices: tuple
    functionals: tuple
    facets: tuple
    simplices: tuple
    cone_volumes: tuple
    weights: tuple
    volume: object

    def __eq__(self, other):
        if not isinstance(other, Perimeter):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and set(self.vertices) == set(other.vertices)
            and set(self.functionals) == set(other.functionals)
        )

    def __hash__(self):
        return hash((self.dimension, frozenset(self.vertices)))

    def __repr__(self):
        return f"Perimeter(d={self.dimension}, vertices={len(self.vertices)}, facets={len(self.facets)})"

    @property
    def vrep(self) -> PolytopeV:
        return PolytopeV(self.dimension, self.vertices)

    @property
    def hrep(self) -> PolytopeH:
        return PolytopeH(self.dimension, self.functionals)

    @classmethod
    def from_points(cls, points: Iterable[Sequence], symmetrize: bool = False) -> "Perimeter":
        """Perimeter of the convex hull of ``points``; non-extreme points are dropped."""
        pts = {exact.vec(p) for p in points}
        if symmetrize:
            pts |= {exact.neg(p) for p in pts}
        if not pts:
            raise InvalidInput("no points")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise DimensionMismatch(f"mixed point dimensions {sorted(dims)}")
        d = dims.pop()
        if any(exact.neg(p) not in pts for p in pts):
            raise InvalidInput("point set is not centrally symmetric")
        pts.discard(tuple([ZERO] * d))
        if exact.rank(list(pts)) < d:
            raise NotFullDimensional("convex hull has empty interior")
        if d == 2:
            verts = _hull_2d(pts)
            n = len(verts)
            facets = tuple((i, (i + 1) % n) for i in range(n))
            functionals = tuple(_functional([verts[i], verts[j]]) for i, j in facets)
            return cls._assemble(2, tuple(verts), functionals, facets)
        pts = sorted(pts, reverse=True)
        functionals = _facet_functionals(pts, d)
        return cls.from_incidence(d, pts, functionals)

    @classmethod
    def from_incidence(cls, d: int, points: Sequence, functionals: Sequence) -> "Perimeter":
        """Assemble from exact points and facet functionals, keeping only extreme points."""
        points = [exact.vec(p) for p in points]
        functionals = sorted({exact.vec(a) for a in functionals}, reverse=True)
        incident = [[k for k, a in enumerate(functionals) if dot(a, p) == ONE] for p in points]
        keep = [
            i for i, facs in enumerate(incident)
            if len(facs) >= d and exact.rank([functionals[k] for k in facs]) == d
        ]
        verts = tuple(points[i] for i in keep)
        if d == 2:
            return cls.from_points(verts)
        facets = tuple(
            tuple(j for j, v in enumerate(verts) if dot(a, v) == ONE) for a in functionals
        )
        return cls._assemble(d, verts, tuple(functionals), facets)

    @classmethod
    def _assemble(cls, d, verts, functionals, facets) -> "Perimeter":
        for a, f in zip(functionals, facets):
            if len(f) < d:
                raise DegenerateFacet(f"facet for functional {a} has only {len(f)} vertices")
        if d == 2:
            simplices = tuple((f,) for f in facets)
        else:
            sets = [frozenset(f) for f in facets]
            simplices = tuple(tuple(_triangulate_face(f, d - 1, sets, verts)) for f in facets)
        dfact = math.factorial(d)
        cone_volumes = []
        for simps in simplices:
            total = ZERO
            for s in simps:
                total += abs(exact.det([verts[k] for k in s]))
            cone_volumes.append(total / dfact)
        vol = sum(cone_volumes, ZERO)
        if vol == 0:
            raise NotFullDimensional("polytope has zero volume")
        weights = tuple(c / vol for c in cone_volumes)
        return cls(d, verts, functionals, facets, simplices, tuple(cone_volumes), weights, vol)


def _functional(face_points):
    """The covector ``a`` with ``a.p = 1`` on the given affinely independent points."""
    d = len(face_points[0])
    a = exact.solve(face_points, [ONE] * d)
    if a is None:
        raise DegenerateFacet(f"points {face_points} do not span a hyperplane off the origin")
    return a


def _orient(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_2d(points) -> list:
    """Extreme points in clockwise order, starting from the lexicographically least."""
    pts = sorted(points)
    if len(pts) < 3:
        raise NotFullDimensional("fewer than three points in the plane")

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _orient(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    ccw = lower[:-1] + upper[:-1]
    if len(ccw) < 3:
        raise NotFullDimensional("points are collinear")
    return [ccw[0]] + ccw[:0:-1]


def _facet_functionals(pts, d) -> list:
    n = len(pts)
    found = {}
    if math.comb(n, d) <= BRUTE_FORCE_SUBSETS:
        for combo in itertools.combinations(range(n), d):
            a = exact.solve([pts[i] for i in combo], [ONE] * d)
            if a is None or a in found:
                continue
            if all(dot(a, p) <= ONE for p in pts):
                found[a] = True
    else:
        from scipy.spatial import ConvexHull

        arr = np.array([[float(c) for c in p] for p in pts])
        tol = 1e-9 * max(1.0, float(np.abs(arr).max()))
        for eq in ConvexHull(arr).equations:
            near = np.flatnonzero(np.abs(arr @ eq[:-1] + eq[-1]) < tol)
            basis = []
            for i in near:
                if exact.rank(basis + [pts[i]]) == len(basis) + 1:
                    basis.append(pts[i])
                    if len(basis) == d:
                        break
            a = _functional(basis) if len(basis) == d else None
            if a is None:
                raise DegenerateFacet("qhull facet does not contain d independent points")
            if a in found:
                continue
            if any(dot(a, p) > ONE for p in pts):
                raise SprawlError("qhull proposed a facet that fails the exact support check")
            found[a] = True
    if not found:
        raise NotFullDimensional("no supporting hyperplanes found")
    return list(found)


def _triangulate_face(face, dim, facet_sets, verts):
    """Pulling triangulation of a face of affine dimension ``dim``.

    Subfaces are found as intersections with the other facets; each one not
    containing the apex (the face's first vertex) is triangulated recursively
    and coned from the apex.
    """
    face = tuple(sorted(face))
    if dim == 0:
        return [face[:1]]
    apex = face[0]
    fs = frozenset(face)
    subfaces = set()
    for g in facet_sets:
        inter = fs & g
        if apex in inter or len(inter) < dim or inter == fs:
            continue
        if exact.rank([verts[k] for k in inter]) == dim:
            subfaces.add(tuple(sorted(inter)))
    out = []
    for sub in sorted(subfaces):
        for simplex in _triangulate_face(sub, dim - 1, facet_sets, verts):
            out.append((apex,) + simplex)
    return out


def hull(gens: GeneratorSet) -> Perimeter:
    """Perimeter of the convex hull of a generating set of Z^d."""
    if not gens.is_full_rank():
        raise NotFullDimensional("generators span a proper subspace")
    if not gens.generates():
        raise NotGenerating("generators span a proper sublattice of Z^d")
    return Perimeter.from_points(gens.vectors)


def as_perimeter(body) -> Perimeter:
    if isinstance(body, Perimeter):
        return body
    if isinstance(body, PolytopeV):
        return Perimeter.from_points(body.vertices)
    if isinstance(body, PolytopeH):
        return Perimeter.from_points(v_from_h(body).vertices)
    if isinstance(body, GeneratorSet):
        return hull(body)
    raise TypeError(f"cannot interpret {type(body).__name__} as a perimeter")


def h_from_v(poly: PolytopeV) -> PolytopeH:
    per = Perimeter.from_points(poly.vertices)
    return PolytopeH(per.dimension, per.functionals)


def v_from_h(poly: PolytopeH) -> PolytopeV:
    # {x : a.x <= 1} is the polar of conv(a); its vertices are that hull's facet functionals.
    dual = Perimeter.from_points(poly.functionals)
    return PolytopeV(dual.dimension, dual.functionals)


def norm(L: Perimeter, x: Sequence) -> Q:
    """Minkowski norm with unit sphere ``L``: the largest facet functional value."""
    x = exact.vec(x)
    if len(x) != L.dimension:
        raise DimensionMismatch(f"point has dimension {len(x)}, perimeter has {L.dimension}")
    return max(dot(a, x) for a in L.functionals)


def cone_weights(L: Perimeter) -> list:
    return list(L.weights)


def volume(P) -> Q:
    return as_perimeter(P).volume


def apply_linear(L: Perimeter, T) -> Perimeter:
    """Image of ``L`` under the invertible rational matrix ``T``."""
    T = tuple(exact.vec(row) for row in T)
    if len(T) != L.dimension or any(len(r) != L.dimension for r in T):
        raise DimensionMismatch("matrix shape does not match the perimeter")
    if exact.det(T) == 0:
        raise SingularMatrix("linear map is singular")
    image = [exact.matvec(T, v) for v in L.vertices]
    if L.dimension == 2:
        return Perimeter.from_points(image)
    Tinv = exact.inverse(T)
    functionals = [exact.matvec(exact.transpose(Tinv), a) for a in L.functionals]
    return Perimeter.from_incidence(L.dimension, image, functionals)


# -- standard shapes ---------------------------------------------------------

def cube(d: int) -> Perimeter:
    verts = list(itertools.product((1, -1), repeat=d))
    functionals = [tuple(s if i == j else 0 for j in range(d)) for i in range(d) for s in (1, -1)]
    return Perimeter.from_incidence(d, verts, functionals)


def orthoplex(d: int) -> Perimeter:
    verts = [tuple(s if i == j else 0 for j in range(d)) for i in range(d) for s in (1, -1)]
    functionals = list(itertools.product((1, -1), repeat=d))
    return Perimeter.from_incidence(d, verts, functionals)


def hexagon(x, y) -> Perimeter:
    """The normalized hexagon with vertices +-(x, y), +-(1, 1), +-(-1, 1)."""
    x, y = exact.to_q(x), exact.to_q(y)
    return Perimeter.from_points([(x, y), (1, 1), (-1, 1)], symmetrize=True)


def knight_octagon() -> Perimeter:
    return Perimeter.from_points([(2, 1), (1, 2), (-1, 2), (-2, 1)], symmetrize=True)


def regular_polygon(x: int, scale: int) -> Perimeter:
    """Integer approximation of the regular ``x``-gon of circumradius ``scale``.

    Vertices sit at angles ``2 pi k / x`` and are rounded to the nearest lattice
    point using 50-digit trigonometry, so rounding is exact for any scale.
    """
    if x < 4 or x % 2:
        raise InvalidInput("regular polygon approximants need an even side count >= 4")
    with mpmath.workdps(50):
        pts = []
        for k in range(x // 2):
            theta = 2 * mpmath.pi * k / x
            pts.append((int(mpmath.nint(scale * mpmath.cos(theta))),
                        int(mpmath.nint(scale * mpmath.sin(theta)))))
    return Perimeter.from_points(pts, symmetrize=True)


def approximate_circle(scale: int, angles: int | None = None) -> Perimeter:
    """Integer polygon approximating the circle of radius ``scale``.

    Lattice points nearest to ``scale * (cos t, sin t)`` over ``angles`` equally
    spaced directions are symmetrized and reduced to their convex hull.  The
    default grid is fine enough that consecutive samples are less than one
    lattice unit apart, so the hull is within O(1/scale) of the circle.
    """
    if scale < 1:
        raise InvalidInput("scale must be positive")
    if angles is None:
        angles = 8 * scale
    angles = max(4, angles + (-angles) % 4)
    with mpmath.workdps(30):
        pts = set()
        for k in range(angles // 2):
            theta = 2 * mpmath.pi * k / angles
            pts.add((int(mpmath.nint(scale * mpmath.cos(theta))),
                     int(mpmath.nint(scale * mpmath.sin(theta)))))
    return Perimeter.from_points(pts, symmetrize=True)
