"""Exact sprawl of planar perimeters by the cutline method.

For two sides sigma (v -> w) and tau (p -> q) of a polygon, the displacement
``D(s, t) = tau(t) - sigma(s)`` is affine on the unit square, so its norm is
piecewise affine.  The pieces change only where ``D`` points along a vertex
direction ``u``; that locus, ``cross(D(s, t), u) = 0``, is a straight chord of
the square (a cutline).  Splitting the square along every cutline gives convex
cells on which the norm is affine, and fanning each cell into triangles turns
the average into a finite exact sum.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import exact
from .errors import CutlineCrossing, NotHexagon, NotPlanar
from .exact import ONE, ZERO, Q, cross2, dot
from .geometry import Perimeter, apply_linear, as_perimeter, hexagon

THIRD = Q(1, 3)
HALF = Q(1, 2)


@dataclass(frozen=True)
class SideParam:
    index: int
    start: tuple
    end: tuple

    def at(self, s):
        return tuple(a + s * (b - a) for a, b in zip(self.start, self.end))


@dataclass(frozen=True)
class Cutline:
    direction: int
    endpoints: tuple  # two (s, t) points on the boundary of the unit square
    values: tuple     # norm of tau(t) - sigma(s) at each endpoint


@dataclass(frozen=True)
class CutlineCell:
    triangle: tuple   # three (s, t) points
    values: tuple     # norm at each triangle vertex

    @property
    def area(self):
        (a, b), (c, d), (e, f) = self.triangle
        return abs((c - a) * (f - b) - (d - b) * (e - a)) / 2

    def interpolate(self, s, t):
        """Value of the affine interpolant at (s, t) via barycentric coordinates."""
        (x0, y0), (x1, y1), (x2, y2) = self.triangle
        det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
        l1 = ((s - x0) * (y2 - y0) - (x2 - x0) * (t - y0)) / det
        l2 = ((x1 - x0) * (t - y0) - (s - x0) * (y1 - y0)) / det
        return (1 - l1 - l2) * self.values[0] + l1 * self.values[1] + l2 * self.values[2]


@dataclass(frozen=True)
class SprawlExact:
    value: Q
    matrix: tuple     # matrix[i][j] = average distance between sides i and j
    weights: tuple

    def __float__(self):
        return float(self.value)


def side_params(L: Perimeter) -> list:
    _require_planar(L)
    n = len(L.vertices)
    return [SideParam(i, L.vertices[i], L.vertices[(i + 1) % n]) for i in range(n)]


def _require_planar(L):
    if L.dimension != 2:
        raise NotPlanar(f"cutlines need a planar perimeter, got dimension {L.dimension}")


class _SidePair:
    """Shared setup for one ordered pair of sides."""

    def __init__(self, L: Perimeter, i: int, j: int):
        _require_planar(L)
        n = len(L.vertices)
        v, w = L.vertices[i % n], L.vertices[(i + 1) % n]
        p, q = L.vertices[j % n], L.vertices[(j + 1) % n]
        self.functionals = L.functionals
        self.directions = L.vertices[: n // 2]
        self.p0 = exact.sub(p, v)
        self.a = exact.sub(w, v)
        self.b = exact.sub(q, p)
        self._cache = {}

    def displacement(self, s, t):
        p0, a, b = self.p0, self.a, self.b
        return (p0[0] - s * a[0] + t * b[0], p0[1] - s * a[1] + t * b[1])

    def value(self, pt):
        out = self._cache.get(pt)
        if out is None:
            dx, dy = self.displacement(*pt)
            out = max(f[0] * dx + f[1] * dy for f in self.functionals)
            self._cache[pt] = out
        return out

    def lines(self):
        """Affine forms ``c0 - ca*s + cb*t`` for cutlines that cross the open square."""
        out = []
        seen = set()
        for k, u in enumerate(self.directions):
            c0 = cross2(self.p0, u)
            ca = cross2(self.a, u)
            cb = cross2(self.b, u)
            corners = (c0, c0 - ca, c0 + cb, c0 - ca + cb)
            if min(corners) < 0 < max(corners):
                # On a side paired with itself D vanishes on the diagonal and
                # every direction yields that same chord.
                lead = next(c for c in (ca, cb, c0) if c != 0)
                key = (c0 / lead, ca / lead, cb / lead)
                if key in seen:
                    continue
                seen.add(key)
                out.append((k, c0, ca, cb))
        return out


def _split(poly, c0, ca, cb):
    """Split a convex polygon along ``c0 - ca*s + cb*t = 0``; None if not crossed."""
    vals = [c0 - ca * s + cb * t for s, t in poly]
    if not (min(vals) < 0 < max(vals)):
        return None
    pos, neg = [], []
    m = len(poly)
    for k in range(m):
        p, fp = poly[k], vals[k]
        q, fq = poly[(k + 1) % m], vals[(k + 1) % m]
        if fp >= 0:
            pos.append(p)
        if fp <= 0:
            neg.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            r = fp / (fp - fq)
            x = (p[0] + r * (q[0] - p[0]), p[1] + r * (q[1] - p[1]))
            pos.append(x)
            neg.append(x)
    return pos, neg


UNIT_SQUARE = ((ZERO, ZERO), (ONE, ZERO), (ONE, ONE), (ZERO, ONE))


def cutlines(L: Perimeter, i: int, j: int) -> list:
    pair = _SidePair(L, i, j)
    out = []
    for k, c0, ca, cb in pair.lines():
        pos, neg = _split(UNIT_SQUARE, c0, ca, cb)
        ends = tuple(sorted(set(pos) & set(neg)))
        out.append(Cutline(k, ends, tuple(pair.value(e) for e in ends)))
    return out


def _cells(pair: _SidePair):
    polys = [UNIT_SQUARE]
    for k, c0, ca, cb in pair.lines():
        nxt = []
        hits = 0
        for poly in polys:
            parts = _split(poly, c0, ca, cb)
            if parts is None:
                nxt.append(poly)
            else:
                hits += 1
                nxt.extend(parts)
        if hits != 1:
            raise CutlineCrossing(f"cutline for direction {k} crosses {hits} cells")
        polys = nxt
    return polys


def _fan(poly):
    start = min(range(len(poly)), key=lambda k: poly[k])
    ring = poly[start:] + poly[:start]
    for k in range(1, len(ring) - 1):
        tri = (ring[0], ring[k], ring[k + 1])
        (a, b), (c, d), (e, f) = tri
        if (c - a) * (f - b) != (d - b) * (e - a):
            yield tri


def cells(L: Perimeter, i: int, j: int) -> list:
    """Triangles on which the distance between sides i and j is affine."""
    pair = _SidePair(L, i, j)
    return [
        CutlineCell(tri, tuple(pair.value(p) for p in tri))
        for poly in _cells(pair)
        for tri in _fan(poly)
    ]


def side_pair_average(L: Perimeter, i: int, j: int, shortcut: bool = True) -> Q:
    """Average norm distance between uniform points of sides i and j."""
    _require_planar(L)
    n = len(L.vertices)
    i, j = i % n, j % n
    if shortcut and i == j:
        v, w = L.vertices[i], L.vertices[(i + 1) % n]
        return THIRD * max(dot(a, exact.sub(w, v)) for a in L.functionals)
    pair = _SidePair(L, i, j)
    total = ZERO
    for poly in _cells(pair):
        for tri in _fan(poly):
            (a, b), (c, d), (e, f) = tri
            area = abs((c - a) * (f - b) - (d - b) * (e - a)) * HALF
            total += area * (pair.value(tri[0]) + pair.value(tri[1]) + pair.value(tri[2]))
    return total * THIRD


def sprawl_exact(L) -> SprawlExact:
    """Cone-measure weighted average of all side-pair averages.

    Uses ``E_ij = E_ji`` and central symmetry (``E_{i+h, j+h} = E_ij`` for
    ``h = n/2``) so each orbit of side pairs is integrated once.
    """
    L = as_perimeter(L)
    _require_planar(L)
    n = len(L.vertices)
    h = n // 2
    done = {}
    matrix = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            key = min((i, j), (j, i), ((i + h) % n, (j + h) % n), ((j + h) % n, (i + h) % n))
            if key not in done:
                done[key] = side_pair_average(L, *key)
            matrix[i][j] = done[key]
    w = L.weights
    num = ZERO
    for i in range(n):
        row = ZERO
        for j in range(n):
            row += w[j] * matrix[i][j]
        num += w[i] * row
    den = sum(w, ZERO) ** 2
    return SprawlExact(num / den, tuple(tuple(r) for r in matrix), tuple(w))


def hexagon_normalize(H):
    """Find ``(x, y, T)`` with ``T(H) = H_{x,y}``, ``x >= 1``, ``y >= 0``, ``x + y <= 2``.

    Each side (taken in either orientation) is tried as the one sent to
    ``(1,1) -> (-1,1)``; the neighbouring vertex then lands on ``(x, y)``.
    A parallelogram is accepted as the degenerate hexagon ``H_{1,0}``.
    """
    H = as_perimeter(H)
    _require_planar(H)
    verts = H.vertices
    n = len(verts)
    if n not in (4, 6):
        raise NotHexagon(f"expected 6 vertices (or 4 for the degenerate square), got {n}")
    target = hexagon(1, 0) if n == 4 else None
    candidates = [(k, +1) for k in range(n)] + [(k, -1) for k in range(n)]
    identity = exact.identity(2)
    found = []
    for k, step in candidates:
        a, b = verts[k], verts[(k + step) % n]
        c = verts[(k - step) % n]
        # T sends a -> (1, 1) and b -> (-1, 1).
        m = exact.inverse(exact.transpose((a, b)))
        if m is None:
            continue
        T = exact.matmul(((ONE, -ONE), (ONE, ONE)), m)
        x, y = exact.matvec(T, c)
        if n == 4:
            x, y = ONE, ZERO
        if not (x >= 1 and y >= 0 and x + y <= 2):
            continue
        image = apply_linear(H, T)
        expected = target if target is not None else hexagon(x, y)
        if image == expected:
            found.append((x, y, T))
    if not found:
        raise NotHexagon("no normalizing transformation found")
    # Deterministic choice: identity, then orientation-preserving, then the
    # lexicographically largest matrix.
    return min(found, key=lambda r: (r[2] != identity, exact.det(r[2]) < 0,
                                     [-e for row in r[2] for e in row]))
