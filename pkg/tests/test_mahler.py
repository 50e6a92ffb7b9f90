import random

import mpmath
import pytest

from oracles import random_symmetric_points, random_unimodular
from sprawl.closed_forms import regular_polygon_formula, sphere_formula
from sprawl.errors import InvalidInput, OriginNotInterior
from sprawl.exact import Q, to_mpf
from sprawl.geometry import Perimeter, PolytopeV, apply_linear, cube, knight_octagon, orthoplex, regular_polygon
from sprawl.mahler import cube_mahler, kuperberg_bound, mahler_report, polar, polar_perimeter


@pytest.mark.parametrize("d", range(2, 6))
def test_cube_and_orthoplex_are_polar(d):
    assert polar_perimeter(cube(d)) == orthoplex(d)
    assert polar_perimeter(orthoplex(d)) == cube(d)
    assert mahler_report(cube(d)).mahler == cube_mahler(d) == Q(4**d, [1, 1, 2, 6, 24, 120][d])


def test_knight_octagon_polar():
    P = polar_perimeter(knight_octagon())
    assert set(P.vertices) == {(Q(1, 2), 0), (-Q(1, 2), 0), (0, Q(1, 2)), (0, -Q(1, 2)),
                               (Q(1, 3), Q(1, 3)), (-Q(1, 3), -Q(1, 3)), (Q(1, 3), -Q(1, 3)),
                               (-Q(1, 3), Q(1, 3))}
    assert polar_perimeter(P) == knight_octagon()


def test_square_report():
    r = mahler_report(cube(2))
    assert (r.volume, r.polar_volume, r.mahler) == (4, 2, 8)
    with mpmath.workdps(50):
        assert abs(r.kuperberg - 2 * mpmath.pi) < mpmath.mpf(10) ** -40
    assert r.kuperberg_holds and r.santalo_holds


def test_cube3_kuperberg_value():
    r = mahler_report(cube(3))
    with mpmath.workdps(50):
        assert abs(r.kuperberg - mpmath.pi**3 / 64 * Q(4, 3) * Q(32, 3)) < mpmath.mpf(10) ** -40
    assert r.kuperberg_holds


def test_random_polygons_involution_bounds_and_affine_invariance():
    rng = random.Random(9)
    for _ in range(60):
        L = Perimeter.from_points(random_symmetric_points(rng))
        assert polar_perimeter(polar_perimeter(L)) == L
        r = mahler_report(L)
        assert r.kuperberg_holds and r.santalo_holds
        T = random_unimodular(rng)
        T[1] = [3 * c for c in T[1]]
        assert mahler_report(apply_linear(L, T)).mahler == r.mahler


def test_regular_polygon_mahler_increases_while_sprawl_alternates():
    prev = None
    for x in range(4, 41, 2):
        m = mahler_report(regular_polygon(x, 10**6)).mahler
        if prev is not None:
            assert m > prev
        prev = m
    # below k = 4 the 4k-2 correction still dominates
    for k in range(4, 51):
        assert regular_polygon_formula(4 * k, exact=False) > regular_polygon_formula(4 * k - 2, exact=False)


def test_kuperberg_bound_monotone_factor():
    with mpmath.workdps(30):
        assert abs(kuperberg_bound(1) - mpmath.pi) < mpmath.mpf(10) ** -25
    assert all(kuperberg_bound(d) <= to_mpf(cube_mahler(d)) for d in range(1, 9))


def test_polar_vertex_form_and_errors():
    assert set(polar(PolytopeV(2, ((1, 0), (0, 1), (-1, 0), (0, -1)))).vertices) == set(cube(2).vertices)
    with pytest.raises(OriginNotInterior):
        polar(PolytopeV(2, ((1, 1), (-1, -1))))
    with pytest.raises(InvalidInput):
        polar(PolytopeV(2, ((1, 0), (0, 1), (-1, -1))))


def test_sphere_sprawl_increases_with_dimension_numerically():
    # Numeric property only: E(Sphere_d) climbs from 4/pi toward sqrt(2).
    with mpmath.workdps(60):
        vals = [to_mpf(sphere_formula(d)) for d in range(2, 80)]
        assert all(a < b for a, b in zip(vals, vals[1:]))
        assert vals[-1] < mpmath.sqrt(2)
