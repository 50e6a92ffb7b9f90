"""Polar bodies and Mahler volume, with the Kuperberg and Santalo bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from .closed_forms import MIN_DIGITS, sphere_formula
from .errors import InvalidInput, NotFullDimensional, OriginNotInterior
from .exact import Q, to_mpf
from .geometry import Perimeter, PolytopeV, as_perimeter


def _perimeter(P) -> Perimeter:
    try:
        return as_perimeter(P)
    except NotFullDimensional as exc:
        raise OriginNotInterior("origin is not an interior point (body is flat)") from exc


def polar_perimeter(P) -> Perimeter:
    """Polar body as a perimeter.

    Built from incidences alone: the facet functionals of ``P`` become the
    vertices of the polar and the vertices of ``P`` its facet functionals.
    """
    L = _perimeter(P)
    return Perimeter.from_incidence(L.dimension, L.functionals, L.vertices)


def polar(P) -> PolytopeV:
    return polar_perimeter(P).vrep


def kuperberg_bound(d: int, digits: int = MIN_DIGITS):
    """``(pi/4)^d * E(Sphere_d) * M(Cube_d)`` with ``M(Cube_d) = 4^d / d!``."""
    with mpmath.workdps(digits + 10):
        if d == 1:
            e_sphere = mpmath.mpf(1)  # {-1, 1}: half the pairs coincide, half are 2 apart
        else:
            e_sphere = to_mpf(sphere_formula(d, digits))
        return (mpmath.pi / 4) ** d * e_sphere * mpmath.mpf(4) ** d / math.factorial(d)


def santalo_bound(d: int, digits: int = MIN_DIGITS):
    """``vol(B_d)^2`` for d <= 3, else ``None``."""
    if d > 3:
        return None
    with mpmath.workdps(digits + 10):
        ball = {1: mpmath.mpf(2), 2: mpmath.pi, 3: 4 * mpmath.pi / 3}[d]
        return ball**2


def cube_mahler(d: int) -> Q:
    return Q(4**d, math.factorial(d))


@dataclass(frozen=True)
class MahlerReport:
    dimension: int
    volume: Q
    polar_volume: Q
    mahler: Q
    kuperberg: object
    santalo: object

    @property
    def kuperberg_holds(self) -> bool:
        with mpmath.workdps(MIN_DIGITS + 10):
            return self.kuperberg <= to_mpf(self.mahler)

    @property
    def santalo_holds(self) -> bool | None:
        if self.santalo is None:
            return None
        with mpmath.workdps(MIN_DIGITS + 10):
            return to_mpf(self.mahler) <= self.santalo


def mahler_report(P, digits: int = MIN_DIGITS) -> MahlerReport:
    L = _perimeter(P)
    if L.dimension < 1:
        raise InvalidInput("empty dimension")
    dual = polar_perimeter(L)
    m = L.volume * dual.volume
    return MahlerReport(L.dimension, L.volume, dual.volume, m,
                        kuperberg_bound(L.dimension, digits), santalo_bound(L.dimension, digits))
