"""Closed-form sprawl values and their large-parameter asymptotics.

Rational values come back as exact ``Q``; the rest as ``mpmath.mpf`` at the
requested number of significant digits (at least 50).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import InvalidInput, NoAsymptoticKnown, UnsupportedParameter
from .exact import Q, to_q

MIN_DIGITS = 50

KINDS = ("regular_polygon", "circle", "hexagon", "sphere", "cube", "orthoplex")


@dataclass(frozen=True)
class ShapeSpec:
    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInput(f"unknown shape kind {self.kind!r}")
        if self.kind == "hexagon":
            x, y = self.params
            if not (x >= 1 and y >= 0 and x + y <= 2):
                raise UnsupportedParameter(f"hexagon parameters {x}, {y} outside x>=1, y>=0, x+y<=2")
        elif self.kind in ("sphere", "cube", "orthoplex"):
            (d,) = self.params
            if d < 1:
                raise UnsupportedParameter("dimension must be at least 1")
        elif self.kind == "regular_polygon":
            (x,) = self.params
            if x < 4 or x % 2:
                raise UnsupportedParameter(f"no closed form for the regular {x}-gon")

    def __str__(self):
        tag = {"regular_polygon": "pgon"}.get(self.kind, self.kind)
        if not self.params:
            return tag
        return tag + ":" + ",".join(str(p) for p in self.params)

    @classmethod
    def parse(cls, text: str) -> "ShapeSpec":
        """Parse ``pgon:X``, ``circle``, ``hexagon:X,Y``, ``sphere:D``, ``cube:D``, ``orthoplex:D``."""
        m = re.fullmatch(r"\s*([a-z_]+)\s*(?::\s*(.*))?", text)
        if not m:
            raise InvalidInput(f"cannot parse shape {text!r}")
        tag, rest = m.group(1), m.group(2)
        kind = {"pgon": "regular_polygon", "polygon": "regular_polygon"}.get(tag, tag)
        if kind == "circle":
            if rest:
                raise InvalidInput("circle takes no parameters")
            return cls("circle")
        if not rest:
            raise InvalidInput(f"shape {tag} needs parameters")
        parts = [p.strip() for p in rest.split(",")]
        try:
            if kind == "hexagon":
                if len(parts) != 2:
                    raise InvalidInput("hexagon needs two parameters")
                return cls(kind, tuple(to_q(p) for p in parts))
            if len(parts) != 1:
                raise InvalidInput(f"{tag} needs one integer parameter")
            return cls(kind, (int(parts[0]),))
        except ValueError as exc:
            if isinstance(exc, InvalidInput):
                raise
            raise InvalidInput(f"bad parameter in {text!r}") from exc


def hexagon_formula(x, y) -> Q:
    """Exact sprawl of the normalized hexagon H_{x,y}."""
    x, y = to_q(x), to_q(y)
    num = (x**2 * y**2 + x * y**3 + 4 * x**3 + 7 * x**2 + 4 * x**2 * y - y**3
           + 7 * x * y - y**2 + 4 * x + 5 * y + 1)
    den = 3 * x**3 + 3 * x**2 * y + 6 * x**2 + 6 * x * y + 3 * x + 3 * y
    return num / den


def orthoplex_formula(d: int) -> Q:
    return Q(3 * d - 2, 2 * d - 1)


def cube_formula(d: int) -> Q:
    central = Q(4**d * math.factorial(d) ** 2, math.factorial(2 * d))
    return Q(2 * d + 2, d) - Q(2 * d + 1, 2 * d * d) * central


def double_factorial(n: int) -> int:
    """n!! with the conventions 0!! = (-1)!! = 1."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def sphere_rational_part(d: int) -> Q:
    """``q`` such that E(Sphere_d) = q for odd d and q / pi for even d."""
    ratio = Q(double_factorial(2 * d - 4), double_factorial(2 * d - 3)) * Q(
        double_factorial(d - 2), double_factorial(d - 3)
    )
    return ratio * (4 if d % 2 == 0 else 2)


def sphere_formula(d: int, digits: int = MIN_DIGITS):
    if d < 2:
        raise UnsupportedParameter("the sphere formula needs d >= 2")
    q = sphere_rational_part(d)
    if d % 2:
        return q
    with mpmath.workdps(max(digits, MIN_DIGITS) + 10):
        return mpmath.mpf(q.numerator) / q.denominator / mpmath.pi


def regular_polygon_formula(x: int, digits: int = MIN_DIGITS, exact: bool = True):
    """Sprawl of the regular ``x``-gon; ``exact=False`` forces the numeric branch."""
    if x < 4 or x % 2:
        raise UnsupportedParameter(f"no closed form for the regular {x}-gon")
    # Exact where tan(pi/x) (x in 4N) or sin(pi/x) (x in 4N+2) is rational.
    if exact and x == 4:
        return Q(4, x) + Q(4, 3 * x)
    if exact and x == 6:
        return Q(4, x) / Q(1, 2) - Q(4, 6 * x) * Q(1, 2)
    with mpmath.workdps(max(digits, MIN_DIGITS) + 10):
        u = mpmath.pi / x
        if x % 4 == 0:
            inner = u / mpmath.tan(u) + u * mpmath.tan(u) / 3
        else:
            inner = u / mpmath.sin(u) - u * mpmath.sin(u) / 6
        return 4 / mpmath.pi * inner


def sprawl_formula(spec: ShapeSpec, digits: int = MIN_DIGITS):
    kind, params = spec.kind, spec.params
    if kind == "regular_polygon":
        return regular_polygon_formula(params[0], digits)
    if kind == "circle":
        return sphere_formula(2, digits)
    if kind == "hexagon":
        return hexagon_formula(*params)
    if kind == "sphere":
        return sphere_formula(params[0], digits)
    if kind == "cube":
        return cube_formula(params[0])
    if kind == "orthoplex":
        return orthoplex_formula(params[0])
    raise UnsupportedParameter(kind)


def asymptotic_gap(spec: ShapeSpec, digits: int = MIN_DIGITS):
    """Return ``(limit, correction)`` with ``E ~ limit + correction`` for large parameter.

    The correction is signed: positive when the family approaches its limit
    from above (regular polygons), negative from below (sphere, cube,
    orthoplex).
    """
    with mpmath.workdps(max(digits, MIN_DIGITS) + 10):
        pi = mpmath.pi
        if spec.kind == "regular_polygon":
            x = mpmath.mpf(spec.params[0])
            coeff = 16 * pi**3 / 45 if spec.params[0] % 4 == 0 else 17 * pi**3 / 90
            return 4 / pi, coeff / x**4
        if spec.kind == "sphere":
            d = mpmath.mpf(spec.params[0])
            return mpmath.sqrt(2), -mpmath.sqrt(2) / (8 * d)
        if spec.kind == "cube":
            d = mpmath.mpf(spec.params[0])
            return mpmath.mpf(2), -mpmath.sqrt(pi / d)
        if spec.kind == "orthoplex":
            d = spec.params[0]
            return Q(3, 2), -Q(1, 4 * d)
    raise NoAsymptoticKnown(f"no asymptotic expansion for {spec}")


def sphere_moments(n: int):
    """``(a_n, b_n)`` from their recursions, 50-digit ``mpf``.

    a_n = int_0^pi sqrt(2 - 2 cos t) sin^n t dt, b_n = int_0^pi sin^n t dt;
    E(Sphere_d) = a_{d-2} / b_{d-2}.
    """
    with mpmath.workdps(MIN_DIGITS):
        a = mpmath.mpf(4)
        for k in range(n):
            a = a * (2 * k + 2) / (2 * k + 3)
        b = mpmath.pi if n % 2 == 0 else mpmath.mpf(2)
        for k in range(n % 2, n, 2):
            b = b * (k + 1) / (k + 2)
        return +a, +b


def sphere_quadrature(n: int, steps: int = 200):
    """Gauss-Legendre values of ``(a_n, b_n)`` with ``steps`` nodes."""
    nodes, weights = np.polynomial.legendre.leggauss(steps)
    theta = (nodes + 1) * (np.pi / 2)
    w = weights * (np.pi / 2)
    sin_n = np.sin(theta) ** n
    a = float(np.sum(w * np.sqrt(2 - 2 * np.cos(theta)) * sin_n))
    b = float(np.sum(w * sin_n))
    return a, b


def sphere_quadrature_check(d: int, steps: int = 200) -> float:
    """Sprawl of the round sphere in R^d by direct quadrature of the chord average."""
    if d < 2:
        raise UnsupportedParameter("d must be at least 2")
    a, b = sphere_quadrature(d - 2, steps)
    return a / b
