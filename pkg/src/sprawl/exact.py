"""Exact rational scalars and the small amount of linear algebra built on them.

``Q`` is the exact number type used on every exact path.  It is gmpy2's
``mpq``: always in lowest terms with a positive denominator, and it compares
and hashes equal to :class:`fractions.Fraction`.
"""

from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

from .errors import InvalidInput

Q = mpq
ZERO = mpq(0)
ONE = mpq(1)

Vector = tuple  # tuple of Q


def to_q(value) -> mpq:
    """Coerce ints, Fractions, ``"a/b"`` strings and ``[num, den]`` pairs to ``Q``."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise InvalidInput(f"rational pair must have two entries, got {value!r}")
        num, den = value
        if not isinstance(num, int) or not isinstance(den, int) or den == 0:
            raise InvalidInput(f"bad rational pair {value!r}")
        return mpq(num, den)
    if isinstance(value, float):
        raise InvalidInput("floats are not accepted on exact paths")
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def vec(values) -> Vector:
    return tuple(to_q(v) for v in values)


def as_pair(x) -> list:
    x = to_q(x)
    return [int(x.numerator), int(x.denominator)]


def from_pair(pair) -> mpq:
    return to_q(pair)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), ZERO)


def sub(a: Sequence, b: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence, b: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def scale(c, a: Sequence) -> Vector:
    return tuple(c * x for x in a)


def neg(a: Sequence) -> Vector:
    return tuple(-x for x in a)


def cross2(a: Sequence, b: Sequence):
    return a[0] * b[1] - a[1] * b[0]


def matvec(m: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in m)


def _eliminate(rows):
    """Row-reduce a copy of ``rows``; return (reduced rows, pivot columns, sign)."""
    m = [list(map(mpq, r)) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    sign = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((k for k in range(r, nrows) if m[k][c] != 0), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
            sign = -sign
        piv = m[r][c]
        for k in range(r + 1, nrows):
            f = m[k][c]
            if f:
                f /= piv
                rk, rr = m[k], m[r]
                for j in range(c, ncols):
                    rk[j] -= f * rr[j]
        pivots.append(c)
        r += 1
    return m, pivots, sign


def rank(rows) -> int:
    if not rows:
        return 0
    return len(_eliminate(rows)[1])


def det(rows) -> mpq:
    n = len(rows)
    if n == 2:
        (a, b), (c, d) = rows
        return mpq(a) * d - mpq(b) * c
    m, pivots, sign = _eliminate(rows)
    if len(pivots) < n:
        return ZERO
    out = mpq(sign)
    for i in range(n):
        out *= m[i][i]
    return out


def solve(rows, rhs):
    """Solve ``rows @ x = rhs`` for square nonsingular ``rows``; ``None`` if singular."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    m, pivots, _ = _eliminate(aug)
    if len(pivots) < n or pivots[-1] >= n:
        return None
    x = [ZERO] * n
    for i in range(n - 1, -1, -1):
        acc = m[i][n]
        for j in range(i + 1, n):
            acc -= m[i][j] * x[j]
        x[i] = acc / m[i][i]
    return tuple(x)


def inverse(rows):
    n = len(rows)
    cols = [solve(rows, [ONE if i == j else ZERO for i in range(n)]) for j in range(n)]
    if cols[0] is None:
        return None
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def transpose(rows):
    return tuple(zip(*rows))


def matmul(a, b):
    bt = transpose(b)
    return tuple(tuple(dot(r, c) for c in bt) for r in a)


def identity(d: int):
    return tuple(tuple(ONE if i == j else ZERO for j in range(d)) for i in range(d))



def to_mpf(x):
    """``mpmath.mpf`` value of a rational (or pass-through for ``mpf``), at the current precision."""
    import mpmath

    if isinstance(x, mpmath.mpf):
        return x
    x = to_q(x)
    return mpmath.mpf(int(x.numerator)) / int(x.denominator)
