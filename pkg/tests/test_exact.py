from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from sprawl import exact
from sprawl.errors import InvalidInput
from sprawl.exact import Q

small = st.integers(-9, 9)
matrices = st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n),
                                                        min_size=n, max_size=n))


def test_to_q_accepts_exact_forms():
    assert exact.to_q(3) == 3
    assert exact.to_q("6/4") == Q(3, 2)
    assert exact.to_q(Fraction(-2, 6)) == Q(-1, 3)
    assert exact.to_q([4, -6]) == Q(-2, 3)


def test_rationals_are_normalized():
    x = exact.to_q([6, -4])
    assert (x.numerator, x.denominator) == (-3, 2)
    assert exact.as_pair(x) == [-3, 2]
    assert Q(1, 3) == Fraction(1, 3) and hash(Q(1, 3)) == hash(Fraction(1, 3))


@pytest.mark.parametrize("bad", [0.5, [1, 0], [1, 2, 3], ["a", 1]])
def test_to_q_rejects(bad):
    with pytest.raises(InvalidInput):
        exact.to_q(bad)


@given(matrices)
def test_det_matches_sympy(m):
    assert exact.det(m) == sympy.Matrix(m).det()


@given(matrices, matrices)
def test_det_multiplicative(a, b):
    if len(a) != len(b):
        return
    assert exact.det(exact.matmul(a, b)) == exact.det(a) * exact.det(b)


@given(matrices, st.lists(small, min_size=4, max_size=4))
def test_solve_and_inverse(m, rhs):
    n = len(m)
    rhs = rhs[:n]
    x = exact.solve(m, rhs)
    if exact.det(m) == 0:
        assert x is None and exact.inverse(m) is None
        return
    assert exact.matvec(m, x) == tuple(Q(r) for r in rhs)
    assert exact.matmul(m, exact.inverse(m)) == exact.identity(n)


@given(matrices)
def test_rank_matches_sympy(m):
    assert exact.rank(m) == sympy.Matrix(m).rank()
