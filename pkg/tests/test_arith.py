"""Tests for the exact arithmetic layer.

Reference values were computed two independent ways before being frozen
here: through the Sylvester-determinant route of this package and through
sympy (resultant / discriminant / real_roots).  The randomized properties
re-run the sympy comparison on every test run.
"""

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from specta.arith import (
    AlgebraicNumber,
    ArithError,
    Polynomial,
    ZeroPolynomialError,
    coprime_squarefree_basis,
    discriminant,
    isolate_real_roots,
    poly_gcd,
    real_compare,
    resultant,
    sign_at,
    simplest_between,
    squarefree_part,
    sylvester_matrix,
    sylvester_resultant,
)

X = Polynomial.var("x")
XY = Polynomial.var("x", ("x", "y"))
YY = Polynomial.var("y", ("x", "y"))
SX, SY = sp.symbols("x y")


def to_sympy(p):
    out = 0
    for e, c in p.terms.items():
        term = sp.Rational(c.numerator, c.denominator)
        for name, k in zip(p.variables, e):
            term *= {"x": SX, "y": SY}[name] ** k
        out += term
    return sp.expand(out)


# ---------------------------------------------------------------------------
# root isolation


def test_isolate_cubic_integer_roots():
    p = (X - 1) * (X - 2) * (X - 3)
    roots = isolate_real_roots(p)
    assert [r.is_rational for r in roots] == [True, True, True]
    assert [r.value for r in roots] == [1, 2, 3]


def test_isolate_sqrt2_is_certified_irrational():
    roots = isolate_real_roots(X * X - 2)
    assert len(roots) == 2
    neg, pos = roots
    assert not pos.is_rational and not neg.is_rational
    assert pos.lo < Fraction(3, 2) and pos.lo > 1
    assert real_compare(pos, Fraction(141, 100)) == 1
    assert real_compare(pos, Fraction(142, 100)) == -1


def test_sign_at_sqrt2():
    sqrt2 = isolate_real_roots(X * X - 2)[1]
    assert sign_at(X ** 3 - 3, sqrt2) == -1
    assert sign_at(X ** 3 - 2, sqrt2) == 1
    assert sign_at(X ** 2 - 2, sqrt2) == 0


def test_rational_roots_with_awkward_denominators():
    p = (2 * X - 1) * (3 * X - 1)
    roots = isolate_real_roots(p)
    assert [r.value for r in roots] == [Fraction(1, 3), Fraction(1, 2)]

    # cube root of 1/7 must not be mistaken for a rational
    p = 7 * X ** 3 - 1
    (r,) = isolate_real_roots(p)
    assert not r.is_rational

    p = Polynomial.from_univariate("x", [Fraction(-1, 3), Fraction(1)])
    (r,) = isolate_real_roots(p)
    assert r.is_rational and r.value == Fraction(1, 3)

    # large denominator mixed with an irrational pair
    p = (1000003 * X - 1) * (X * X - 2)
    roots = isolate_real_roots(p)
    rationals = [r for r in roots if r.is_rational]
    assert len(rationals) == 1 and rationals[0].value == Fraction(1, 1000003)
    assert sum(1 for r in roots if not r.is_rational) == 2


def test_multiplicities_collapse_to_single_roots():
    p = (X - 1) ** 3 * (X + 2) ** 2
    roots = isolate_real_roots(p)
    assert [r.value for r in roots] == [-2, 1]


def test_zero_polynomial_rejected():
    zero = Polynomial.const(0, ("x",))
    with pytest.raises(ZeroPolynomialError):
        isolate_real_roots(zero)
    with pytest.raises(ZeroPolynomialError):
        sign_at(zero, Fraction(1))
    with pytest.raises(ZeroPolynomialError):
        resultant(zero, X, "x")
    with pytest.raises(ZeroPolynomialError):
        discriminant(zero, "x")


def test_no_real_roots():
    assert isolate_real_roots(X * X + 1) == []


def test_equality_across_defining_polynomials():
    # sqrt(2) described by x^2-2 and by (x^2-2)(x^2-3) must compare equal
    small = isolate_real_roots(X * X - 2)[1]
    big = isolate_real_roots((X * X - 2) * (X * X - 3))
    assert len(big) == 4
    assert real_compare(big[2], small) == 0
    assert real_compare(big[3], small) == 1
    assert real_compare(big[1], small) == -1  # big[1] is -sqrt2
    assert real_compare(big[1], Fraction(0)) == -1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=6),
                min_size=1, max_size=5, unique=True))
def test_planted_rational_roots_recovered(rationals):
    p = Polynomial.const(1, ("x",))
    for r in rationals:
        p = p * (X - Polynomial.const(r, ("x",)))
    p = p * (X * X + 1)  # a factor with no real roots
    roots = isolate_real_roots(p)
    assert len(roots) == len(rationals)
    assert all(r.is_rational for r in roots)
    assert sorted(r.value for r in roots) == sorted(Fraction(r) for r in rationals)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(min_value=-5, max_value=5), min_size=3, max_size=7))
def test_isolation_matches_sympy(coeffs):
    p = Polynomial.from_univariate("x", [Fraction(c) for c in coeffs])
    if p.is_zero() or p.is_constant():
        return
    roots = isolate_real_roots(p)
    sp_poly = sp.Poly(sum(sp.Integer(c) * SX ** i for i, c in enumerate(coeffs)), SX)
    expected = sorted(set(sp.real_roots(sp_poly)), key=lambda r: r.evalf(30))
    assert len(roots) == len(expected)
    for mine, ref in zip(roots, expected):
        if mine.is_rational:
            assert ref.is_rational
            assert sp.Rational(mine.value.numerator, mine.value.denominator) == ref
        else:
            assert not ref.is_rational
            rv = ref.evalf(40)
            assert sp.Rational(mine.lo.numerator, mine.lo.denominator) < rv
            assert rv < sp.Rational(mine.hi.numerator, mine.hi.denominator)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 30))
def test_sign_multiplicative_at_algebraic_point(seed):
    import random

    rng = random.Random(seed)
    sqrt2 = isolate_real_roots(X * X - 2)[1]
    p = Polynomial.from_univariate("x", [Fraction(rng.randint(-4, 4)) for _ in range(4)])
    q = Polynomial.from_univariate("x", [Fraction(rng.randint(-4, 4)) for _ in range(4)])
    if p.is_zero() or q.is_zero():
        return
    assert sign_at(p * q, sqrt2) == sign_at(p, sqrt2) * sign_at(q, sqrt2)


# ---------------------------------------------------------------------------
# resultants


def test_resultant_linear_pair_sign_convention():
    # rows of the first argument on top: res_y(y - x, y + x) = det [[1,-x],[1,x]]
    assert resultant(YY - XY, YY + XY, "y") == 2 * XY


def test_resultant_circle_and_axis():
    circ = XY ** 2 + YY ** 2 - 1
    assert resultant(circ, YY, "y") == XY ** 2 - 1
    assert resultant(circ, 2 * YY, "y") == 4 * XY ** 2 - 4


def test_discriminant_of_circle():
    circ = XY ** 2 + YY ** 2 - 1
    d = discriminant(circ, "y")
    assert d == -4 * XY ** 2 + 4
    assert squarefree_part(d) == XY ** 2 - 1 or squarefree_part(d) == -(XY ** 2 - 1)


def test_resultant_requires_the_variable():
    with pytest.raises(ArithError):
        resultant(XY + 1, YY, "y")


def test_resultant_zero_iff_common_factor():
    common = YY - XY
    p = common * (YY + 1)
    q = common * (XY * YY + 2)
    assert resultant(p, q, "y").is_zero()
    assert not resultant(YY - XY, YY + XY + 1, "y").is_zero()


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 30))
def test_resultant_routes_agree_with_sympy(seed):
    import random

    rng = random.Random(seed)

    def rand_poly():
        terms = {}
        for _ in range(rng.randint(2, 5)):
            e = (rng.randint(0, 2), rng.randint(1, 3))
            terms[e] = terms.get(e, 0) + Fraction(rng.randint(-5, 5))
        terms[(rng.randint(0, 2), 0)] = Fraction(rng.randint(-5, 5))
        return Polynomial.make(("x", "y"), terms)

    p, q = rand_poly(), rand_poly()
    if p.is_zero() or q.is_zero():
        return
    if p.degree_in("y") < 1 or q.degree_in("y") < 1:
        return
    mine = resultant(p, q, "y")
    via_matrix = sylvester_resultant(p, q, "y")
    # sympy's resultant drops the sign when both arguments share content
    # (e.g. a common factor of x), so the third-party reference is its
    # determinant of the Sylvester matrix, which is the documented contract
    rows = sylvester_matrix(p, q, "y")
    ref = sp.expand(sp.Matrix([[to_sympy(c) for c in row] for row in rows]).det())
    assert to_sympy(mine) == ref
    assert to_sympy(via_matrix) == ref
    sp_res = sp.expand(sp.resultant(to_sympy(p), to_sympy(q), SY))
    assert to_sympy(mine) in (sp_res, sp.expand(-sp_res))


# ---------------------------------------------------------------------------
# gcd / square-free machinery


def test_bivariate_squarefree_and_basis():
    circ = XY ** 2 + YY ** 2 - 1
    f = circ ** 2 * (YY - XY)
    sf = squarefree_part(f)
    expect = circ * (XY - YY)
    assert sf == expect or sf == -expect

    basis = coprime_squarefree_basis([circ * (YY - XY), (YY - XY) * (YY + XY)])
    assert len(basis) == 3
    keys = {b.to_text() for b in basis}
    assert keys == {"x^2 + y^2 - 1", "x - y", "x + y"}


def test_gcd_of_planted_common_factor():
    a = (XY + YY) * (XY - 2)
    b = (XY + YY) * (YY + 3)
    g = poly_gcd(a, b)
    assert g == XY + YY


def test_simplest_between_picks_minimal_denominator():
    assert simplest_between(Fraction(1, 5), Fraction(2, 5)) == Fraction(1, 3)
    assert simplest_between(Fraction(41, 20), Fraction(211, 100)) == Fraction(21, 10)
    assert simplest_between(Fraction(-2, 5), Fraction(-1, 5)) == Fraction(-1, 3)
    assert simplest_between(Fraction(-1, 3), Fraction(1, 4)) == 0
    assert simplest_between(Fraction(3), Fraction(3)) == 3
