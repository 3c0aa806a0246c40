from fractions import Fraction

import pytest

from specta._expr import (
    ExprError,
    parse_formula,
    parse_polynomial,
    parse_polynomial_list,
)
from specta.arith import Polynomial
from specta.cad2d import And, Atom, Not, Or


def test_basic_polynomial():
    p = parse_polynomial("x^2 + y^2 - 1")
    assert p.variables == ("x", "y")
    assert p.eval_at({"x": 3, "y": 4}) == 24


def test_implicit_multiplication():
    assert parse_polynomial("2t^2 + 6t^3") == parse_polynomial("2*t^2 + 6*t^3")
    assert parse_polynomial("2x(x+1)") == parse_polynomial("2*x^2 + 2*x")
    assert parse_polynomial("x y") == parse_polynomial("x*y")


def test_fraction_coefficients():
    p = parse_polynomial("3/4 x - 1/2")
    assert p.eval_at({"x": 2}) == 1
    assert parse_polynomial("6/2x") == parse_polynomial("3x")


def test_unary_minus_and_powers():
    assert parse_polynomial("-x^2") == -parse_polynomial("x^2")
    assert parse_polynomial("2^3") == Polynomial.const(8, ())
    assert parse_polynomial("-(x - 1)") == parse_polynomial("1 - x")


def test_variables_parameter_fixes_tuple():
    p = parse_polynomial("y - 1", variables=("x", "y"))
    assert p.variables == ("x", "y")
    with pytest.raises(ExprError):
        parse_polynomial("z + 1", variables=("x", "y"))


def test_polynomial_list():
    ps = parse_polynomial_list("t, 2t^2+6t^3", variables=("t",))
    assert len(ps) == 2
    assert ps[1].eval_at({"t": 1}) == 8


def test_formula_structure():
    f = parse_formula("x^2+y^2<1 OR (x=1 AND y=0)")
    assert isinstance(f, Or) and len(f.parts) == 2
    assert isinstance(f.parts[0], Atom) and f.parts[0].rel == "<"
    inner = f.parts[1]
    assert isinstance(inner, And) and all(a.rel == "=" for a in inner.parts)


def test_parenthesized_atom_versus_grouping():
    f = parse_formula("(x+y)^2 - 1 > 0")
    assert isinstance(f, Atom)
    g = parse_formula("(x > 0 OR y > 0) AND x < 1")
    assert isinstance(g, And) and isinstance(g.parts[0], Or)


def test_not_and_keyword_case():
    f = parse_formula("not (x > 0) and y <= 1")
    assert isinstance(f, And)
    assert isinstance(f.parts[0], Not)


def test_double_equals_alias():
    assert parse_formula("x == 1") == parse_formula("x = 1")


def test_error_positions():
    with pytest.raises(ExprError) as e:
        parse_formula("x >")
    assert e.value.line == 1 and e.value.column == 4
    with pytest.raises(ExprError) as e:
        parse_formula("x > 0 AND\ny <")
    assert e.value.line == 2


def test_rejects_zero_atom():
    with pytest.raises(ExprError, match="nonzero"):
        parse_formula("x = x")


def test_rejects_division_by_polynomial():
    with pytest.raises(ExprError, match="constant"):
        parse_polynomial("1 / y")


def test_rejects_unknown_character_and_trailing_input():
    with pytest.raises(ExprError, match="unexpected character"):
        parse_formula("x & y")
    with pytest.raises(ExprError, match="trailing"):
        parse_polynomial("x + 1 )")
