from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from fpp.multipoly import (GF, QQ, PolySyntaxError, SparsePoly, VarAction, apply_action, interpolate_univariate,
                           jacobian, parse_poly, print_poly, read_poly_text, write_poly_text)

V = ("x", "y", "z")
coef = st.builds(Fraction, st.integers(-19, 19), st.integers(1, 9))
mono = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(mono, coef, max_size=6).map(lambda t: SparsePoly(V, t, QQ))


def to_sympy(f):
    x, y, z = sympy.symbols(V)
    return sympy.expand(sum(sympy.Rational(c.numerator, c.denominator) * x**a * y**b * z**e
                            for (a, b, e), c in f.terms.items()))


@given(polys, polys, polys)
def test_ring_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert (f * g) * h == f * (g * h)
    assert (f - f).is_zero()


@given(polys, polys)
def test_product_matches_sympy(f, g):
    assert sympy.expand(to_sympy(f * g) - to_sympy(f) * to_sympy(g)) == 0


@given(polys)
def test_print_parse_roundtrip(f):
    assert parse_poly(print_poly(f), V, QQ) == f


@given(polys)
def test_derivative_matches_sympy(f):
    x = sympy.Symbol("x")
    assert sympy.expand(to_sympy(f.diff("x")) - sympy.diff(to_sympy(f), x)) == 0


def test_parse_errors_carry_position():
    with pytest.raises(PolySyntaxError) as exc:
        parse_poly("x + * y", V, QQ)
    assert exc.value.position >= 0


def test_file_roundtrip():
    F = GF(101)
    fs = [parse_poly("x^2 + 3*y*z", V, F), parse_poly("z - 1", V, F)]
    text = write_poly_text(fs, names=["a", "b"], header="two polys")
    back = read_poly_text(text)
    assert back.polys == fs and back.names == ["a", "b"] and back.vars == V


def test_action_order_and_sign():
    a = VarAction({"x": "y", "y": "z", "z": "-x"}, 6, "twist")
    f = parse_poly("x*y + z^2", V, QQ)
    g = f
    for _ in range(6):
        g = apply_action(g, a)
    assert g == f


def test_jacobian_shape():
    fs = [parse_poly("x*y", V, QQ), parse_poly("z^3", V, QQ)]
    J = jacobian(fs, V)
    assert len(J) == 2 and len(J[0]) == 3
    assert J[1][2] == parse_poly("3*z^2", V, QQ)


@given(st.lists(st.integers(0, 100), min_size=1, max_size=6))
def test_interpolation_recovers_coefficients(cs):
    p = 10007
    samples = [(t, sum(c * t**i for i, c in enumerate(cs)) % p) for t in range(1, len(cs) + 3)]
    f = interpolate_univariate(samples, len(cs) - 1, p)
    for t in range(20, 25):
        assert int(f.evaluate({"x": t})) % p == sum(c * t**i for i, c in enumerate(cs)) % p
