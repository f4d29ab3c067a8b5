import pytest
import sympy
from hypothesis import given, settings, strategies as st

from fpp.groebner import (buchberger, eliminate, hilbert_profile, is_empty, macaulay_hilbert, normal_form,
                          saturate_irrelevant, verify_basis)
from fpp.multipoly import GF, QQ, SparsePoly, parse_poly

V = ("x", "y", "z")
P = 32003


def sym_basis(texts, p=None):
    x, y, z = sympy.symbols(V)
    kw = {"modulus": p} if p else {}
    G = sympy.groebner([sympy.sympify(t.replace("^", "**")) for t in texts], x, y, z, order="grevlex", **kw)
    return sorted(sympy.Poly(g, x, y, z).monoms(order="grevlex")[0] for g in G.exprs)


CASES = [
    ["x^2 + y*z - 1", "x*y - z^2", "y^3 - x"],
    ["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"],
    ["x*y*z - 1", "x + y + z", "x*y + y*z + z*x - 3"],
]


@pytest.mark.parametrize("texts", CASES)
@pytest.mark.parametrize("method", ["classic", "f4"])
def test_leading_monomials_match_sympy_mod_p(texts, method):
    F = GF(P)
    gb = buchberger([parse_poly(t, V, F) for t in texts], method=method)
    assert verify_basis(gb)
    assert sorted(gb.leading_monomials()) == sym_basis(texts, P)


@pytest.mark.parametrize("texts", CASES)
def test_leading_monomials_match_sympy_over_q(texts):
    gb = buchberger([parse_poly(t, V, QQ) for t in texts])
    assert sorted(gb.leading_monomials()) == sym_basis(texts)


small = st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)),
                 min_size=1, max_size=4)


@settings(max_examples=25)
@given(st.lists(small, min_size=1, max_size=3), small)
def test_membership_of_combinations(gens, mult):
    F = GF(P)
    fs = [SparsePoly(V, {(a, b, c): k for a, b, c, k in g}, F) for g in gens]
    fs = [f for f in fs if not f.is_zero()]
    if not fs:
        return
    gb = buchberger(fs)
    h = SparsePoly(V, {(a, b, c): k for a, b, c, k in mult}, F)
    assert normal_form(h * fs[0], gb).is_zero()


def test_hilbert_matches_macaulay_oracle():
    F = GF(P)
    gens = [parse_poly(t, V, F) for t in ["x^2 - y*z", "x*y - z^2"]]
    prof = hilbert_profile(buchberger(gens), 8)
    for n in range(9):
        assert prof[n] == macaulay_hilbert(gens, n, P)


def test_twisted_cubic_saturation():
    F = GF(P)
    W = ("a", "b", "c", "d")
    gens = [parse_poly(t, W, F) for t in ["a*c - b^2", "b*d - c^2", "a*d - b*c"]]
    # multiply by the irrelevant ideal and recover the same ideal
    junk = [g * parse_poly(v, W, F) for g in gens for v in W]
    sat = saturate_irrelevant(junk)
    prof = hilbert_profile(sat, 6)
    assert [prof[n] for n in range(2, 7)] == [3 * n + 1 for n in range(2, 7)]


def test_elimination():
    F = GF(P)
    gb = eliminate([parse_poly("x - y^2", V, F), parse_poly("z - y^3", V, F)], keep=("x", "z"))
    x3z2 = parse_poly("x^3 - z^2", V, F)
    assert any(g == x3z2 or g == -x3z2 for g in gb)


def test_empty_affine():
    F = GF(P)
    assert is_empty(buchberger([parse_poly("x*y - 1", V, F), parse_poly("x", V, F)]))
    assert not is_empty(buchberger([parse_poly("x*y - 1", V, F)]))
