from fractions import Fraction
from math import lcm

import pytest
import sympy
from hypothesis import given, strategies as st

from fpp.familylab import (BIVARIATE_ERRATA, DEGREE8, PV, W_GR, check_free, discriminant_symmetry_check,
                           numerical_invariants, published_bivariate, squarefree_root_count)
from fpp.grassmann import PParams, TwoParam
from fpp.multipoly import QQ, SparsePoly

p0, p3 = sympy.symbols("p0 p3")
s7, s15 = sympy.sqrt(-7), sympy.sqrt(-15)


def to_sympy(f):
    return sum(sympy.Rational(c.numerator, c.denominator) * p0**a * p3**b for (a, b), c in f.terms.items())


def wgr_values():
    # s105 is s15*s7
    a, b, c, d = W_GR.p0.coeffs()
    x = a + b * s15 + c * s7 + d * s15 * s7
    a, b, c, d = W_GR.p3.coeffs()
    y = a + b * s15 + c * s7 + d * s15 * s7
    return sympy.nsimplify(x), sympy.nsimplify(y)


def test_bivariate_specializes_to_degree8():
    for corrected in (True, False):
        g = sympy.Poly(to_sympy(published_bivariate(corrected)).subs(p3, 1), p0)
        h = sympy.Poly(sum(c * p0**i for i, c in enumerate(DEGREE8)), p0)
        q, r = sympy.div(g, h)
        assert r.is_zero and q.degree() == 0


def test_corrected_bivariate_is_singular_at_wgr():
    f = to_sympy(published_bivariate())
    x, y = wgr_values()
    for g in (f, sympy.diff(f, p0), sympy.diff(f, p3)):
        assert sympy.simplify(sympy.expand(g.subs({p0: x, p3: y}))) == 0


def test_printed_bivariate_misses_wgr():
    f = to_sympy(published_bivariate(corrected=False))
    x, y = wgr_values()
    assert sympy.simplify(sympy.expand(f.subs({p0: x, p3: y}))) != 0


def test_symmetry_check_on_bivariate():
    assert discriminant_symmetry_check(published_bivariate()).ok
    assert not discriminant_symmetry_check(published_bivariate(corrected=False)).ok
    assert len(BIVARIATE_ERRATA) == 6


@given(st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)), st.integers(-9, 9).filter(bool),
                       min_size=1, max_size=5))
def test_symmetrized_polynomials_pass(terms):
    # f + image(f) is symmetric when built on a common p0-degree
    n = 8
    sym = {}
    for (a, b), c in terms.items():
        for key in ((a, b + 12), (n - a, b + 3 * a)):
            sym[key] = sym.get(key, 0) + c
    sym = {k: v for k, v in sym.items() if v}
    if not sym:
        return
    f = SparsePoly(PV, sym, QQ)
    if f.degree_in("p0") != n or min(a for a, _ in sym) != 0:
        return
    assert discriminant_symmetry_check(f).ok


def test_asymmetric_polynomial_fails():
    f = SparsePoly(PV, {(1, 0): 1, (0, 1): -1}, QQ)
    assert not discriminant_symmetry_check(f).ok


def test_degree8_roots():
    assert squarefree_root_count(list(DEGREE8)) == 8
    assert list(DEGREE8) == list(reversed(DEGREE8))


def test_numerology():
    w = numerical_invariants("W")
    s = numerical_invariants("S")
    assert (w["K2"], w["chi"], w["e"]) == (42, 14, 126)
    assert (s["K2"], s["e"], s["h11"], s["moduli"]) == (3, 9, 7, 4)


def test_free_generic_member():
    assert check_free(TwoParam(2, 3), primes=(32003,)).ok


def test_free_is_inconclusive_on_degenerate_parameters():
    assert check_free(PParams((1,) * 7), primes=(32003,)).status == "inconclusive"


@given(st.lists(st.integers(-30000, 30000), min_size=2, max_size=9).filter(lambda c: c[-1] != 0))
def test_vector_reconstruction_roundtrip(coeffs):
    from fpp.familylab import _monic, _reconstruct

    ps = (32089, 32117)
    if any(coeffs[-1] % p == 0 for p in ps):
        return
    per = [_monic([c % p for c in coeffs], p) for p in ps]
    want = [Fraction(c, coeffs[-1]) for c in coeffs]
    m = 32089 * 32117
    D = lcm(*(x.denominator for x in want))
    # guaranteed when every entry has height <= sqrt(m/2) and the common-denominator margin holds
    easy = max(max(abs(x.numerator), x.denominator) for x in want) <= 22700 and \
        32 * max(abs(x * D) for x in want) * D < m
    try:
        got = _reconstruct(per, ps)
    except Exception:
        assert not easy
        return
    assert got == want or not easy


@pytest.mark.slow
def test_singular_parameters_match_degree8_roots():
    from fpp.familylab import is_singular_param
    from fpp.henselsolve import roots_mod_p

    p = next(q for q in (32003, 32009, 32027, 32029, 32051, 32057, 32059, 32063, 32069, 32077)
             if roots_mod_p(list(DEGREE8), q))
    root = roots_mod_p(list(DEGREE8), p)[0]
    assert is_singular_param(root, 1, p, charts=[(1, 2, 4)])
    assert not is_singular_param(5, 1, p, charts=[(1, 2, 4)])
