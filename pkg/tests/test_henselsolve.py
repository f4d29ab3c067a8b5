import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fpp.exactnum import QuadValue
from fpp.groebner import buchberger
from fpp.henselsolve import (PolySystem, PositiveDimensional, assemble_cube_constraints, default_k,
                             is_proportional_to_cube, minimal_polynomial, planted_system, quotient_dimension,
                             roots_mod_p, run_planted, solve_exact, solve_mod_p)
from fpp.multipoly import GF, QQ, SparsePoly, parse_poly


@given(st.lists(st.integers(0, 96), min_size=2, max_size=7), st.sampled_from([2, 3, 17, 97]))
def test_roots_match_brute_force(coeffs, p):
    if all(c % p == 0 for c in coeffs):
        return
    want = sorted(a for a in range(p) if sum(c * a**i for i, c in enumerate(coeffs)) % p == 0)
    if any(c % p for c in coeffs[1:]):
        assert roots_mod_p(coeffs, p) == want


def test_solve_mod_p_against_enumeration():
    p = 31
    V = ("x", "y")
    F = GF(p)
    eqs = [parse_poly("x^2 + y^2 - 5", V, F), parse_poly("x*y - 2", V, F)]
    got = sorted((s["x"], s["y"]) for s in solve_mod_p(PolySystem(eqs, V), p))
    want = sorted((x, y) for x in range(p) for y in range(p) if (x * x + y * y - 5) % p == 0 and (x * y - 2) % p == 0)
    assert got == want


def test_minimal_polynomial_and_dimension():
    F = GF(101)
    V = ("x", "y")
    gb = buchberger([parse_poly("x^2 - 2", V, F), parse_poly("y^3 - x", V, F)])
    assert quotient_dimension(gb) == 6
    mp = minimal_polynomial(SparsePoly.var("y", V, F), gb)
    assert mp == [(-2) % 101, 0, 0, 0, 0, 0, 1]
    assert quotient_dimension(buchberger([parse_poly("x*y", V, F)])) is None


@given(st.integers(2, 10**6))
def test_default_k_is_minimal(bound):
    k = default_k(19, bound)
    assert 2 * bound**2 < 19**k and not (k > 1 and 2 * bound**2 < 19 ** (k - 1))


@pytest.mark.parametrize("method", ["linear", "doubling"])
def test_planted_quadratic_field_systems(method):
    res = run_planted(5, seed=3, method=method)
    assert all(ok for _, ok, _ in res), res


def test_planted_rational_system():
    rng = random.Random(1)
    system, X = planted_system(rng, 2, 10**3, 19, rational=True)
    sols = solve_exact(system, 19, 10**3)
    assert X in sols


def test_wrong_bound_does_not_produce_wrong_answers():
    rng = random.Random(5)
    system, X = planted_system(rng, 2, 10**6, 19)
    for s in solve_exact(system, 19, bound=10, k=3):
        assert s == X


@settings(max_examples=200)
@given(st.lists(st.integers(0, 6), min_size=4, max_size=4), st.lists(st.integers(0, 6), min_size=2, max_size=2))
def test_cube_constraints_over_f7(a, b):
    if b == [0, 0]:
        return
    vanish = all(r % 7 == 0 for r in assemble_cube_constraints(a, b))
    assert vanish == is_proportional_to_cube(a, b, 7)


def test_cube_constraints_are_sound_over_q():
    b0, b1, c = Fraction(2, 3), Fraction(-5, 7), Fraction(11, 13)
    a = [c * b0**3, 3 * c * b0**2 * b1, 3 * c * b0 * b1**2, c * b1**3]
    assert all(r == 0 for r in assemble_cube_constraints(a, [b0, b1]))
