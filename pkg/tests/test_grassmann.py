import itertools
from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from fpp.grassmann import (PLUCKER, PParams, TwoParam, c7_action, c7_fixed_points, c7_weight, eigentable,
                           family_equations, index_doubling, involution_action, plucker_relations, tables,
                           torus_report, u14_table)
from fpp.multipoly import GF, apply_action

RELATIONS = plucker_relations()

EIGEN = """\
0      1      2      3      4      5      6
x_124  x_125  x_126  x_136  x_245  x_345  x_123
x_356  x_134  x_135  x_145  x_146  x_156  x_346
       x_456  x_234  x_235  x_236  x_246  x_256
"""


def coeff_rows(polys):
    return [[f.coeff({v: 1}) or 0 for v in PLUCKER] for f in polys]


def test_eigentable_layout():
    assert eigentable().strip() == EIGEN.strip()
    assert tables().startswith("C7 eigenspaces\n")
    assert "x_125+x_134" in u14_table()


@given(st.lists(st.integers(-5, 5), min_size=18, max_size=18))
def test_plucker_relations_vanish_on_decomposables(entries):
    M = sympy.Matrix(3, 6, entries)
    point = {f"x_{i}{j}{k}": int(M[:, [i - 1, j - 1, k - 1]].det()) for i, j, k in itertools.combinations(range(1, 7), 3)}
    for q in RELATIONS:
        assert q.evaluate(point) == 0


def test_c7_weights_and_eigenvectors():
    p = 29
    act = c7_action(p)
    for f in family_equations(TwoParam(2, 3), GF(p)):
        g = apply_action(f, act)
        t = next(iter(f.terms))
        ratio = g.terms[t] * pow(int(f.terms[t]), -1, p) % p
        assert g == f.scale(ratio)
    assert sorted(c7_weight(tuple(int(c) for c in v[2:])) for v in PLUCKER).count(0) == 2


@given(st.integers(-9, 9), st.integers(1, 9))
def test_doubling_preserves_two_parameter_family(a, b):
    eq = family_equations(TwoParam(Fraction(a, b), 3))
    img = [apply_action(f, index_doubling()) for f in eq]
    assert sympy.Matrix(coeff_rows(eq + img)).rank() == 7


def test_involution_is_an_involution():
    iota = involution_action()
    assert iota.order == 2 and iota.is_identity_power(2)
    assert len(c7_fixed_points()) == 20


def test_p_mode_generic_rank():
    eq = family_equations(PParams((2, 3, 5, 7, 11, 13, 17)))
    assert sympy.Matrix(coeff_rows(eq)).rank() == 7


def test_moduli_count():
    assert torus_report()["moduli"] == 4
