import pytest
from hypothesis import given, settings, strategies as st

from fpp.coverlab import (C3XC3_RELATIONS, PAPER_SEEDS, S3XC3_RELATIONS, ActionPair, ActionTableInconsistent,
                          CoverRing, KeyEquationFails, RepBasis, decomposable_relation_search,
                          eigenspace_bookkeeping, key_equation_residual, paper_rep_basis, s3_times_c3_basis,
                          toy_corpus, cyclic_sigma, verify_lift_consistency)
from fpp.groebner import buchberger
from fpp.multipoly import GF, SparsePoly, apply_action, parse_poly

P = 10009
F = GF(P)
V = ("a", "b", "c")
SIGMA = cyclic_sigma()
small_polys = st.dictionaries(st.tuples(*[st.integers(0, 2)] * 3), st.integers(1, 50), min_size=1, max_size=3).map(
    lambda t: SparsePoly(V, t, F))


def norm3(g):
    s = apply_action(g, SIGMA)
    return g * s * apply_action(s, SIGMA)


@pytest.mark.parametrize("case", toy_corpus(P), ids=lambda c: c[0])
def test_toy_corpus(case):
    name, f, d, bg, expect = case
    if expect:
        assert verify_lift_consistency(f, d, SIGMA, bg).ok
    else:
        with pytest.raises(KeyEquationFails):
            verify_lift_consistency(f, d, SIGMA, bg)


@settings(max_examples=15)
@given(small_polys)
def test_cubes_always_satisfy_the_key_equation(g):
    f, d = g * g * g, norm3(g)
    assert key_equation_residual(f, d, SIGMA).is_zero()
    assert verify_lift_consistency(f, d, SIGMA).ok


@settings(max_examples=15)
@given(small_polys, st.integers(2, 50))
def test_scaled_norm_is_rejected(g, k):
    if pow(k, 3, P) == 1:
        return
    assert not key_equation_residual(g * g * g, norm3(g).scale(k), SIGMA).is_zero()


@settings(max_examples=10)
@given(st.lists(st.integers(0, P - 1), min_size=9, max_size=9))
def test_cover_ring_is_associative(cs):
    R = CoverRing(parse_poly("a^3", V, F), parse_poly("a*b*c", V, F), SIGMA)
    x, y, w = (R.element(*[F.convert(c) for c in cs[i:i + 3]]) for i in (0, 3, 6))
    assert ((x * y) * w).equals(x * (y * w))
    assert (x * y).equals(y * x)


def test_lift_and_covering_orders():
    R = CoverRing(parse_poly("a^2*b", V, F), parse_poly("a*b*c", V, F), SIGMA)
    acts = ActionPair(R)
    z = R.z()
    assert acts.power("lift", z, 3).equals(z)
    assert acts.power("covering", z, 3).equals(z)
    assert acts.lift(acts.covering(z)).equals(acts.covering(acts.lift(z)))


def test_paper_tables():
    b = paper_rep_basis()
    assert b.check_relations(C3XC3_RELATIONS) == []
    assert {k: len(v) for k, v in b.eigenspaces("c").items()} == {0: 4, 1: 3, 2: 3}
    eigenspace_bookkeeping(PAPER_SEEDS, 3, {0: 4, 1: 3, 2: 3})
    with pytest.raises(ActionTableInconsistent):
        eigenspace_bookkeeping(PAPER_SEEDS, 3, {0: 3, 1: 4, 2: 3})


def test_s3_extension_relations():
    assert s3_times_c3_basis().check_relations(S3XC3_RELATIONS) == []


def test_inconsistent_action_table():
    with pytest.raises(ActionTableInconsistent):
        RepBasis(("A", "B"), {"c": ((0, 0), (0, 0))}, 3)


def test_planted_relation_is_found():
    Fp = GF(32003)
    W = ("x", "y", "z")
    Q = lambda s: parse_poly(s, W, Fp)
    r1, r2, r1p, r2p = Q("x+2*y"), Q("y-z"), Q("3*x+z"), Q("x-y+z")
    E = [r1 * r2p, r2 * r1p, Q("x^2+y*z"), Q("z^2-3*x*y")]
    W2 = [r1 * r2, Q("x*z+y^2")]
    Wt = [r1p * r2p, Q("y*z-2*x^2")]
    bg = buchberger([Q("x^3 + y^3 + z^3 - 2*x*y*z")])
    rels = decomposable_relation_search(E, Wt, W2, bg, prime=32003)
    assert rels and all(r.residual(bg).is_zero() for r in rels)
