from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fpp.exactnum import (BadDenominator, BiquadValue, MixedUniverse, NotFound, QuadValue, crt_combine, hensel_sqrt, is_prime,
                          next_prime, rational_reconstruct, reduce_mod, sqrt_mod, suitable_primes)

fracs = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 1000)
quads = st.builds(QuadValue, fracs, fracs)
biquads = st.builds(BiquadValue, fracs, fracs, fracs, fracs)


@given(quads, quads, quads)
def test_quad_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@given(quads)
def test_quad_inverse(a):
    if a == QuadValue(0):
        with pytest.raises(ZeroDivisionError):
            QuadValue(1) / a
    else:
        assert a * (QuadValue(1) / a) == QuadValue(1)


@given(biquads, biquads)
def test_biquad_field(a, b):
    assert (a + b) - b == a
    if b != BiquadValue(0):
        assert (a * b) / b == a


def test_s15_squares_to_minus_15():
    s = QuadValue(0, 1)
    assert s * s == QuadValue(-15)
    t = BiquadValue(0, 0, 1, 0)
    assert t * t == BiquadValue(-7)


def test_mixing_universes_is_an_error():
    with pytest.raises(MixedUniverse):
        reduce_mod(object(), 7)


@given(quads, quads, st.sampled_from([p for p, _ in suitable_primes([-15], 4, 17)]))
def test_reduction_is_a_ring_map(a, b, pr):
    r = sqrt_mod(-15 % pr, pr)
    try:
        ra, rb = reduce_mod(a, pr, r), reduce_mod(b, pr, r)
    except BadDenominator:
        return
    assert reduce_mod(a * b, pr, r) == ra * rb % pr
    assert reduce_mod(a + b, pr, r) == (ra + rb) % pr


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_rational_reconstruction_roundtrip(n, d):
    x = Fraction(n, d)
    m = 1
    ps = [1_000_003, 1_000_033, 1_000_037]
    for p in ps:
        m *= p
    r = x.numerator * pow(x.denominator, -1, m) % m
    assert rational_reconstruct(r, m) == x


def test_rational_reconstruction_refuses_large_height():
    with pytest.raises(NotFound):
        rational_reconstruct(123456, 1_000_003, bound=10)


@given(st.lists(st.integers(0, 10**9), min_size=3, max_size=3))
def test_crt(values):
    ms = [1_000_003, 1_000_033, 1_000_037]
    v, m = crt_combine(zip(values, ms))
    assert all(v % q == r % q for r, q in zip(values, ms))
    assert m == ms[0] * ms[1] * ms[2]


@given(st.integers(2, 10**5))
def test_primality_against_trial_division(n):
    assert is_prime(n) == all(n % d for d in range(2, int(n**0.5) + 1))


def test_next_prime():
    assert next_prime(32000) == 32003


@given(st.integers(1, 10**6), st.integers(1, 6))
def test_hensel_sqrt(a, k):
    p = 19
    a = a * a % p**k or 4
    if a % p == 0:
        return
    r = hensel_sqrt(a, p, k)
    assert r * r % p**k == a % p**k


def test_sqrt_mod_nonresidue():
    assert sqrt_mod(2, 5) is None
    assert sqrt_mod(-15 % 17, 17) ** 2 % 17 == (-15) % 17
