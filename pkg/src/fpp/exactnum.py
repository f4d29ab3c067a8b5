"""Exact coefficient arithmetic.

Universes: rationals (``fractions.Fraction``), the quadratic field Q(s15) with
s15^2 = -15, the biquadratic field Q(s15, s7) with s7^2 = -7 and
s105 = s15*s7, prime fields F_p and residue rings Z/p^k.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Iterable, Sequence


class ExactNumError(ArithmeticError):
    pass


class MixedUniverse(ExactNumError, TypeError):
    """Operands live in different coefficient universes."""


class BadDenominator(ExactNumError):
    """The prime divides a denominator, so the value has no image mod p."""


class NotFound(ExactNumError):
    """Rational reconstruction found no fraction within the bound."""


DivisionByZero = ZeroDivisionError

Rational = Fraction


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise MixedUniverse(f"cannot use {type(x).__name__} as a rational")


# ---------------------------------------------------------------------------
# number fields


class BiquadValue:
    """a + b*s15 + c*s7 + d*s105 with rational a, b, c, d.

    s15 = i*sqrt(15), s7 = i*sqrt(7), s105 = s15*s7 = -sqrt(105).
    """

    __slots__ = ("a", "b", "c", "d")
    GENS = ("1", "s15", "s7", "s105")

    def __init__(self, a=0, b=0, c=0, d=0):
        object.__setattr__(self, "a", _as_fraction(a))
        object.__setattr__(self, "b", _as_fraction(b))
        object.__setattr__(self, "c", _as_fraction(c))
        object.__setattr__(self, "d", _as_fraction(d))

    def __setattr__(self, name, value):
        raise AttributeError("BiquadValue is immutable")

    def coeffs(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def _coerce(self, other):
        if isinstance(other, BiquadValue):
            return other
        if isinstance(other, (int, Fraction)):
            return BiquadValue(other)
        if isinstance(other, QuadValue):
            raise MixedUniverse("QuadValue and BiquadValue do not mix; embed explicitly")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return BiquadValue(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return BiquadValue(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a1, b1, c1, d1 = self.coeffs()
        a2, b2, c2, d2 = o.coeffs()
        # s15^2=-15, s7^2=-7, s105^2=105, s15*s7=s105, s15*s105=-15 s7, s7*s105=-7 s15
        a = a1 * a2 - 15 * b1 * b2 - 7 * c1 * c2 + 105 * d1 * d2
        b = a1 * b2 + b1 * a2 - 7 * (c1 * d2 + d1 * c2)
        c = a1 * c2 + c1 * a2 - 15 * (b1 * d2 + d1 * b2)
        d = a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2
        return BiquadValue(a, b, c, d)

    __rmul__ = __mul__

    def conjugate_s15(self) -> "BiquadValue":
        return BiquadValue(self.a, -self.b, self.c, -self.d)

    def conjugate_s7(self) -> "BiquadValue":
        return BiquadValue(self.a, self.b, -self.c, -self.d)

    def inverse(self) -> "BiquadValue":
        if not self:
            raise DivisionByZero("BiquadValue division by zero")
        # multiply by the three nontrivial conjugates; the product is rational
        c1 = self.conjugate_s15()
        c2 = self.conjugate_s7()
        c3 = c1.conjugate_s7()
        num = c1 * c2 * c3
        norm = self * num
        return num * BiquadValue(1 / norm.a)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = BiquadValue(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.a or self.b or self.c or self.d)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.a == other and not (self.b or self.c or self.d)
        if isinstance(other, BiquadValue):
            return self.coeffs() == other.coeffs()
        return NotImplemented

    def __hash__(self):
        if not (self.b or self.c or self.d):
            return hash(self.a)
        return hash(("biquad",) + self.coeffs())

    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def denominator_lcm(self) -> int:
        return math.lcm(*(x.denominator for x in self.coeffs()))

    def __repr__(self):
        return f"BiquadValue({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self):
        return format_scalar(self)


class QuadValue:
    """a + b*s15 with rational a, b and s15^2 = -15."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", _as_fraction(a))
        object.__setattr__(self, "b", _as_fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("QuadValue is immutable")

    def _coerce(self, other):
        if isinstance(other, QuadValue):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadValue(other)
        if isinstance(other, BiquadValue):
            raise MixedUniverse("QuadValue and BiquadValue do not mix; embed explicitly")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadValue(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadValue(-self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadValue(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadValue(o.a - self.a, o.b - self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadValue(self.a * o.a - 15 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a + 15 * self.b * self.b

    def conjugate(self) -> "QuadValue":
        return QuadValue(self.a, -self.b)

    def inverse(self) -> "QuadValue":
        n = self.norm()
        if not n:
            raise DivisionByZero("QuadValue division by zero")
        return QuadValue(self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = QuadValue(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.a or self.b)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.a == other and not self.b
        if isinstance(other, QuadValue):
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash(("quad", self.a, self.b))

    def is_rational(self) -> bool:
        return not self.b

    def coeffs(self) -> tuple[Fraction, Fraction]:
        return (self.a, self.b)

    def denominator_lcm(self) -> int:
        return math.lcm(self.a.denominator, self.b.denominator)

    def to_biquad(self) -> BiquadValue:
        return BiquadValue(self.a, self.b)

    def __repr__(self):
        return f"QuadValue({self.a}, {self.b})"

    def __str__(self):
        return format_scalar(self)


S15 = QuadValue(0, 1)


# ---------------------------------------------------------------------------
# modular values


class PrimePowerValue:
    """A residue modulo p**k (k = 1 gives the prime field)."""

    __slots__ = ("residue", "p", "k", "modulus")

    def __init__(self, residue: int, p: int, k: int = 1):
        m = p**k
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "modulus", m)
        object.__setattr__(self, "residue", residue % m)

    def __setattr__(self, name, value):
        raise AttributeError("modular values are immutable")

    def _make(self, r):
        return type(self)(r, self.p, self.k) if type(self) is PrimePowerValue else type(self)(r, self.p)

    def _coerce(self, other):
        if isinstance(other, PrimePowerValue):
            if other.modulus != self.modulus or other.p != self.p:
                raise MixedUniverse(f"residues mod {self.modulus} and mod {other.modulus}")
            return other.residue
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise BadDenominator(f"{self.p} divides {other.denominator}")
            return other.numerator * pow(other.denominator, -1, self.modulus)
        if isinstance(other, (QuadValue, BiquadValue)):
            raise MixedUniverse("reduce number-field values with reduce_mod first")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._make(self.residue + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._make(self.residue - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._make(o - self.residue)

    def __neg__(self):
        return self._make(-self.residue)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._make(self.residue * o)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def inverse(self):
        if not self.is_unit():
            raise DivisionByZero(f"{self.residue} is not invertible mod {self.modulus}")
        return self._make(pow(self.residue, -1, self.modulus))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * self._make(o).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._make(o) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return self._make(pow(self.residue, n, self.modulus))

    def __bool__(self):
        return self.residue != 0

    def __int__(self):
        return self.residue

    def __eq__(self, other):
        if isinstance(other, int):
            return self.residue == other % self.modulus
        if isinstance(other, PrimePowerValue):
            return self.modulus == other.modulus and self.residue == other.residue
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.modulus))

    def __repr__(self):
        return f"{type(self).__name__}({self.residue}, {self.p}, {self.k})"

    def __str__(self):
        return str(self.residue)


class PrimeFieldValue(PrimePowerValue):
    """A residue in F_p."""

    __slots__ = ()

    def __init__(self, residue: int, p: int):
        super().__init__(residue, p, 1)

    def __repr__(self):
        return f"PrimeFieldValue({self.residue}, {self.p})"


def field_arithmetic(x, y, op: str):
    """Apply ``op`` in {add, sub, mul, div} to two values of one universe."""
    _check_same_universe(x, y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        if not y:
            raise DivisionByZero("division by zero")
        if isinstance(x, int) and isinstance(y, int):
            return Fraction(x, y)
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def universe_of(x) -> str:
    if isinstance(x, (int, Fraction)):
        return "Q"
    if isinstance(x, QuadValue):
        return "Q(s15)"
    if isinstance(x, BiquadValue):
        return "Q(s15,s7)"
    if isinstance(x, PrimeFieldValue):
        return f"F_{x.p}"
    if isinstance(x, PrimePowerValue):
        return f"Z/{x.p}^{x.k}"
    raise MixedUniverse(f"not a coefficient: {x!r}")


def _check_same_universe(x, y):
    ux, uy = universe_of(x), universe_of(y)
    if ux != uy:
        raise MixedUniverse(f"{ux} vs {uy}")


# ---------------------------------------------------------------------------
# primes, square roots, reduction


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod(a: int, p: int) -> int | None:
    """Smallest square root of ``a`` modulo the odd prime ``p`` (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while legendre(z, p) != -1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return min(r, p - r)


def find_suitable_prime(discriminants: Sequence[int], min: int = 3) -> tuple[int, list[int]]:
    """Smallest odd prime >= ``min`` modulo which every discriminant is a nonzero square.

    Returns the prime and the smallest square root of each discriminant.
    """
    p = next_prime(max(min, 3))
    while True:
        if all(d % p and legendre(d, p) == 1 for d in discriminants):
            return p, [sqrt_mod(d, p) for d in discriminants]
        p = next_prime(p + 1)


def suitable_primes(discriminants: Sequence[int], count: int, min: int = 3) -> list[tuple[int, list[int]]]:
    out = []
    p = min
    while len(out) < count:
        q, roots = find_suitable_prime(discriminants, p)
        out.append((q, roots))
        p = q + 1
    return out


def _reduce_fraction(x: Fraction, m: int, p: int) -> int:
    if x.denominator % p == 0:
        raise BadDenominator(f"{p} divides the denominator {x.denominator}")
    return x.numerator * pow(x.denominator, -1, m) % m


def reduce_mod(x, p: int, roots: Sequence[int] | int | None = None, k: int = 1) -> int:
    """Image of an exact value in Z/p^k under s15 -> roots[0], s7 -> roots[1].

    ``roots`` must be square roots of -15 (and -7) modulo p^k.  Returns the
    residue as a plain integer in [0, p^k).
    """
    m = p**k
    if isinstance(roots, int):
        roots = [roots]
    if isinstance(x, (int, Fraction)):
        return _reduce_fraction(Fraction(x), m, p)
    if isinstance(x, PrimePowerValue):
        if x.p != p:
            raise MixedUniverse("residue of a different prime")
        return x.residue % m
    if isinstance(x, QuadValue):
        r = roots[0]
        return (_reduce_fraction(x.a, m, p) + _reduce_fraction(x.b, m, p) * r) % m
    if isinstance(x, BiquadValue):
        r15, r7 = roots[0], roots[1]
        return (
            _reduce_fraction(x.a, m, p)
            + _reduce_fraction(x.b, m, p) * r15
            + _reduce_fraction(x.c, m, p) * r7
            + _reduce_fraction(x.d, m, p) * r15 * r7
        ) % m
    raise MixedUniverse(f"cannot reduce {x!r}")


# ---------------------------------------------------------------------------
# CRT and rational reconstruction


def crt_combine(residues: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Combine (value, modulus) pairs with pairwise coprime moduli."""
    value, modulus = 0, 1
    for r, m in residues:
        r %= m
        # value + modulus * t = r (mod m)
        t = (r - value) * pow(modulus, -1, m) % m
        value += modulus * t
        modulus *= m
    return value % modulus, modulus


def rational_reconstruct(r: int, m: int, bound: int | None = None) -> Fraction:
    """Find n/d with |n| <= bound, 0 < d <= bound and n = r*d (mod m).

    Half-extended Euclid with the Wang bound; the default bound is
    floor(sqrt(m/2)).
    """
    if bound is None:
        bound = math.isqrt(m // 2)
    r %= m
    if r == 0:
        return Fraction(0)
    r0, r1 = m, r
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        raise NotFound(f"no fraction with height <= {bound} for {r} mod {m}")
    if math.gcd(abs(t1), m) != 1:
        raise NotFound(f"denominator {t1} not coprime to {m}")
    n, d = r1, t1
    if d < 0:
        n, d = -n, -d
    if math.gcd(abs(n), d) != 1:
        raise NotFound(f"reconstruction {n}/{d} not reduced")
    return Fraction(n, d)


def reconstruct_quad(x_plus: int, x_minus: int, root: int, m: int, bound: int | None = None) -> QuadValue:
    """Recover a + b*s15 from its images under s15 -> root and s15 -> -root mod m."""
    inv2 = pow(2, -1, m)
    a = (x_plus + x_minus) * inv2 % m
    b = (x_plus - x_minus) * inv2 * pow(root, -1, m) % m
    return QuadValue(rational_reconstruct(a, m, bound), rational_reconstruct(b, m, bound))


def hensel_sqrt(a: int, p: int, k: int, root: int | None = None) -> int:
    """Square root of ``a`` modulo p^k lifting ``root`` (a root mod p)."""
    if root is None:
        root = sqrt_mod(a, p)
        if root is None:
            raise NotFound(f"{a} is not a square mod {p}")
    m = p
    r = root % p
    while m < p**k:
        m = min(m * m, p**k)
        r = (r - (r * r - a) * pow(2 * r, -1, m)) % m
    return r


def random_fraction(rng: random.Random, height: int, avoid: int | None = None) -> Fraction:
    while True:
        d = rng.randint(1, height)
        if avoid is None or d % avoid:
            return Fraction(rng.randint(-height, height), d)


# ---------------------------------------------------------------------------
# literal formatting


def _fmt_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_scalar(x) -> str:
    """Canonical literal for a coefficient; parses back to the same value."""
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return _fmt_fraction(x)
    if isinstance(x, PrimePowerValue):
        return str(x.residue)
    if isinstance(x, QuadValue):
        parts = list(zip((x.a, x.b), ("", "s15")))
    elif isinstance(x, BiquadValue):
        parts = list(zip(x.coeffs(), ("", "s15", "s7", "s105")))
    else:
        raise MixedUniverse(f"not a coefficient: {x!r}")
    parts = [(c, g) for c, g in parts if c]
    if not parts:
        return "0"
    if len(parts) == 1:
        c, g = parts[0]
        if not g:
            return _fmt_fraction(c)
        if c == 1:
            return g
        if c == -1:
            return "-" + g
        return f"{_fmt_fraction(c)}*{g}"
    den = math.lcm(*(c.denominator for c, _ in parts))
    pieces = []
    for c, g in parts:
        n = c.numerator * (den // c.denominator)
        sign = "-" if n < 0 else "+"
        n = abs(n)
        body = str(n) if not g else (g if n == 1 else f"{n}*{g}")
        pieces.append((sign, body))
    text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    text = f"({text})"
    if den != 1:
        text += f"/{den}"
    return text
