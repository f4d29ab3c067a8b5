"""Sparse multivariate polynomials with named variables.

A ``SparsePoly`` stores a tuple of variable names, a dict mapping exponent
tuples to coefficients, a coefficient domain and a monomial order tag.
Coefficients are kept in the domain's native representation: ``Fraction``
for Q, ``QuadValue``/``BiquadValue`` for the number fields and plain ints for
F_p and Z/p^k.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from . import exactnum as en
from .exactnum import BiquadValue, MixedUniverse, QuadValue


class PolyError(Exception):
    pass


class UnboundVariable(PolyError, KeyError):
    pass


class PolySyntaxError(PolyError, SyntaxError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


class DuplicateAbscissa(PolyError, ValueError):
    pass


class Inconsistent(PolyError, ValueError):
    pass


# ---------------------------------------------------------------------------
# coefficient domains


class Domain:
    name = "?"
    characteristic = 0
    is_field = True

    def convert(self, x):
        raise NotImplementedError

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("division by zero")
        return 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        return a**n

    @property
    def zero(self):
        return self.convert(0)

    @property
    def one(self):
        return self.convert(1)

    def fmt(self, a) -> str:
        return en.format_scalar(a)

    def scalar(self, a):
        """Public NumberValue for a native coefficient."""
        return a

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, Domain) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def key(self):
        return (self.name,)


class _Rationals(Domain):
    name = "Q"

    def convert(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, (QuadValue, BiquadValue)) and x.is_rational():
            return x.a
        raise MixedUniverse(f"{x!r} is not rational")


class _QuadField(Domain):
    name = "Q(s15)"

    def convert(self, x):
        if isinstance(x, QuadValue):
            return x
        if isinstance(x, (int, Fraction)):
            return QuadValue(x)
        if isinstance(x, BiquadValue) and not (x.c or x.d):
            return QuadValue(x.a, x.b)
        raise MixedUniverse(f"{x!r} is not in Q(s15)")

    def inv(self, a):
        return a.inverse()


class _BiquadField(Domain):
    name = "Q(s15,s7)"

    def convert(self, x):
        if isinstance(x, BiquadValue):
            return x
        if isinstance(x, (int, Fraction)):
            return BiquadValue(x)
        if isinstance(x, QuadValue):
            return x.to_biquad()
        raise MixedUniverse(f"{x!r} is not in Q(s15,s7)")

    def inv(self, a):
        return a.inverse()


QQ = _Rationals()
QQ15 = _QuadField()
QQ157 = _BiquadField()


class ModDomain(Domain):
    """Z/p^k with native int coefficients; a field when k = 1."""

    def __init__(self, p: int, k: int = 1):
        self.p = p
        self.k = k
        self.modulus = p**k
        self.characteristic = self.modulus
        self.is_field = k == 1
        self.name = f"GF({p})" if k == 1 else f"Z/{p}^{k}"

    def key(self):
        return ("mod", self.p, self.k)

    def convert(self, x):
        m = self.modulus
        if isinstance(x, int):
            return x % m
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise en.BadDenominator(f"{self.p} divides {x.denominator}")
            return x.numerator * pow(x.denominator, -1, m) % m
        if isinstance(x, en.PrimePowerValue):
            if x.p != self.p:
                raise MixedUniverse(f"residue mod {x.modulus} in {self.name}")
            return x.residue % m
        raise MixedUniverse(f"{x!r} needs reduce_mod with explicit square roots")

    def add(self, a, b):
        return (a + b) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def mul(self, a, b):
        return a * b % self.modulus

    def neg(self, a):
        return -a % self.modulus

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"{a} not invertible in {self.name}")
        return pow(a, -1, self.modulus)

    def pow(self, a, n):
        if n < 0:
            return pow(self.inv(a), -n, self.modulus)
        return pow(a, n, self.modulus)

    def fmt(self, a):
        return str(a % self.modulus)

    def scalar(self, a):
        if self.k == 1:
            return en.PrimeFieldValue(a, self.p)
        return en.PrimePowerValue(a, self.p, self.k)


@lru_cache(maxsize=None)
def GF(p: int) -> ModDomain:
    return ModDomain(p, 1)


@lru_cache(maxsize=None)
def Zmod(p: int, k: int) -> ModDomain:
    return ModDomain(p, k)


def domain_of_scalar(x) -> Domain:
    if isinstance(x, (int, Fraction)):
        return QQ
    if isinstance(x, QuadValue):
        return QQ15
    if isinstance(x, BiquadValue):
        return QQ157
    if isinstance(x, en.PrimePowerValue):
        return Zmod(x.p, x.k) if x.k > 1 else GF(x.p)
    raise MixedUniverse(f"not a coefficient: {x!r}")


def parse_domain(text: str) -> Domain:
    t = text.strip().replace(" ", "")
    if t in ("Q", "QQ"):
        return QQ
    if t in ("Q(s15)", "QQ(s15)"):
        return QQ15
    if t in ("Q(s15,s7)", "QQ(s15,s7)"):
        return QQ157
    m = re.fullmatch(r"GF\((\d+)\)", t)
    if m:
        return GF(int(m.group(1)))
    m = re.fullmatch(r"Z/(\d+)\^(\d+)", t)
    if m:
        return Zmod(int(m.group(1)), int(m.group(2)))
    raise ValueError(f"unknown field {text!r}")


# ---------------------------------------------------------------------------
# monomial orders


def parse_order(order) -> tuple:
    """Normalize an order tag to ('grevlex',), ('lex',) or ('block', k)."""
    if isinstance(order, tuple):
        return order
    t = str(order).strip().replace(" ", "")
    if t in ("grevlex", "lex"):
        return (t,)
    m = re.fullmatch(r"block\((\d+)\)", t)
    if m:
        return ("block", int(m.group(1)))
    raise ValueError(f"unknown monomial order {order!r}")


def order_name(order) -> str:
    o = parse_order(order)
    return o[0] if len(o) == 1 else f"block({o[1]})"


def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def order_key(order) -> Callable[[tuple], tuple]:
    """Sort key: a larger key means a larger monomial."""
    o = parse_order(order)
    if o[0] == "grevlex":
        return _grevlex_key
    if o[0] == "lex":
        return tuple
    k = o[1]
    return lambda e: (_grevlex_key(e[:k]), _grevlex_key(e[k:]))


# ---------------------------------------------------------------------------
# Monomial


@dataclass(frozen=True)
class Monomial:
    exponents: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {v: e for v, e in dict(self.exponents).items() if e}
        if any(e < 0 for e in clean.values()):
            raise ValueError("negative exponent")
        object.__setattr__(self, "exponents", dict(sorted(clean.items())))

    @property
    def degree(self) -> int:
        return sum(self.exponents.values())

    def __hash__(self):
        return hash(tuple(self.exponents.items()))

    def __str__(self):
        return _fmt_monomial(tuple(self.exponents), tuple(self.exponents.values())) or "1"


# ---------------------------------------------------------------------------
# SparsePoly


def _fmt_monomial(names, exps) -> str:
    parts = []
    for v, e in zip(names, exps):
        if e == 1:
            parts.append(v)
        elif e:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


class SparsePoly:
    __slots__ = ("vars", "terms", "domain", "order", "_sorted")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple, object] | None = None, domain: Domain = QQ, order="grevlex", _clean=False):
        self.vars = tuple(vars)
        self.domain = domain
        self.order = parse_order(order)
        if terms is None:
            terms = {}
        if _clean:
            self.terms = dict(terms)
        else:
            conv = domain.convert
            n = len(self.vars)
            out = {}
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError("exponent length does not match variables")
                c = conv(c)
                if c:
                    out[tuple(e)] = c
            self.terms = out
        self._sorted = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c, vars=(), domain=None, order="grevlex"):
        domain = domain or domain_of_scalar(c)
        return cls(vars, {(0,) * len(vars): c}, domain, order)

    @classmethod
    def var(cls, name: str, vars=None, domain: Domain = QQ, order="grevlex"):
        vars = tuple(vars) if vars is not None else (name,)
        e = tuple(1 if v == name else 0 for v in vars)
        if name not in vars:
            raise UnboundVariable(name)
        return cls(vars, {e: 1}, domain, order)

    @classmethod
    def zero(cls, vars=(), domain: Domain = QQ, order="grevlex"):
        return cls(vars, {}, domain, order, _clean=True)

    def _new(self, terms, vars=None, domain=None, order=None):
        return SparsePoly(vars if vars is not None else self.vars, terms, domain or self.domain, order or self.order, _clean=True)

    # -- basic properties ---------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self) -> list[tuple[tuple, object]]:
        if self._sorted is None:
            key = order_key(self.order)
            self._sorted = sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)
        return self._sorted

    def term_list(self) -> list[tuple[Monomial, object]]:
        """Terms as (Monomial, NumberValue), strictly descending."""
        return [(Monomial(dict(zip(self.vars, e))), self.domain.scalar(c)) for e, c in self.sorted_terms()]

    def leading(self) -> tuple[tuple, object]:
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        key = order_key(self.order)
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def LM(self) -> tuple:
        return self.leading()[0]

    def LC(self):
        return self.leading()[1]

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: str) -> int:
        if var not in self.vars:
            return 0 if self.terms else -1
        i = self.vars.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def used_vars(self) -> tuple[str, ...]:
        used = [False] * len(self.vars)
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used[i] = True
        return tuple(v for v, u in zip(self.vars, used) if u)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_coeff(self):
        return self.terms.get((0,) * len(self.vars), self.domain.zero)

    def coeff(self, mono: Mapping[str, int] | Monomial):
        if isinstance(mono, Monomial):
            mono = mono.exponents
        for v in mono:
            if v not in self.vars and mono[v]:
                return self.domain.zero
        e = tuple(mono.get(v, 0) for v in self.vars)
        return self.terms.get(e, self.domain.zero)

    # -- variable handling --------------------------------------------------
    def with_vars(self, vars: Sequence[str]) -> "SparsePoly":
        vars = tuple(vars)
        if vars == self.vars:
            return self
        idx = {v: i for i, v in enumerate(vars)}
        pos = []
        for i, v in enumerate(self.vars):
            if v in idx:
                pos.append(idx[v])
            else:
                pos.append(-1)
        n = len(vars)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for i, x in enumerate(e):
                if x:
                    j = pos[i]
                    if j < 0:
                        raise UnboundVariable(self.vars[i])
                    ne[j] = x
            out[tuple(ne)] = c
        return self._new(out, vars=vars)

    def with_order(self, order) -> "SparsePoly":
        return self._new(self.terms, order=parse_order(order))

    def _align(self, other: "SparsePoly"):
        if self.domain != other.domain:
            raise MixedUniverse(f"{self.domain} vs {other.domain}")
        if self.vars == other.vars:
            return self, other
        vars = self.vars + tuple(v for v in other.vars if v not in self.vars)
        return self.with_vars(vars), other.with_vars(vars)

    def _lift(self, other):
        if isinstance(other, SparsePoly):
            return other
        c = self.domain.convert(other)
        return self._new({(0,) * len(self.vars): c} if c else {})

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        a, b = self._align(other)
        D = a.domain
        out = dict(a.terms)
        for e, c in b.terms.items():
            if e in out:
                s = D.add(out[e], c)
                if s:
                    out[e] = s
                else:
                    del out[e]
            else:
                out[e] = c
        return a._new(out)

    __radd__ = __add__

    def __neg__(self):
        D = self.domain
        return self._new({e: D.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def scale(self, c) -> "SparsePoly":
        D = self.domain
        c = D.convert(c)
        if not c:
            return self._new({})
        return self._new({e: D.mul(x, c) for e, x in self.terms.items() if D.mul(x, c)})

    def mul_term(self, mono: tuple, c) -> "SparsePoly":
        D = self.domain
        out = {}
        for e, x in self.terms.items():
            y = D.mul(x, c)
            if y:
                out[tuple(a + b for a, b in zip(e, mono))] = y
        return self._new(out)

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            return self.scale(other)
        a, b = self._align(other)
        D = a.domain
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out: dict = {}
        add, mul = D.add, D.mul
        for e2, c2 in b.terms.items():
            for e1, c1 in a.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = mul(c1, c2)
                if e in out:
                    out[e] = add(out[e], v)
                else:
                    out[e] = v
        return a._new({e: c for e, c in out.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self._new({(0,) * len(self.vars): self.domain.one})
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, c):
        if isinstance(c, SparsePoly):
            if not c.is_constant() or not c:
                raise PolyError("division by a non-constant polynomial")
            c = c.constant_coeff()
        return self.scale(self.domain.inv(self.domain.convert(c)))

    def monic(self) -> "SparsePoly":
        if not self.terms:
            return self
        return self.scale(self.domain.inv(self.LC()))

    def __eq__(self, other):
        if isinstance(other, SparsePoly):
            if self.domain != other.domain:
                if not self.terms and not other.terms:
                    return True
                return False
            a, b = self._align(other)
            return a.terms == b.terms
        try:
            o = self._lift(other)
        except (MixedUniverse, TypeError):
            return NotImplemented
        return self == o

    def __hash__(self):
        used = self.used_vars()
        p = self.with_vars(used) if used != self.vars else self
        return hash((used, frozenset(p.terms.items())))

    # -- evaluation and substitution ----------------------------------------
    def evaluate(self, point: Mapping[str, object]):
        """Value at ``point``; every variable occurring in the polynomial must be bound."""
        D = self.domain
        vals = []
        for v in self.vars:
            if v in point:
                vals.append(D.convert(point[v]))
            else:
                vals.append(None)
        total = D.zero
        for e, c in self.terms.items():
            t = c
            for x, val in zip(e, vals):
                if x:
                    if val is None:
                        raise UnboundVariable(_first_unbound(self.vars, e, vals))
                    t = D.mul(t, D.pow(val, x))
            total = D.add(total, t)
        return total

    def subs(self, mapping: Mapping[str, "SparsePoly"], vars: Sequence[str] | None = None) -> "SparsePoly":
        """Substitute polynomials for variables; unmapped variables stay."""
        keep = [v for v in self.vars if v not in mapping]
        images = list(mapping.values())
        target = list(vars) if vars is not None else list(keep)
        for img in images:
            if isinstance(img, SparsePoly):
                for v in img.vars:
                    if v not in target:
                        target.append(v)
        target = tuple(target)
        D = self.domain
        one = SparsePoly(target, {(0,) * len(target): D.one}, D, self.order, _clean=True)
        pieces = []
        used = set(self.used_vars())
        for v in self.vars:
            if v not in used:
                pieces.append(None)
            elif v in mapping:
                img = mapping[v]
                if not isinstance(img, SparsePoly):
                    img = one.scale(img)
                pieces.append(img.with_vars(target) if img.domain == D else _raise_mixed(img, D))
            else:
                pieces.append(SparsePoly.var(v, target, D, self.order))
        cache: dict = {}

        def power(i, k):
            if (i, k) not in cache:
                cache[(i, k)] = pieces[i] ** k
            return cache[(i, k)]

        result: dict = {}
        for e, c in self.terms.items():
            t = one.scale(c)
            for i, x in enumerate(e):
                if x:
                    t = t * power(i, x)
            for te, tc in t.terms.items():
                if te in result:
                    s = D.add(result[te], tc)
                    if s:
                        result[te] = s
                    else:
                        del result[te]
                else:
                    result[te] = tc
        return SparsePoly(target, result, D, self.order, _clean=True)

    def diff(self, var: str) -> "SparsePoly":
        if var not in self.vars:
            return self._new({})
        i = self.vars.index(var)
        D = self.domain
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                c2 = D.mul(c, D.convert(e[i]))
                if c2:
                    ne = list(e)
                    ne[i] -= 1
                    out[tuple(ne)] = c2
        return self._new(out)

    def map_coeffs(self, fn, domain: Domain) -> "SparsePoly":
        out = {}
        for e, c in self.terms.items():
            y = domain.convert(fn(c))
            if y:
                out[e] = y
        return SparsePoly(self.vars, out, domain, self.order, _clean=True)

    def reduce(self, p: int, roots: Sequence[int] | int | None = None, k: int = 1) -> "SparsePoly":
        """Image in GF(p) (or Z/p^k) with s15, s7 sent to the given roots."""
        dom = GF(p) if k == 1 else Zmod(p, k)
        if isinstance(self.domain, ModDomain):
            return self.map_coeffs(lambda c: c % dom.modulus, dom)
        return self.map_coeffs(lambda c: en.reduce_mod(c, p, roots, k), dom)

    def homogenize(self, var: str = "h") -> "SparsePoly":
        d = self.total_degree()
        vars = self.vars + (var,)
        return SparsePoly(vars, {e + (d - sum(e),): c for e, c in self.terms.items()}, self.domain, self.order, _clean=True)

    # -- text ---------------------------------------------------------------
    def __str__(self):
        return print_poly(self)

    def __repr__(self):
        return f"SparsePoly({print_poly(self)!r}, domain={self.domain})"


def _first_unbound(vars, e, vals):
    for v, x, val in zip(vars, e, vals):
        if x and val is None:
            return v
    return "?"


def _raise_mixed(img, D):
    raise MixedUniverse(f"substitution image over {img.domain} into {D}")


def common_ring(polys: Sequence[SparsePoly], vars: Sequence[str] | None = None, order=None) -> list[SparsePoly]:
    """Re-express polynomials over one variable tuple (and order)."""
    if not polys:
        return []
    if vars is None:
        vs: list[str] = []
        for f in polys:
            for v in f.vars:
                if v not in vs:
                    vs.append(v)
        vars = vs
    out = []
    for f in polys:
        g = f.with_vars(vars)
        if order is not None:
            g = g.with_order(order)
        out.append(g)
    return out


def poly_arith(f: SparsePoly, g: SparsePoly, op: str) -> SparsePoly:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def evaluate(f: SparsePoly, point: Mapping[str, object]):
    return f.evaluate(point)


# ---------------------------------------------------------------------------
# variable actions


PLUCKER_RE = re.compile(r"x_([1-6])([1-6])([1-6])$")


class VarAction:
    """Finite-order substitution x -> scalar * y on named variables."""

    def __init__(self, images: Mapping[str, tuple[object, str] | str], order: int, name: str = "action"):
        norm = {}
        for v, img in images.items():
            if isinstance(img, str):
                if img.startswith("-"):
                    norm[v] = (-1, img[1:])
                else:
                    norm[v] = (1, img)
            else:
                norm[v] = (img[0], img[1])
        self.images = norm
        self.order = order
        self.name = name

    @classmethod
    def identity(cls, vars: Iterable[str]) -> "VarAction":
        return cls({v: (1, v) for v in vars}, 1, "identity")

    def domain_vars(self):
        return tuple(self.images)

    def compose(self, other: "VarAction", order: int | None = None) -> "VarAction":
        """self after other: x -> other(x) -> self applied to the image."""
        out = {}
        for v, (c, w) in other.images.items():
            c2, w2 = self.images.get(w, (1, w))
            out[v] = (_mul_scalar(c, c2), w2)
        return VarAction(out, order or self.order * other.order, f"{self.name}*{other.name}")

    def is_identity_power(self, n: int | None = None) -> bool:
        n = self.order if n is None else n
        for v in self.images:
            c, w = 1, v
            for _ in range(n):
                c2, w = self.images.get(w, (1, w))
                c = _mul_scalar(c, c2)
            if w != v or not _is_one(c):
                return False
        return True


def _mul_scalar(a, b):
    return a * b


def _is_one(c) -> bool:
    try:
        return c == 1
    except TypeError:
        return False


def apply_action(f: SparsePoly, a: VarAction, fix_missing: bool = False) -> SparsePoly:
    """Substitute every variable by its image under ``a``."""
    D = f.domain
    targets = list(f.vars)
    pos_map = []
    scal = []
    for v in f.vars:
        if v in a.images:
            c, w = a.images[v]
        elif fix_missing:
            c, w = 1, v
        else:
            c, w = None, None
        if w is not None and w not in targets:
            targets.append(w)
        pos_map.append(w)
        scal.append(D.convert(c) if c is not None else None)
    idx = {v: i for i, v in enumerate(targets)}
    n = len(targets)
    out: dict = {}
    for e, c in f.terms.items():
        ne = [0] * n
        coef = c
        for i, x in enumerate(e):
            if not x:
                continue
            w = pos_map[i]
            if w is None:
                raise UnboundVariable(f.vars[i])
            ne[idx[w]] += x
            if scal[i] != 1:
                coef = D.mul(coef, D.pow(scal[i], x))
        key = tuple(ne)
        if key in out:
            s = D.add(out[key], coef)
            if s:
                out[key] = s
            else:
                del out[key]
        elif coef:
            out[key] = coef
    return SparsePoly(tuple(targets), out, D, f.order, _clean=True)


# ---------------------------------------------------------------------------
# Jacobians


def jacobian(system: Sequence[SparsePoly], vars: Sequence[str]) -> list[list[SparsePoly]]:
    return [[f.diff(v) for v in vars] for f in system]


def evaluate_matrix(mat: Sequence[Sequence[SparsePoly]], point: Mapping[str, object]):
    return [[g.evaluate(point) for g in row] for row in mat]


# ---------------------------------------------------------------------------
# univariate interpolation over F_p


def interpolate_univariate(samples: Sequence[tuple[int, int]], degree_bound: int, p: int, var: str = "x") -> SparsePoly:
    """Unique polynomial of degree <= degree_bound through the samples mod p."""
    xs = [x % p for x, _ in samples]
    if len(set(xs)) != len(xs):
        raise DuplicateAbscissa("repeated abscissa")
    if len(samples) < degree_bound + 1:
        raise PolyError(f"need {degree_bound + 1} samples, got {len(samples)}")
    use = samples[: degree_bound + 1]
    # Newton divided differences
    n = len(use)
    xs_u = [x % p for x, _ in use]
    coef = [y % p for _, y in use]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * pow((xs_u[i] - xs_u[i - j]) % p, -1, p) % p
    # expand the Newton form
    poly = [0] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs_u[i]) + coef[i]
        new = [0] * n
        for d in range(n - 1):
            new[d + 1] = (new[d + 1] + poly[d]) % p
        for d in range(n):
            new[d] = (new[d] - xs_u[i] * poly[d]) % p
        new[0] = (new[0] + coef[i]) % p
        poly = new
    f = SparsePoly((var,), {(d,): c for d, c in enumerate(poly) if c}, GF(p))
    for x, y in samples[degree_bound + 1 :]:
        if f.evaluate({var: x}) != y % p:
            raise Inconsistent(f"sample ({x}, {y}) disagrees with the interpolant")
    return f


def rational_poly_from_primes(per_prime: Sequence[tuple[int, SparsePoly]], bound: int | None = None) -> SparsePoly:
    """Recover a monic polynomial over Q from its monic images modulo several primes."""
    if not per_prime:
        raise PolyError("no primes")
    monics = [(p, f.monic()) for p, f in per_prime]
    vars = monics[0][1].vars
    monics = [(p, f.with_vars(vars)) for p, f in monics]
    support = set(monics[0][1].terms)
    for p, f in monics[1:]:
        if set(f.terms) != support:
            raise Inconsistent("supports differ between primes")
    modulus = math.prod(p for p, _ in monics)
    if bound is None:
        bound = math.isqrt(modulus // 2)
    out = {}
    for e in support:
        r, m = en.crt_combine([(f.terms[e], p) for p, f in monics])
        out[e] = en.rational_reconstruct(r, m, bound)
    return SparsePoly(vars, out, QQ, monics[0][1].order)


def univariate_coeffs(f: SparsePoly, var: str | None = None) -> list:
    """Dense coefficient list (index = degree) of a univariate polynomial."""
    used = f.used_vars()
    if var is None:
        if len(used) > 1:
            raise PolyError("not univariate")
        var = used[0] if used else (f.vars[0] if f.vars else "x")
    if any(v != var for v in used):
        raise PolyError("not univariate")
    d = f.degree_in(var)
    out = [f.domain.zero] * (d + 1)
    if var not in f.vars:
        if f.terms:
            out = [f.constant_coeff()]
        return out
    i = f.vars.index(var)
    for e, c in f.terms.items():
        out[e[i]] = c
    return out


def from_coeffs(coeffs: Sequence, var: str, domain: Domain) -> SparsePoly:
    return SparsePoly((var,), {(d,): c for d, c in enumerate(coeffs)}, domain)


# ---------------------------------------------------------------------------
# parsing


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")
SCALAR_SYMBOLS = {"s15": BiquadValue(0, 1), "s7": BiquadValue(0, 0, 1), "s105": BiquadValue(0, 0, 0, 1), "i": None}


def normalize_plucker(name: str) -> tuple[str, int]:
    """Resolve x_ijk to (canonical name, sign); sign 0 for repeated indices."""
    m = PLUCKER_RE.match(name)
    if not m:
        return name, 1
    idx = [int(g) for g in m.groups()]
    if len(set(idx)) < 3:
        return name, 0
    sign = 1
    a = idx[:]
    for i in range(3):
        for j in range(2 - i):
            if a[j] > a[j + 1]:
                a[j], a[j + 1] = a[j + 1], a[j]
                sign = -sign
    return "x_" + "".join(map(str, a)), sign


class _Expr:
    """Intermediate value: dict from (sorted var/exp tuple) to BiquadValue."""

    __slots__ = ("t",)

    def __init__(self, t):
        self.t = t

    @staticmethod
    def const(c):
        return _Expr({(): c} if c else {})

    @staticmethod
    def var(name):
        return _Expr({((name, 1),): BiquadValue(1)})

    def add(self, o, sign=1):
        out = dict(self.t)
        for m, c in o.t.items():
            v = out.get(m, BiquadValue(0)) + (c if sign == 1 else -c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return _Expr(out)

    def mul(self, o):
        out: dict = {}
        for m1, c1 in self.t.items():
            for m2, c2 in o.t.items():
                d = dict(m1)
                for v, e in m2:
                    d[v] = d.get(v, 0) + e
                m = tuple(sorted(d.items()))
                out[m] = out.get(m, BiquadValue(0)) + c1 * c2
        return _Expr({m: c for m, c in out.items() if c})

    def is_scalar(self):
        return all(m == () for m in self.t)

    def scalar(self):
        return self.t.get((), BiquadValue(0))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise PolySyntaxError(f"unexpected character {text[pos]!r}", pos, text)
            start = m.start(m.lastindex)
            if m.group(1):
                self.toks.append(("num", int(m.group(1)), start))
            elif m.group(2):
                self.toks.append(("id", m.group(2), start))
            else:
                op = m.group(3)
                self.toks.append(("op", "^" if op == "**" else op, start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", None, len(self.text))

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise PolySyntaxError(f"expected {op!r}", t[2], self.text)

    def parse(self) -> _Expr:
        if not self.toks:
            raise PolySyntaxError("empty expression", 0, self.text)
        e = self.sum()
        t = self.peek()
        if t[0] != "end":
            raise PolySyntaxError(f"unexpected token {t[1]!r}", t[2], self.text)
        return e

    def sum(self):
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
        e = self.product()
        if sign < 0:
            e = _Expr.const(BiquadValue(0)).add(e, -1)
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                e = e.add(self.product(), -1 if t[1] == "-" else 1)
            else:
                return e

    def product(self):
        e = self.power()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] == "*":
                self.take()
                e = e.mul(self.power())
            elif t[0] == "op" and t[1] == "/":
                self.take()
                d = self.power()
                if not d.is_scalar() or not d.scalar():
                    raise PolySyntaxError("division by a non-scalar or zero", t[2], self.text)
                e = e.mul(_Expr.const(d.scalar().inverse()))
            elif t[0] in ("num", "id") or (t[0] == "op" and t[1] == "("):
                # implicit multiplication, e.g. "2 W0" or "(a+b)(c+d)"
                e = e.mul(self.power())
            else:
                return e

    def power(self):
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            sign = 1
            t2 = self.peek()
            if t2[0] == "op" and t2[1] == "-":
                raise PolySyntaxError("negative exponent", t2[2], self.text)
            t2 = self.take()
            if t2[0] != "num":
                raise PolySyntaxError("exponent must be an integer", t2[2], self.text)
            n = t2[1] * sign
            result = _Expr.const(BiquadValue(1))
            for _ in range(n):
                result = result.mul(base)
            return result
        return base

    def atom(self):
        t = self.take()
        if t[0] == "num":
            return _Expr.const(BiquadValue(t[1]))
        if t[0] == "id":
            name = t[1]
            if name in SCALAR_SYMBOLS:
                if name == "i":
                    raise PolySyntaxError("bare 'i' is not a scalar; use s15 or s7", t[2], self.text)
                return _Expr.const(SCALAR_SYMBOLS[name])
            canon, sign = normalize_plucker(name)
            if sign == 0:
                return _Expr.const(BiquadValue(0))
            v = _Expr.var(canon)
            return v if sign > 0 else _Expr.const(BiquadValue(-1)).mul(v)
        if t[0] == "op" and t[1] == "(":
            e = self.sum()
            self.expect(")")
            return e
        if t[0] == "op" and t[1] in "+-":
            inner = self.power()
            return inner if t[1] == "+" else _Expr.const(BiquadValue(-1)).mul(inner)
        raise PolySyntaxError(f"unexpected token {t[1]!r}", t[2], self.text)


def _smallest_domain(values) -> Domain:
    dom = QQ
    for c in values:
        if c.c or c.d:
            return QQ157
        if c.b:
            dom = QQ15
    return dom


def parse_poly(text: str, vars: Sequence[str] | None = None, domain: Domain | None = None, order="grevlex", roots=None) -> SparsePoly:
    """Parse a polynomial; the domain is inferred unless given.

    A modular ``domain`` needs ``roots`` (square roots of -15, -7) when the
    text contains s15/s7/s105.
    """
    expr = _Parser(text).parse()
    found = []
    for m in expr.t:
        for v, _ in m:
            if v not in found:
                found.append(v)
    if vars is None:
        vars = tuple(found)
    else:
        vars = tuple(vars)
        extra = [v for v in found if v not in vars]
        if extra:
            raise UnboundVariable(f"variables {extra} not declared")
    if domain is None:
        domain = _smallest_domain(expr.t.values())
    idx = {v: i for i, v in enumerate(vars)}
    terms = {}
    for m, c in expr.t.items():
        e = [0] * len(vars)
        for v, x in m:
            e[idx[v]] = x
        if isinstance(domain, ModDomain):
            val = en.reduce_mod(c if (c.b or c.c or c.d) else c.a, domain.p, roots, domain.k)
        else:
            val = domain.convert(c)
        terms[tuple(e)] = val
    return SparsePoly(vars, terms, domain, order)


def print_poly(f: SparsePoly) -> str:
    if not f.terms:
        return "0"
    D = f.domain
    out = []
    for i, (e, c) in enumerate(f.sorted_terms()):
        mono = _fmt_monomial(f.vars, e)
        neg = False
        if isinstance(D, ModDomain):
            cs = D.fmt(c)
        elif isinstance(c, Fraction) or c.is_rational():
            r = c if isinstance(c, Fraction) else c.a
            neg = r < 0
            cs = en.format_scalar(-r if neg else r)
        else:
            cs = en.format_scalar(c)
        if mono:
            if cs == "1":
                body = mono
            elif cs == "-1":
                body = "-" + mono
            else:
                body = f"{cs}*{mono}"
        else:
            body = cs
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# ---------------------------------------------------------------------------
# files


@dataclass
class PolyFile:
    polys: list[SparsePoly]
    vars: tuple[str, ...] | None = None
    order: tuple = ("grevlex",)
    domain: Domain | None = None
    names: list[str | None] = field(default_factory=list)


def read_poly_text(text: str, domain: Domain | None = None, roots=None) -> PolyFile:
    """Parse the line-oriented polynomial/ideal format.

    Headers: ``vars: a b c``, ``order: grevlex|lex|block(k)``, ``field: ...``.
    One polynomial per line, optionally prefixed by ``name =`` or ``name:``;
    ``#`` starts a comment; a trailing backslash continues a line.
    """
    vars = None
    order = ("grevlex",)
    lines = []
    buf = ""
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if line.endswith("\\"):
            buf += line[:-1] + " "
            continue
        line = (buf + line).strip()
        buf = ""
        if line:
            lines.append(line)
    if buf.strip():
        lines.append(buf.strip())
    polys, names = [], []
    body = []
    for line in lines:
        m = re.match(r"(vars|order|field)\s*:\s*(.*)$", line)
        if m:
            key, val = m.group(1), m.group(2)
            if key == "vars":
                vars = tuple(normalize_plucker(v)[0] for v in val.split())
            elif key == "order":
                order = parse_order(val)
            else:
                domain = domain or parse_domain(val)
            continue
        body.append(line)
    for line in body:
        name = None
        m = re.match(r"([A-Za-z_][A-Za-z_0-9]*)\s*=\s*(.*)$", line)
        if m:
            name, line = m.group(1), m.group(2)
        polys.append(parse_poly(line, vars=vars, domain=domain, order=order, roots=roots) if domain is not None else parse_poly(line, vars=vars, order=order))
        names.append(name)
    if domain is None and polys:
        # unify inferred domains upward
        doms = {f.domain for f in polys}
        if len(doms) > 1:
            top = QQ157 if QQ157 in doms else QQ15
            polys = [f.map_coeffs(lambda c: c, top) for f in polys]
    if vars is None and polys:
        polys = common_ring(polys)
        vars = polys[0].vars
    elif vars is not None:
        polys = [f.with_vars(vars) for f in polys]
    return PolyFile(polys, vars, order, polys[0].domain if polys else domain, names)


def write_poly_text(polys: Sequence[SparsePoly], order=None, names: Sequence[str | None] | None = None, header: str | None = None, field_tag: bool = True) -> str:
    polys = common_ring(list(polys)) if polys else []
    lines = []
    if header:
        lines.extend("# " + h for h in header.splitlines())
    if polys:
        lines.append("vars: " + " ".join(polys[0].vars))
        o = order if order is not None else polys[0].order
        lines.append("order: " + order_name(o))
        if field_tag:
            lines.append("field: " + polys[0].domain.name)
    for i, f in enumerate(polys):
        if order is not None:
            f = f.with_order(order)
        name = names[i] if names and i < len(names) else None
        lines.append((f"{name} = " if name else "") + print_poly(f))
    return "\n".join(lines) + "\n"


def all_monomials(nvars: int, degree: int):
    """Exponent tuples of the given total degree (graded, lexicographic)."""
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    for bars in itertools.combinations(range(degree + nvars - 1), nvars - 1):
        prev = -1
        e = []
        for b in bars:
            e.append(b - prev - 1)
            prev = b
        e.append(degree + nvars - 1 - prev - 1)
        yield tuple(e)
