"""Groebner bases, normal forms, Hilbert functions and emptiness tests.

Monomials are packed into a single Python int ``M = (K << L) | E`` where
``E`` holds the exponents (16-bit fields with a guard bit) and ``K`` holds
order-adapted linear forms of the exponents.  Both halves are additive, so
monomial multiplication is integer addition, comparing monomials in the
chosen order is integer comparison, and divisibility is a guard-bit test on
the low half.

Two engines share that representation:

* ``_buchberger_classic``: pair-at-a-time Buchberger with the sugar strategy
  and the Gebauer-Moeller criteria, over any coefficient domain.
* ``_f4``: batched F4 over GF(p); matrix reduction runs in ``kernels``.
"""
from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .multipoly import (
    Domain,
    GF,
    ModDomain,
    PolyError,
    SparsePoly,
    all_monomials,
    common_ring,
    parse_order,
)

log = logging.getLogger(__name__)

EBITS = 16
KBITS = 24


class GroebnerError(Exception):
    pass


class NotHomogeneous(GroebnerError, ValueError):
    pass


class RankTooLarge(GroebnerError, ValueError):
    pass


class BudgetExceeded(GroebnerError):
    pass


# ---------------------------------------------------------------------------
# packed monomials


class MonoCtx:
    """Packing of exponent tuples for a fixed number of variables and order."""

    def __init__(self, nvars: int, order=("grevlex",)):
        self.n = n = nvars
        self.order = parse_order(order)
        self.L = n * EBITS
        self.guard = sum(1 << (EBITS * i + EBITS - 1) for i in range(n))
        self.emask = (1 << self.L) - 1
        self._forms = self._linear_forms()

    def _linear_forms(self):
        n, o = self.n, self.order
        if o[0] == "lex":
            return [[1 if j == i else 0 for j in range(n)] for i in range(n)]
        if o[0] == "grevlex":
            return _grevlex_forms(0, n, n)
        k = o[1]
        return _grevlex_forms(0, k, n) + _grevlex_forms(k, n, n)

    def encode(self, e: Sequence[int]) -> int:
        E = 0
        for i, x in enumerate(e):
            E |= x << (EBITS * i)
        K = 0
        for form in self._forms:
            K = (K << KBITS) | sum(c * x for c, x in zip(form, e) if c)
        return (K << self.L) | E

    def decode(self, M: int) -> tuple[int, ...]:
        E = M & self.emask
        mask = (1 << EBITS) - 1
        return tuple((E >> (EBITS * i)) & mask for i in range(self.n))

    def degree(self, M: int) -> int:
        return sum(self.decode(M))

    def divides(self, d: int, m: int) -> bool:
        g = self.guard
        return (((m & self.emask) | g) - (d & self.emask)) & g == g

    def lcm(self, a: int, b: int) -> int:
        return self.encode(tuple(max(x, y) for x, y in zip(self.decode(a), self.decode(b))))

    def coprime(self, a: int, b: int) -> bool:
        return all(not (x and y) for x, y in zip(self.decode(a), self.decode(b)))


def _grevlex_forms(lo, hi, n):
    # grevlex on x_lo..x_{hi-1} equals lex on (deg, s_{m-1}, ..., s_1) with
    # s_k the partial sums x_lo + ... + x_{lo+k-1}
    m = hi - lo
    forms = []
    for k in range(m, 0, -1):
        forms.append([1 if lo <= j < lo + k else 0 for j in range(n)])
    return forms


# ---------------------------------------------------------------------------
# result types


@dataclass
class GroebnerBasis:
    generators: list[SparsePoly]
    order: tuple
    vars: tuple[str, ...]
    domain: Domain
    truncated_at: int | None = None
    stats: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    @property
    def field_tag(self) -> str:
        return self.domain.name

    def leading_monomials(self) -> list[tuple[int, ...]]:
        return [g.LM() for g in self.generators]

    def is_unit(self) -> bool:
        return any(g.is_constant() and g for g in self.generators)

    def contains(self, f: SparsePoly) -> bool:
        return normal_form(f, self).is_zero()


@dataclass
class HilbertProfile:
    values: list[tuple[int, int]]
    polynomial: list[Fraction] | None = None  # coefficients, constant first
    stable_from: int | None = None

    def __getitem__(self, n):
        return dict(self.values)[n]

    def poly_value(self, n: int):
        if self.polynomial is None:
            return None
        return sum(c * n**i for i, c in enumerate(self.polynomial))

    def table(self) -> str:
        return "".join(f"{n}\t{h}\n" for n, h in self.values)


# ---------------------------------------------------------------------------
# pair bookkeeping shared by both engines


class _Pairs:
    """Gebauer-Moeller update over packed leading monomials."""

    def __init__(self, ctx: MonoCtx):
        self.ctx = ctx
        self.lms: list[int] = []
        self.sugar: list[int] = []
        self.active: list[int] = []
        self.pairs: list[tuple[int, int, int, int]] = []  # (sugar, lcm, i, j)

    def add(self, lm: int, sugar: int) -> int:
        ctx = self.ctx
        h = len(self.lms)
        self.lms.append(lm)
        self.sugar.append(sugar)
        dh = ctx.degree(lm)
        cand = []
        for g in self.active:
            l = ctx.lcm(self.lms[g], lm)
            cand.append((g, l, ctx.coprime(self.lms[g], lm)))
        # criterion: drop (g, h) if another (g2, h) has lcm dividing it
        keep = []
        for idx, (g, l, cop) in enumerate(cand):
            if cop:
                keep.append((g, l, cop))
                continue
            dominated = False
            for idx2, (g2, l2, _) in enumerate(cand):
                if idx2 == idx:
                    continue
                if ctx.divides(l2, l) and (l2 != l or idx2 < idx):
                    dominated = True
                    break
            if not dominated:
                keep.append((g, l, cop))
        new_pairs = []
        for g, l, cop in keep:
            if cop:
                continue  # product criterion
            dl = ctx.degree(l)
            s = max(self.sugar[g] + dl - ctx.degree(self.lms[g]), sugar + dl - dh)
            new_pairs.append((s, l, g, h))
        # chain criterion on existing pairs
        old = []
        for s, l, i, j in self.pairs:
            if ctx.divides(lm, l):
                li = ctx.lcm(self.lms[i], lm)
                lj = ctx.lcm(self.lms[j], lm)
                if li != l and lj != l:
                    continue
            old.append((s, l, i, j))
        self.pairs = old + new_pairs
        self.active = [g for g in self.active if not ctx.divides(lm, self.lms[g])] + [h]
        return h

    def pop_min(self, max_degree=None):
        """Remove and return all pairs of minimal sugar (within the degree cap)."""
        cand = self.pairs
        if max_degree is not None:
            cand = [q for q in cand if self.ctx.degree(q[1]) <= max_degree]
        if not cand:
            return []
        s0 = min(q[0] for q in cand)
        chosen = [q for q in cand if q[0] == s0]
        chosen_set = set((q[2], q[3]) for q in chosen)
        self.pairs = [q for q in self.pairs if (q[2], q[3]) not in chosen_set]
        return chosen


# ---------------------------------------------------------------------------
# F4 over GF(p)


def _to_rows(polys: Sequence[SparsePoly], ctx: MonoCtx, p: int):
    out = []
    for f in polys:
        items = sorted(((ctx.encode(e), c % p) for e, c in f.terms.items() if c % p), reverse=True)
        if items:
            out.append(([m for m, _ in items], [c for _, c in items]))
    return out


def _monic(row, p):
    mons, coefs = row
    c0 = coefs[0]
    if c0 == 1:
        return row
    inv = pow(c0, -1, p)
    return mons, [c * inv % p for c in coefs]


class _F4:
    def __init__(self, ctx: MonoCtx, p: int, max_degree=None, budget_rows: int | None = None):
        self.ctx = ctx
        self.p = p
        self.max_degree = max_degree
        self.G: list[tuple[list[int], list[int]]] = []
        self.pairs = _Pairs(ctx)
        self.budget_rows = budget_rows
        self.steps = 0
        self.max_matrix = (0, 0)
        self.unit = False

    # -- symbolic preprocessing + linear algebra ---------------------------
    def _find_reducer(self, m: int):
        ctx = self.ctx
        G = self.G
        best = None
        for g in self.pairs.active:
            if ctx.divides(G[g][0][0], m):
                if best is None or len(G[g][0]) < len(G[best][0]):
                    best = g
        if best is None:
            # fall back to any element (non-minimal ones still reduce)
            for g in range(len(G)):
                if ctx.divides(G[g][0][0], m):
                    return g
        return best

    def _reduce(self, piv_rows, b_rows, need_all_cols=False):
        """Reduce b_rows by piv_rows plus preprocessing reducers.

        piv_rows: dict lm -> (mons, coefs) of monic rows with distinct LMs.
        Returns (out_cols, dense block) of the reduced b_rows.
        """
        ctx = self.ctx
        G = self.G
        pending = set()
        for mons, _ in b_rows:
            pending.update(mons)
        for mons, _ in piv_rows.values():
            pending.update(mons)
        seen = set(pending)
        todo = [m for m in pending if m not in piv_rows]
        while todo:
            m = todo.pop()
            g = self._find_reducer(m)
            if g is None:
                continue
            gm, gc = G[g]
            t = m - gm[0]
            mons = [x + t for x in gm]
            piv_rows[m] = (mons, gc)
            for x in mons[1:]:
                if x not in seen:
                    seen.add(x)
                    if x not in piv_rows:
                        todo.append(x)
        cols = sorted(seen, reverse=True)
        colidx = {m: i for i, m in enumerate(cols)}
        ncols = len(cols)
        pivot_row = np.full(ncols, -1, dtype=np.int64)
        a_ptr = [0]
        a_cols: list[int] = []
        a_vals: list[int] = []
        for r, (lm, (mons, coefs)) in enumerate(piv_rows.items()):
            pivot_row[colidx[lm]] = r
            a_cols.extend(colidx[x] for x in mons)
            a_vals.extend(coefs)
            a_ptr.append(len(a_cols))
        b_ptr = [0]
        b_cols: list[int] = []
        b_vals: list[int] = []
        for mons, coefs in b_rows:
            b_cols.extend(colidx[x] for x in mons)
            b_vals.extend(coefs)
            b_ptr.append(len(b_cols))
        out_idx = np.nonzero(pivot_row < 0)[0]
        self.max_matrix = max(self.max_matrix, (len(piv_rows) + len(b_rows), ncols))
        if self.budget_rows is not None and len(piv_rows) + len(b_rows) > self.budget_rows:
            raise BudgetExceeded(f"matrix with {len(piv_rows) + len(b_rows)} rows exceeds budget")
        if not b_rows:
            return [], np.zeros((0, 0), dtype=np.int64)
        dense = kernels.reduce_rows(
            np.array(b_ptr), np.array(b_cols, dtype=np.int64), np.array(b_vals, dtype=np.int64),
            np.array(a_ptr), np.array(a_cols, dtype=np.int64), np.array(a_vals, dtype=np.int64),
            pivot_row, out_idx, ncols, self.p,
        )
        return [cols[i] for i in out_idx], dense

    def _add(self, row, sugar):
        self.G.append(row)
        self.pairs.add(row[0][0], sugar)
        if row[0][0] & self.ctx.emask == 0:
            self.unit = True

    def step(self, batch, inputs):
        """One F4 round over the selected pairs and pending input rows."""
        piv = {}
        B = []
        G = self.G
        for s, l, i, j in batch:
            for g in (i, j):
                gm, gc = G[g]
                t = l - gm[0]
                row = ([x + t for x in gm], gc)
                if l not in piv:
                    piv[l] = row
                else:
                    B.append(row)
        B.extend(inputs)
        cols, dense = self._reduce(piv, B)
        if dense.shape[0] == 0:
            return []
        R, r, pivs = kernels.rref(dense, self.p)
        new = []
        for k in range(r):
            nz = np.nonzero(R[k])[0]
            new.append(([cols[c] for c in nz], [int(R[k, c]) for c in nz]))
        return new

    def run(self, rows, sugars):
        pending = sorted(zip(sugars, range(len(rows))), key=lambda t: t[0])
        pending_rows = {i: _monic(rows[i], self.p) for i in range(len(rows))}
        while True:
            if self.unit:
                return
            caps = self.max_degree
            batch = self.pairs.pop_min(caps)
            s_pairs = batch[0][0] if batch else None
            s_in = pending[0][0] if pending else None
            if s_pairs is None and s_in is None:
                return
            if caps is not None and s_pairs is None and s_in is not None and s_in > caps:
                return
            s = min(x for x in (s_pairs, s_in) if x is not None)
            if s_pairs is not None and s_pairs > s:
                # put the pairs back, handle inputs first
                self.pairs.pairs.extend(batch)
                batch = []
            inputs = []
            while pending and pending[0][0] == s:
                _, i = pending.pop(0)
                inputs.append(pending_rows[i])
            self.steps += 1
            new = self.step(batch, inputs)
            for row in sorted(new, key=lambda r: r[0][0]):
                self._add(row, s)
                if self.unit:
                    return

    def reduced_basis(self):
        """Minimal, tail-reduced basis from the active elements."""
        if self.unit:
            return [([0], [1])]
        act = sorted(self.pairs.active, key=lambda g: self.G[g][0][0])
        ctx = self.ctx
        minimal = []
        for g in act:
            lm = self.G[g][0][0]
            if not any(ctx.divides(self.G[h][0][0], lm) for h in minimal):
                minimal.append(g)
        heads = [self.G[g] for g in minimal]
        tails = [(m[1:], c[1:]) for m, c in heads]
        nonempty = [i for i, t in enumerate(tails) if t[0]]
        cols, dense = self._reduce({}, [tails[i] for i in nonempty]) if nonempty else ([], None)
        out = []
        red = {i: k for k, i in enumerate(nonempty)}
        for i, (m, c) in enumerate(heads):
            mons, coefs = [m[0]], [1]
            if i in red:
                row = dense[red[i]]
                nz = np.nonzero(row)[0]
                mons.extend(cols[t] for t in nz)
                coefs.extend(int(row[t]) for t in nz)
            out.append((mons, coefs))
        return out

    def normal_forms(self, rows):
        cols, dense = self._reduce({}, rows)
        out = []
        for k in range(len(rows)):
            nz = np.nonzero(dense[k])[0]
            out.append(([cols[t] for t in nz], [int(dense[k, t]) for t in nz]))
        return out


# ---------------------------------------------------------------------------
# classic Buchberger over any field


class _Classic:
    def __init__(self, ctx: MonoCtx, domain: Domain, max_degree=None):
        self.ctx = ctx
        self.D = domain
        self.G: list[dict] = []
        self.lm: list[int] = []
        self.pairs = _Pairs(ctx)
        self.max_degree = max_degree
        self.unit = False

    def reduce(self, f: dict, full=True, exclude: int | None = None) -> dict:
        D, ctx = self.D, self.ctx
        f = dict(f)
        r: dict = {}
        active = [g for g in self.pairs.active if g != exclude]
        while f:
            m = max(f)
            c = f.pop(m)
            for g in active:
                if ctx.divides(self.lm[g], m):
                    t = m - self.lm[g]
                    q = D.div(c, self.G[g][self.lm[g]])
                    for gm, gc in self.G[g].items():
                        if gm == self.lm[g]:
                            continue
                        k = gm + t
                        v = D.sub(f.get(k, D.zero), D.mul(q, gc))
                        if v:
                            f[k] = v
                        else:
                            f.pop(k, None)
                    break
            else:
                r[m] = c
                if not full:
                    r.update(f)
                    return r
        return r

    def _monic(self, f):
        D = self.D
        inv = D.inv(f[max(f)])
        return {m: D.mul(c, inv) for m, c in f.items()}

    def spoly(self, i, j, l):
        D = self.D
        out: dict = {}
        for g, sign in ((i, 1), (j, -1)):
            t = l - self.lm[g]
            lc = self.G[g][self.lm[g]]
            inv = D.inv(lc)
            for m, c in self.G[g].items():
                v = D.mul(c, inv)
                if sign < 0:
                    v = D.neg(v)
                k = m + t
                s = D.add(out.get(k, D.zero), v)
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out

    def add(self, f, sugar):
        f = self._monic(f)
        self.G.append(f)
        m = max(f)
        self.lm.append(m)
        self.pairs.add(m, sugar)
        if m & self.ctx.emask == 0:
            self.unit = True

    def run(self, polys, sugars):
        for f, s in sorted(zip(polys, sugars), key=lambda t: (t[1], max(t[0]))):
            r = self.reduce(f)
            if r:
                self.add(r, s)
                if self.unit:
                    return
        while self.pairs.pairs:
            batch = self.pairs.pop_min(self.max_degree)
            if not batch:
                return
            # process one pair at a time; return the rest
            batch.sort(key=lambda q: q[1])
            (s, l, i, j), rest = batch[0], batch[1:]
            self.pairs.pairs.extend(rest)
            r = self.reduce(self.spoly(i, j, l))
            if r:
                self.add(r, s)
                if self.unit:
                    return

    def reduced_basis(self):
        if self.unit:
            return [{0: self.D.one}]
        act = sorted(self.pairs.active, key=lambda g: self.lm[g])
        out = []
        for g in act:
            f = self.G[g]
            lm = self.lm[g]
            tail = {m: c for m, c in f.items() if m != lm}
            r = self.reduce(tail, exclude=g) if tail else {}
            r[lm] = f[lm]
            out.append(self._monic(r))
        return out


# ---------------------------------------------------------------------------
# public API


def _prepare(generators, order, vars):
    gens = [g for g in generators if isinstance(g, SparsePoly)]
    if not gens:
        raise PolyError("no generators")
    order = parse_order(order) if order is not None else gens[0].order
    gens = common_ring(gens, vars=vars, order=order)
    domain = gens[0].domain
    for g in gens:
        if g.domain != domain:
            raise PolyError("generators over different domains")
    return gens, order, gens[0].vars, domain


def _from_packed(polys, ctx, vars, domain, order):
    out = []
    for f in polys:
        if isinstance(f, tuple):
            terms = {ctx.decode(m): c for m, c in zip(*f)}
        else:
            terms = {ctx.decode(m): c for m, c in f.items()}
        out.append(SparsePoly(vars, terms, domain, order, _clean=True))
    return out


def buchberger(generators: Sequence[SparsePoly], order=None, vars=None, method: str = "auto",
               max_degree: int | None = None, budget_rows: int | None = None) -> GroebnerBasis:
    """Reduced Groebner basis.

    ``method`` is ``f4`` (GF(p) only), ``classic`` or ``auto`` (F4 when the
    domain is a prime field).  With ``max_degree`` only pairs of degree up to
    the cap are processed, giving a truncated basis that is exact in degrees
    <= max_degree for homogeneous input.
    """
    gens, order, vars, domain = _prepare(generators, order, vars)
    gens = [g for g in gens if g]
    ctx = MonoCtx(len(vars), order)
    use_f4 = method == "f4" or (method == "auto" and isinstance(domain, ModDomain) and domain.is_field)
    if not gens:
        return GroebnerBasis([], order, vars, domain)
    sugars = [g.total_degree() for g in gens]
    if use_f4:
        if not (isinstance(domain, ModDomain) and domain.is_field):
            raise GroebnerError("F4 engine needs a prime field")
        p = domain.p
        eng = _F4(ctx, p, max_degree, budget_rows)
        eng.run(_to_rows(gens, ctx, p), sugars)
        basis = _from_packed(eng.reduced_basis(), ctx, vars, domain, order)
        stats = {"engine": "f4", "steps": eng.steps, "max_matrix": eng.max_matrix}
    else:
        if not domain.is_field:
            raise GroebnerError("coefficients must form a field")
        eng = _Classic(ctx, domain, max_degree)
        polys = [{ctx.encode(e): c for e, c in g.terms.items()} for g in gens]
        eng.run(polys, sugars)
        basis = _from_packed(eng.reduced_basis(), ctx, vars, domain, order)
        stats = {"engine": "classic"}
    truncated = None
    if max_degree is not None and not eng.unit:
        if any(ctx.degree(q[1]) > max_degree for q in eng.pairs.pairs) or any(s > max_degree for s in sugars):
            truncated = max_degree
    return GroebnerBasis(basis, order, vars, domain, truncated, stats)


def normal_form(f: SparsePoly, basis: GroebnerBasis) -> SparsePoly:
    return normal_forms([f], basis)[0]


def normal_forms(fs: Sequence[SparsePoly], basis: GroebnerBasis) -> list[SparsePoly]:
    """Remainders of several polynomials modulo a Groebner basis."""
    vars, order, domain = basis.vars, basis.order, basis.domain
    fs = [f.with_vars(vars).with_order(order) for f in fs]
    for f in fs:
        if f.domain != domain:
            raise PolyError(f"{f.domain} polynomial against a {domain} basis")
    ctx = MonoCtx(len(vars), order)
    if not basis.generators:
        return list(fs)
    if basis.is_unit():
        return [SparsePoly.zero(vars, domain, order) for _ in fs]
    if isinstance(domain, ModDomain) and domain.is_field:
        p = domain.p
        eng = _F4(ctx, p)
        for row in _to_rows(basis.generators, ctx, p):
            eng.G.append(_monic(row, p))
            eng.pairs.lms.append(row[0][0])
            eng.pairs.active.append(len(eng.G) - 1)
        rows = []
        idx = []
        for k, f in enumerate(fs):
            r = _to_rows([f], ctx, p)
            if r:
                rows.append(r[0])
                idx.append(k)
        out = [SparsePoly.zero(vars, domain, order) for _ in fs]
        if rows:
            for k, r in zip(idx, eng.normal_forms(rows)):
                out[k] = _from_packed([r], ctx, vars, domain, order)[0]
        return out
    eng = _Classic(ctx, domain)
    for g in basis.generators:
        f = {ctx.encode(e): c for e, c in g.terms.items()}
        eng.G.append(f)
        m = max(f)
        eng.lm.append(m)
        eng.pairs.active.append(len(eng.G) - 1)
    out = []
    for f in fs:
        r = eng.reduce({ctx.encode(e): c for e, c in f.terms.items()})
        out.append(_from_packed([r], ctx, vars, domain, order)[0])
    return out


def verify_basis(basis: GroebnerBasis) -> bool:
    """Check that every S-polynomial reduces to zero (post hoc certificate)."""
    gens = basis.generators
    if basis.is_unit() or len(gens) < 2:
        return True
    ctx = MonoCtx(len(basis.vars), basis.order)
    D = basis.domain
    sp = []
    lms = [ctx.encode(g.LM()) for g in gens]
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if ctx.coprime(lms[i], lms[j]):
                continue
            l = ctx.decode(ctx.lcm(lms[i], lms[j]))
            a = gens[i].mul_term(tuple(x - y for x, y in zip(l, gens[i].LM())), D.inv(gens[i].LC()))
            b = gens[j].mul_term(tuple(x - y for x, y in zip(l, gens[j].LM())), D.inv(gens[j].LC()))
            sp.append(a - b)
    if basis.truncated_at is not None:
        sp = [s for s in sp if s.total_degree() <= basis.truncated_at]
    return all(r.is_zero() for r in normal_forms(sp, basis))


# ---------------------------------------------------------------------------
# Hilbert functions


def _standard_count(lms: list[tuple], nvars: int, n: int) -> int:
    ctx = MonoCtx(nvars, ("lex",))
    packed = [ctx.encode(m) for m in lms]
    count = 0
    for e in all_monomials(nvars, n):
        m = ctx.encode(e)
        if not any(ctx.divides(d, m) for d in packed):
            count += 1
    return count


def hilbert_profile(basis: GroebnerBasis, n_max: int) -> HilbertProfile:
    """Count standard monomials degree by degree and fit the Hilbert polynomial."""
    if not all(g.is_homogeneous() for g in basis.generators):
        raise NotHomogeneous("Hilbert function needs a homogeneous ideal")
    if basis.truncated_at is not None and n_max > basis.truncated_at:
        raise GroebnerError(f"basis truncated at degree {basis.truncated_at}")
    n = len(basis.vars)
    lms = [m for m in basis.leading_monomials()]
    vals = [(d, _standard_count(lms, n, d)) for d in range(n_max + 1)]
    poly, start = fit_hilbert_polynomial(vals)
    return HilbertProfile(vals, poly, start)


def fit_hilbert_polynomial(values: Sequence[tuple[int, int]]):
    """Lowest-degree polynomial agreeing with a tail of >= deg+2 values.

    Returns (coefficients constant-first, first degree from which it agrees)
    or (None, None) when the data are too short.
    """
    xs = [n for n, _ in values]
    ys = [h for _, h in values]
    N = len(xs)
    for deg in range(0, N - 1):
        # fit through the last deg+1 points, demand one more agreement
        pts = list(zip(xs[-(deg + 1):], ys[-(deg + 1):]))
        coeffs = _lagrange_coeffs(pts)
        ev = lambda t: sum(c * t**i for i, c in enumerate(coeffs))
        k = N - deg - 2
        if k < 0 or ev(xs[k]) != ys[k]:
            continue
        while k > 0 and ev(xs[k - 1]) == ys[k - 1]:
            k -= 1
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return coeffs or [Fraction(0)], xs[k]
    return None, None


def _lagrange_coeffs(pts):
    n = len(pts)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(pts):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(pts):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k in range(n):
            coeffs[k] += yi * basis[k] / denom
    return coeffs


def macaulay_hilbert(generators: Sequence[SparsePoly], n: int, p: int | None = None) -> int:
    """Independent oracle: dim of the degree-n quotient from a Macaulay matrix rank."""
    gens = common_ring(list(generators))
    vars = gens[0].vars
    nv = len(vars)
    dom = gens[0].domain
    if p is None:
        if not isinstance(dom, ModDomain):
            raise GroebnerError("give p for a characteristic-zero ideal")
        p = dom.p
    if not all(g.is_homogeneous() for g in gens):
        raise NotHomogeneous("Macaulay oracle needs homogeneous generators")
    cols = list(all_monomials(nv, n))
    idx = {e: i for i, e in enumerate(cols)}
    rows = []
    for g in gens:
        d = g.total_degree()
        if d > n or not g:
            continue
        for t in all_monomials(nv, n - d):
            row = np.zeros(len(cols), dtype=np.int64)
            for e, c in g.terms.items():
                row[idx[tuple(a + b for a, b in zip(e, t))]] = c % p
            rows.append(row)
    if not rows:
        return len(cols)
    return len(cols) - kernels.rank(np.array(rows), p)


# ---------------------------------------------------------------------------
# emptiness, elimination


def is_empty(basis: GroebnerBasis, mode: str = "affine") -> bool:
    if mode == "affine":
        return basis.is_unit()
    if mode == "projective":
        if basis.is_unit():
            return True
        n = len(basis.vars)
        pure = set()
        for e in basis.leading_monomials():
            nz = [i for i, x in enumerate(e) if x]
            if len(nz) == 1:
                pure.add(nz[0])
        return len(pure) == n
    raise ValueError(f"unknown mode {mode!r}")


def eliminate(basis_or_gens, keep: Iterable[str], method: str = "auto") -> GroebnerBasis:
    """Elimination ideal in the kept variables via a block order."""
    if isinstance(basis_or_gens, GroebnerBasis):
        gens = basis_or_gens.generators
        vars = basis_or_gens.vars
    else:
        gens = common_ring(list(basis_or_gens))
        vars = gens[0].vars
    keep = [v for v in vars if v in set(keep)]
    drop = [v for v in vars if v not in keep]
    if not drop:
        return buchberger(gens, order="grevlex", vars=tuple(vars), method=method)
    order = ("block", len(drop)) if keep else ("grevlex",)
    gb = buchberger(gens, order=order, vars=tuple(drop + keep), method=method)
    kept = [g for g in gb.generators if not any(g.degree_in(v) > 0 for v in drop)]
    kept = [g.with_vars(keep).with_order("grevlex") for g in kept]
    return GroebnerBasis(kept, ("grevlex",), tuple(keep), gb.domain)


def saturate_last(basis: GroebnerBasis) -> GroebnerBasis:
    """I : x_n^infinity from a grevlex basis by stripping powers of the last variable."""
    if basis.order != ("grevlex",):
        raise GroebnerError("saturation by the last variable needs grevlex")
    out = []
    for g in basis.generators:
        k = min(e[-1] for e in g.terms)
        if k:
            g = SparsePoly(g.vars, {e[:-1] + (e[-1] - k,): c for e, c in g.terms.items()}, g.domain, g.order, _clean=True)
        out.append(g)
    return buchberger(out, order="grevlex", vars=basis.vars)


def saturate_irrelevant(generators: Sequence[SparsePoly], seed: int = 0) -> GroebnerBasis:
    """Saturation by the irrelevant ideal of a homogeneous ideal over GF(p).

    After a seeded random linear change of coordinates the last variable is
    generic, and I : m^infinity = I : x_n^infinity.  The basis is returned in
    the new coordinates (Y0, Y1, ...), which is all a Hilbert function needs.
    """
    gens = common_ring(list(generators))
    D = gens[0].domain
    if not (isinstance(D, ModDomain) and D.is_field):
        raise GroebnerError("saturation is implemented over prime fields")
    if not all(g.is_homogeneous() for g in gens):
        raise NotHomogeneous("saturation needs homogeneous generators")
    vars = gens[0].vars
    Y = tuple(f"Y{i}" for i in range(len(vars)))
    rng = random.Random(seed)
    A = _random_invertible(len(vars), D, rng)
    lin = {}
    for i, v in enumerate(vars):
        f = SparsePoly.zero(Y, D)
        for j, y in enumerate(Y):
            if A[i][j]:
                f = f + SparsePoly.var(y, Y, D).scale(A[i][j])
        lin[v] = f
    moved = [g.subs(lin, vars=Y) for g in gens]
    return saturate_last(buchberger(moved, order="grevlex", vars=Y))


# ---------------------------------------------------------------------------
# random minor combinations


def _random_invertible(n: int, domain: Domain, rng: random.Random):
    while True:
        if isinstance(domain, ModDomain):
            M = [[rng.randrange(domain.modulus) for _ in range(n)] for _ in range(n)]
            if kernels.det(np.array(M), domain.p) % domain.p:
                return M
        else:
            M = [[domain.convert(rng.randint(-9, 9)) for _ in range(n)] for _ in range(n)]
            if _det_scalar(M, domain):
                return M


def _det_scalar(M, D):
    M = [row[:] for row in M]
    n = len(M)
    d = D.one
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return D.zero
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = D.neg(d)
        d = D.mul(d, M[c][c])
        inv = D.inv(M[c][c])
        for i in range(c + 1, n):
            f = D.mul(M[i][c], inv)
            if f:
                M[i] = [D.sub(a, D.mul(f, b)) for a, b in zip(M[i], M[c])]
    return d


def poly_det(M: Sequence[Sequence[SparsePoly]]) -> SparsePoly:
    """Determinant by Laplace expansion with memoized column subsets.

    Expands from the last row upward so that the densest row, if placed
    first, is multiplied in at the cheapest level.
    """
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    memo: dict = {}

    def minor(k, cols):
        # determinant of rows 0..k-1 restricted to cols (a tuple)
        if k == 0:
            return None
        key = cols
        if key in memo:
            return memo[key]
        total = None
        for t, c in enumerate(cols):
            entry = M[k - 1][c]
            if not entry:
                continue
            sub = minor(k - 1, cols[:t] + cols[t + 1:])
            term = entry if sub is None else (entry * sub if sub else None)
            if term is None or not term:
                continue
            if (k - 1 - t) % 2:
                term = -term
            total = term if total is None else total + term
        if total is None:
            total = M[0][0] - M[0][0]
        memo[key] = total
        return total

    return minor(n, tuple(range(n)))


def _poly_det_modp(M: Sequence[Sequence[SparsePoly]], p: int) -> SparsePoly:
    """Laplace expansion over GF(p) on packed-exponent dicts.

    Rows are expanded in order of increasing degree so the largest products
    only occur once, at the top level.
    """
    n = len(M)
    vars = M[0][0].vars
    dom = M[0][0].domain
    nv = len(vars)

    def pack(e):
        x = 0
        for i, a in enumerate(e):
            x |= a << (EBITS * i)
        return x

    def unpack(x):
        mask = (1 << EBITS) - 1
        return tuple((x >> (EBITS * i)) & mask for i in range(nv))

    rows = sorted(range(n), key=lambda i: max(f.total_degree() for f in M[i]))
    P = [[{pack(e): c % p for e, c in M[i][j].terms.items() if c % p} for j in range(n)] for i in rows]
    sign_perm = _perm_sign(rows)
    memo: dict = {}

    def minor(k, cols):
        if k == 1:
            return P[0][cols[0]]
        if cols in memo:
            return memo[cols]
        total: dict = {}
        for t, c in enumerate(cols):
            entry = P[k - 1][c]
            if not entry:
                continue
            sub = minor(k - 1, cols[:t] + cols[t + 1:])
            if not sub:
                continue
            s = -1 if (k - 1 - t) % 2 else 1
            for m1, c1 in entry.items():
                c1 = c1 if s > 0 else p - c1
                for m2, c2 in sub.items():
                    m = m1 + m2
                    total[m] = (total.get(m, 0) + c1 * c2) % p
        total = {m: c for m, c in total.items() if c}
        memo[cols] = total
        return total

    # expand each size-k minor on the first k rows, choosing columns
    if n == 1:
        d = P[0][0]
    else:
        d = minor(n, tuple(range(n)))
    if sign_perm < 0:
        d = {m: (p - c) % p for m, c in d.items()}
    return SparsePoly(vars, {unpack(m): c for m, c in d.items()}, dom, M[0][0].order, _clean=True)


def _perm_sign(perm) -> int:
    perm = list(perm)
    s = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            s = -s
    return s


def random_minor_combination(jac: Sequence[Sequence[SparsePoly]], r: int, seed: int) -> SparsePoly:
    """Leading r x r minor of A*jac*B for seeded random invertible A, B.

    Only the first r rows of A and the first r columns of B enter, so the
    minor is det(A[:r] * jac * B[:, :r]).  When A is r x r this factors as
    det(A) * det(jac * B[:, :r]), which keeps the row degrees of jac.
    """
    m = len(jac)
    n = len(jac[0]) if m else 0
    if r > min(m, n) or r < 1:
        raise RankTooLarge(f"rank {r} does not fit a {m}x{n} matrix")
    D = jac[0][0].domain
    rng = random.Random(seed)
    A = _random_invertible(m, D, rng)
    B = _random_invertible(n, D, rng)
    zero = jac[0][0] - jac[0][0]

    def combo(polys, coefs):
        acc = zero
        for f, c in zip(polys, coefs):
            if c and f:
                acc = acc + f.scale(c)
        return acc

    JB = [[combo(jac[i], [B[k][j] for k in range(n)]) for j in range(r)] for i in range(m)]
    if m == r:
        scale = _det_scalar(A, D) if not isinstance(D, ModDomain) else kernels.det(np.array(A), D.p)
        M = JB
    else:
        scale = D.one
        M = [[combo([JB[k][j] for k in range(m)], A[i]) for j in range(r)] for i in range(r)]
    if isinstance(D, ModDomain) and D.is_field:
        d = _poly_det_modp(M, D.p)
    else:
        d = poly_det(M)
    return d.scale(scale)


def all_minors(jac: Sequence[Sequence[SparsePoly]], r: int) -> list[SparsePoly]:
    """Every r x r minor (used as the exhaustive cross-check)."""
    import itertools

    m = len(jac)
    n = len(jac[0])
    out = []
    for rows in itertools.combinations(range(m), r):
        for cols in itertools.combinations(range(n), r):
            out.append(poly_det([[jac[i][j] for j in cols] for i in rows]))
    return out
