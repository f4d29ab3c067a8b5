"""Algebra of a cyclic triple cover z^3 = sigma(f)/f over a quotient ring.

Elements are written g0 + g1*z + g2*z^2.  Coefficients are fractions whose
denominators are products of a fixed sigma-stable list of atoms
(f, sigma f, sigma^2 f, d, sigma d, sigma^2 d); numerators are kept in normal
form against a background Groebner basis (or left alone for the zero ideal).
Equality is tested by cross-multiplying, which is sound as long as the atoms
are not zero divisors modulo the background.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .exactnum import rational_reconstruct, sqrt_mod
from .groebner import GroebnerBasis, buchberger, normal_form, poly_det
from .henselsolve import PolySystem, PositiveDimensional, solve_mod_p
from .multipoly import GF, ModDomain, SparsePoly, VarAction, apply_action, parse_poly
from .verdict import FAIL, PASS, Verdict

__all__ = [
    "CoverError", "IncompatibleRelation", "KeyEquationFails", "ActionTableInconsistent",
    "BudgetExhausted", "key_equation_residual", "CoverRing", "CoverElement", "ActionPair",
    "cover_multiply", "verify_lift_consistency", "RepBasis", "PAPER_COVERING", "PAPER_LIFT",
    "eigenspace_bookkeeping", "paper_rep_basis", "s3_times_c3_basis", "orbit_basis",
    "Relation", "decomposable_relation_search", "toy_corpus", "cyclic_sigma",
    "C3XC3_RELATIONS", "S3XC3_RELATIONS", "PAPER_SEEDS",
]


class CoverError(Exception):
    pass


class IncompatibleRelation(CoverError, ValueError):
    pass


class KeyEquationFails(CoverError):
    def __init__(self, residual):
        super().__init__(f"key equation residual is nonzero: {residual}")
        self.residual = residual


class ActionTableInconsistent(CoverError, ValueError):
    pass


class BudgetExhausted(CoverError):
    pass


def _nf(f: SparsePoly, background: GroebnerBasis | None) -> SparsePoly:
    if background is None or not background.generators:
        return f
    return normal_form(f.with_vars(background.vars), background)


def _sigma(f: SparsePoly, sigma: VarAction) -> SparsePoly:
    return apply_action(f, sigma, fix_missing=True).with_vars(f.vars)


def key_equation_residual(f: SparsePoly, d: SparsePoly, sigma: VarAction,
                          background: GroebnerBasis | None = None) -> SparsePoly:
    """Normal form of f * sigma(f) * sigma^2(f) - d^3."""
    vars = background.vars if background is not None else f.vars
    f, d = f.with_vars(vars), d.with_vars(vars)
    s1 = _sigma(f, sigma)
    s2 = _sigma(s1, sigma)
    return _nf(f * s1 * s2 - d ** 3, background)


# ---------------------------------------------------------------------------
# the ring Z = R[z] / (f z^3 - sigma f)


@dataclass
class CoverRing:
    """Relation datum plus background shared by a family of cover elements."""
    f: SparsePoly
    d: SparsePoly
    sigma: VarAction
    background: GroebnerBasis | None = None
    atoms: list = field(init=False)

    def __post_init__(self):
        vars = self.background.vars if self.background is not None else self.f.vars
        self.f = self.f.with_vars(vars)
        self.d = self.d.with_vars(vars)
        sf = _sigma(self.f, self.sigma)
        ssf = _sigma(sf, self.sigma)
        sd = _sigma(self.d, self.sigma)
        ssd = _sigma(sd, self.sigma)
        # atom order: f, sf, ssf, d, sd, ssd; sigma rotates each triple
        self.atoms = [self.f, sf, ssf, self.d, sd, ssd]

    @property
    def vars(self):
        return self.f.vars

    @property
    def domain(self):
        return self.f.domain

    def key(self):
        return (id(self.sigma), str(self.f), str(self.d), id(self.background))

    def poly(self, g) -> SparsePoly:
        if isinstance(g, SparsePoly):
            return g.with_vars(self.vars)
        if isinstance(g, str):
            return parse_poly(g, self.vars, self.domain)
        return SparsePoly.constant(g, self.vars, self.domain)

    def nf(self, g: SparsePoly) -> SparsePoly:
        return _nf(g, self.background)

    def atom_power(self, exps) -> SparsePoly:
        out = SparsePoly.constant(1, self.vars, self.domain)
        for a, k in zip(self.atoms, exps):
            if k:
                out = out * a ** k
        return out

    def element(self, g0=0, g1=0, g2=0, dens=None) -> "CoverElement":
        comps = [self.nf(self.poly(g)) for g in (g0, g1, g2)]
        dens = dens or [(0,) * 6] * 3
        return CoverElement(self, [(c, tuple(e)) for c, e in zip(comps, dens)])

    def one(self):
        return self.element(1)

    def z(self):
        return self.element(0, 1)

    def ratio(self):
        """sigma(f)/f as a fraction (numerator, atom exponents)."""
        return self.atoms[1], (1, 0, 0, 0, 0, 0)

    def cube_root_of_unity(self):
        D = self.domain
        if not isinstance(D, ModDomain) or D.k != 1 or (D.p - 1) % 3:
            raise ValueError("the covering action needs a field containing a primitive cube root of unity")
        p = D.p
        for g in range(2, p):
            w = pow(g, (p - 1) // 3, p)
            if w != 1:
                return w
        raise ValueError("no cube root of unity")


def _frac_add(R: CoverRing, x, y):
    (n1, e1), (n2, e2) = x, y
    if not n1:
        return y
    if not n2:
        return x
    if e1 == e2:
        return R.nf(n1 + n2), e1
    L = tuple(max(a, b) for a, b in zip(e1, e2))
    a1 = R.atom_power([l - a for l, a in zip(L, e1)])
    a2 = R.atom_power([l - b for l, b in zip(L, e2)])
    return R.nf(n1 * a1 + n2 * a2), L


def _frac_mul(R: CoverRing, x, y):
    (n1, e1), (n2, e2) = x, y
    if not n1 or not n2:
        return R.poly(0), (0,) * 6
    return R.nf(n1 * n2), tuple(a + b for a, b in zip(e1, e2))


def _frac_eq(R: CoverRing, x, y) -> bool:
    (n1, e1), (n2, e2) = x, y
    L = tuple(max(a, b) for a, b in zip(e1, e2))
    a1 = R.atom_power([l - a for l, a in zip(L, e1)])
    a2 = R.atom_power([l - b for l, b in zip(L, e2)])
    return R.nf(n1 * a1 - n2 * a2).is_zero()


def _frac_sigma(R: CoverRing, x):
    n, e = x
    # f -> sf -> ssf -> f and d -> sd -> ssd -> d
    e2 = (e[2], e[0], e[1], e[5], e[3], e[4])
    return R.nf(_sigma(n, R.sigma)), e2


@dataclass
class CoverElement:
    ring: CoverRing
    components: list  # three (numerator, atom exponents) pairs

    def __mul__(self, other):
        return cover_multiply(self, other)

    def __add__(self, other):
        _check_same(self, other)
        R = self.ring
        return CoverElement(R, [_frac_add(R, a, b) for a, b in zip(self.components, other.components)])

    def scale(self, c) -> "CoverElement":
        R = self.ring
        c = R.domain.convert(c)
        return CoverElement(R, [(R.nf(n.scale(c)), e) for n, e in self.components])

    def equals(self, other) -> bool:
        _check_same(self, other)
        return all(_frac_eq(self.ring, a, b) for a, b in zip(self.components, other.components))

    def is_zero(self) -> bool:
        return all(n.is_zero() for n, _ in self.components)

    def __str__(self):
        parts = []
        names = ("", "*z", "*z^2")
        for (n, e), nm in zip(self.components, names):
            if n:
                den = " * ".join(f"{a}^{k}" for a, k in zip(("f", "sf", "ssf", "d", "sd", "ssd"), e) if k)
                parts.append(f"({n}){'/(' + den + ')' if den else ''}{nm}")
        return " + ".join(parts) or "0"


def _check_same(x: CoverElement, y: CoverElement):
    if x.ring is not y.ring and x.ring.key() != y.ring.key():
        raise IncompatibleRelation("cover elements use different relation data")


def cover_multiply(x: CoverElement, y: CoverElement) -> CoverElement:
    """Product with z^3 replaced by sigma(f)/f."""
    _check_same(x, y)
    R = x.ring
    zero = (R.poly(0), (0,) * 6)
    low = [zero, zero, zero]
    high = [zero, zero, zero]
    for i, a in enumerate(x.components):
        for j, b in enumerate(y.components):
            if not a[0] or not b[0]:
                continue
            k = i + j
            if k < 3:
                low[k] = _frac_add(R, low[k], _frac_mul(R, a, b))
            else:
                high[k - 3] = _frac_add(R, high[k - 3], _frac_mul(R, a, b))
    r = R.ratio()
    comps = [_frac_add(R, lo, _frac_mul(R, hi, r)) if hi[0] else lo for lo, hi in zip(low, high)]
    return CoverElement(R, comps)


class ActionPair:
    """The covering action z -> w z and the lift z -> d sigma(f)^-1 z."""

    def __init__(self, ring: CoverRing):
        self.ring = ring
        self._w = None

    @property
    def omega(self):
        if self._w is None:
            self._w = self.ring.cube_root_of_unity()
        return self._w

    def covering(self, x: CoverElement) -> CoverElement:
        R = self.ring
        w = self.omega
        comps = [(R.nf(n.scale(R.domain.convert(pow(w, i, R.domain.p)))), e)
                 for i, (n, e) in enumerate(x.components)]
        return CoverElement(R, comps)

    def lift(self, x: CoverElement) -> CoverElement:
        R = self.ring
        step = (R.d, (0, 1, 0, 0, 0, 0))  # d / sigma(f)
        comps = []
        factor = (R.poly(1), (0,) * 6)
        for c in x.components:
            comps.append(_frac_mul(R, _frac_sigma(R, c), factor))
            factor = _frac_mul(R, factor, step)
        return CoverElement(R, comps)

    def power(self, which: str, x: CoverElement, n: int) -> CoverElement:
        act = getattr(self, which)
        for _ in range(n):
            x = act(x)
        return x


def _generators(R: CoverRing):
    gens = [R.z()]
    for v in R.vars:
        gens.append(R.element(SparsePoly.var(v, R.vars, R.domain)))
    return gens


def verify_lift_consistency(f, d, sigma: VarAction, background: GroebnerBasis | None = None,
                            check_covering: bool | None = None) -> Verdict:
    """Check that the lift action respects z^3 = sigma(f)/f.

    Raises KeyEquationFails when f sigma(f) sigma^2(f) - d^3 is nonzero on
    the quotient.  Otherwise checks the relation symbolically, then
    lift^3 = id and (when a cube root of unity is available) covering^3 = id
    and covering o lift = lift o covering on z and the ring variables.
    """
    res = key_equation_residual(f, d, sigma, background)
    if not res.is_zero():
        raise KeyEquationFails(res)
    R = CoverRing(f, d, sigma, background)
    acts = ActionPair(R)
    details = ["key equation residual: 0"]
    # (d / sf)^3 * sf / f  versus  sigma(sf / f) = ssf / sf
    lhs = (R.d ** 3, (1, 2, 0, 0, 0, 0))
    rhs = (R.atoms[2], (0, 1, 0, 0, 0, 0))
    problems = []
    if not _frac_eq(R, lhs, rhs):
        problems.append("lift does not preserve z^3 = sigma(f)/f")
    z = R.z()
    z3 = z * z * z
    lz = acts.lift(z)
    if not (lz * lz * lz).equals(acts.lift(z3)):
        problems.append("lift(z)^3 differs from lift(z^3)")
    for g in _generators(R):
        if not acts.power("lift", g, 3).equals(g):
            problems.append(f"lift^3 moves {g}")
    if check_covering is None:
        try:
            R.cube_root_of_unity()
            check_covering = True
        except ValueError:
            check_covering = False
    if check_covering:
        for g in _generators(R):
            if not acts.power("covering", g, 3).equals(g):
                problems.append(f"covering^3 moves {g}")
            if not acts.covering(acts.lift(g)).equals(acts.lift(acts.covering(g))):
                problems.append(f"covering and lift do not commute on {g}")
        details.append("covering checks: done")
    else:
        details.append("covering checks: skipped (no cube root of unity in the field)")
    details.append(f"relation preserved: {'no' if problems else 'yes'}")
    if problems:
        return Verdict(FAIL, witness=problems[0], details=details + problems)
    return Verdict(PASS, details=details)


# ---------------------------------------------------------------------------
# monomial representations: permutation plus a root-of-unity phase


@dataclass
class RepBasis:
    labels: tuple
    generators: dict  # name -> (perm, phase exponents); g(P_i) = zeta^e_i P_perm[i]
    phase_order: int = 3

    def __post_init__(self):
        n = len(self.labels)
        for name, (perm, ph) in self.generators.items():
            if sorted(perm) != list(range(n)) or len(ph) != n:
                raise ActionTableInconsistent(f"{name} is not a monomial action on {n} elements")

    def _compose(self, g, h):
        """g after h."""
        gp, ge = g
        hp, he = h
        perm = tuple(gp[hp[i]] for i in range(len(hp)))
        ph = tuple((he[i] + ge[hp[i]]) % self.phase_order for i in range(len(hp)))
        return perm, ph

    def identity(self):
        n = len(self.labels)
        return tuple(range(n)), (0,) * n

    def word(self, w: str):
        """Apply letters right to left; an uppercase letter is the inverse."""
        out = self.identity()
        for ch in reversed(w):
            g = self._inverse(self.generators[ch.lower()]) if ch.isupper() else self.generators[ch]
            out = self._compose(out, g)
        return out

    def _inverse(self, g):
        perm, ph = g
        n = len(perm)
        inv = [0] * n
        e = [0] * n
        for i in range(n):
            inv[perm[i]] = i
            e[perm[i]] = -ph[i] % self.phase_order
        return tuple(inv), tuple(e)

    def is_identity(self, g) -> bool:
        return g == self.identity()

    def check_relations(self, relations: Sequence[str]) -> list[str]:
        """Words that should act trivially but do not."""
        return [w for w in relations if not self.is_identity(self.word(w))]

    def order(self, name: str, cap: int = 64) -> int:
        g = self.generators[name]
        cur = g
        for k in range(1, cap + 1):
            if self.is_identity(cur):
                return k
            cur = self._compose(g, cur)
        raise ActionTableInconsistent(f"{name} has order above {cap}")

    def orbits(self, name: str) -> list[tuple]:
        perm = self.generators[name][0]
        seen, out = set(), []
        for i in range(len(perm)):
            if i in seen:
                continue
            orb = [i]
            j = perm[i]
            while j != i:
                orb.append(j)
                j = perm[j]
            seen.update(orb)
            out.append(tuple(self.labels[k] for k in orb))
        return out

    def eigenspaces(self, name: str) -> dict:
        perm, ph = self.generators[name]
        if any(perm[i] != i for i in range(len(perm))):
            raise ActionTableInconsistent(f"{name} is not diagonal in this basis")
        out: dict = {}
        for lab, e in zip(self.labels, ph):
            out.setdefault(e, []).append(lab)
        return out

    def product_phase(self, name: str, labels: Sequence[str]) -> int | None:
        """Phase exponent of a product of basis elements fixed by ``name``."""
        perm, ph = self.generators[name]
        idx = [self.labels.index(l) for l in labels]
        if sorted(perm[i] for i in idx) != sorted(idx):
            return None
        return sum(ph[i] for i in idx) % self.phase_order

    def table(self, name: str) -> list[str]:
        perm, ph = self.generators[name]
        out = []
        for i, lab in enumerate(self.labels):
            ph_txt = "" if ph[i] == 0 else f"zeta{self.phase_order}^{ph[i]}*"
            out.append(f"{lab} -> {ph_txt}{self.labels[perm[i]]}")
        return out


# printed action of C3 x C3 on the basis P0..P9 of the bicanonical system
PAPER_COVERING = (tuple(range(10)), (0, 0, 0, 0, 2, 2, 2, 1, 1, 1))
PAPER_LIFT = ((0, 2, 3, 1, 5, 6, 4, 8, 9, 7), (0,) * 10)
C3XC3_RELATIONS = ("ccc", "lll", "clCL")
S3XC3_RELATIONS = ("aaa", "bb", "baba", "ccc", "acAC", "bcBC")
PAPER_SEEDS = (("P0", 0, 1), ("P1", 0, 3), ("P4", 2, 3), ("P7", 1, 3))


def eigenspace_bookkeeping(seeds=PAPER_SEEDS, lift_order: int = 3,
                           expected_dims: dict | None = None) -> RepBasis:
    """Basis built from seeds by applying the lift.

    Each seed is (label, covering phase exponent, lift-orbit size).  The lift
    commutes with the covering action, so every orbit stays inside one
    covering eigenspace.
    """
    labels, perm, cov = [], [], []
    for lab, phase, size in seeds:
        if lift_order % size:
            raise ActionTableInconsistent(f"orbit size {size} does not divide {lift_order}")
        start = len(labels)
        stem, num = _split_label(lab)
        for k in range(size):
            labels.append(f"{stem}{num + k}" if num is not None else (lab if k == 0 else f"{lab}'{k}"))
            perm.append(start + (k + 1) % size)
            cov.append(phase % 3)
    if len(set(labels)) != len(labels):
        raise ActionTableInconsistent("seed orbits overlap")
    basis = RepBasis(tuple(labels), {"c": (tuple(range(len(labels))), tuple(cov)),
                                     "l": (tuple(perm), (0,) * len(labels))})
    bad = basis.check_relations(C3XC3_RELATIONS)
    if bad:
        raise ActionTableInconsistent(f"relations fail: {bad}")
    if expected_dims is not None:
        dims = {e: len(v) for e, v in basis.eigenspaces("c").items()}
        if dims != expected_dims:
            raise ActionTableInconsistent(f"eigenspace dimensions {dims} differ from {expected_dims}")
    return basis


def _split_label(lab: str):
    i = len(lab)
    while i > 0 and lab[i - 1].isdigit():
        i -= 1
    if i == len(lab):
        return lab, None
    return lab[:i], int(lab[i:])


def paper_rep_basis() -> RepBasis:
    labels = tuple(f"P{i}" for i in range(10))
    return RepBasis(labels, {"c": PAPER_COVERING, "l": PAPER_LIFT})




def s3_times_c3_basis() -> RepBasis:
    """V = V1 + V2 + V2' with a = (1,2,3), b = (1,2) and c the extra C3.

    Phases are powers of a primitive sixth root zeta: w = zeta^2, -1 = zeta^3.
    """
    labels = ("r1", "r2", "r1'", "r2'", "V1")
    a = ((0, 1, 2, 3, 4), (2, 4, 2, 4, 0))
    b = ((1, 0, 3, 2, 4), (0, 0, 0, 0, 3))
    c = ((0, 1, 2, 3, 4), (2, 2, 4, 4, 0))
    return RepBasis(labels, {"a": a, "b": b, "c": c}, phase_order=6)


def orbit_basis(seeds: Sequence[CoverElement], acts: ActionPair) -> tuple[list, RepBasis]:
    """Concrete version of eigenspace_bookkeeping on cover elements."""
    R = acts.ring
    w = acts.omega
    elems, seed_specs = [], []
    for k, x in enumerate(seeds):
        cx = acts.covering(x)
        phase = None
        for e in range(3):
            if cx.equals(x.scale(pow(w, e, R.domain.p))):
                phase = e
                break
        if phase is None:
            raise ActionTableInconsistent(f"seed {k} is not a covering eigenvector")
        orb = [x]
        cur = acts.lift(x)
        while not cur.equals(x):
            if len(orb) >= 3:
                raise ActionTableInconsistent(f"lift orbit of seed {k} does not close")
            orb.append(cur)
            cur = acts.lift(cur)
        elems += orb
        seed_specs.append((f"P{len(elems) - len(orb)}", phase, len(orb)))
    return elems, eigenspace_bookkeeping(seed_specs)


# ---------------------------------------------------------------------------
# decomposable relations s1 s2 = s3 s4


@dataclass
class Relation:
    s1: SparsePoly
    s2: SparsePoly
    s3: SparsePoly
    s4: SparsePoly

    def residual(self, background=None) -> SparsePoly:
        return _nf(self.s1 * self.s2 - self.s3 * self.s4, background)

    def key(self, bound: int | None = None) -> tuple:
        """Scale-free rational description, comparable across primes."""
        p = self.s1.domain.p

        def normed(f):
            lc = f.sorted_terms()[0][1]
            inv = pow(lc, -1, p)
            return tuple(sorted((e, rational_reconstruct(c * inv % p, p, bound)) for e, c in f.terms.items()))

        a, b = sorted([normed(self.s1), normed(self.s2)])
        return a, b, normed(self.s3), normed(self.s4)

    def __str__(self):
        return f"({self.s1})*({self.s2}) = ({self.s3})*({self.s4})"


def _coeff_rows(polys, p):
    index: dict = {}
    rows = []
    for g in polys:
        rows.append({index.setdefault(e, len(index)): c % p for e, c in g.terms.items()})
    M = np.zeros((len(polys), max(len(index), 1)), dtype=np.int64)
    for i, r in enumerate(rows):
        for j, c in r.items():
            M[i, j] = c
    return M


def _relation_space(products, p, background, points, sampler, sample_budget, rng):
    if sampler is None and points is None:
        nfs = [_nf(g, background) for g in products]
        M = _coeff_rows(nfs, p)
        return kernels.nullspace(M.T.copy(), p)
    # evaluate at points of the background variety
    vals = []
    pts = list(points or [])
    n = len(products)
    need = n + 10
    while len(pts) < need:
        if sampler is None or len(pts) >= sample_budget:
            raise BudgetExhausted(f"{len(pts)} points for {n} unknowns")
        pts.append(sampler(rng))
    for pt in pts[: max(need, len(points or []))]:
        vals.append([int(g.evaluate(pt)) % p for g in products])
    M = np.array(vals, dtype=np.int64)
    return kernels.nullspace(M, p)


def _minors(M, k):
    n, m = len(M), len(M[0])
    for rows in itertools.combinations(range(n), k):
        for cols in itertools.combinations(range(m), k):
            yield poly_det([[M[i][j] for j in cols] for i in rows])


def _factor_symmetric(A: np.ndarray, p: int):
    """Split x^T A x into two linear forms over F_p, or None."""
    m = A.shape[0]
    r = kernels.rank(A.copy(), p)
    if r == 0 or r > 2:
        return None
    if r == 1:
        j = next(i for i in range(m) if A[i, i] % p)
        c = A[:, j] % p
        return c * pow(int(A[j, j]), -1, p) % p, c
    cols = None
    for i, j in itertools.combinations(range(m), 2):
        if kernels.rank(A[:, [i, j]].copy(), p) == 2:
            cols = (i, j)
            break
    i, j = cols
    C = A[:, [i, j]] % p
    rows = next(rr for rr in itertools.combinations(range(m), 2) if kernels.rank(C[list(rr), :].copy(), p) == 2)
    S = C[list(rows), :]
    det = int(S[0, 0] * S[1, 1] - S[0, 1] * S[1, 0]) % p
    di = pow(det, -1, p)
    Sinv = np.array([[S[1, 1], -S[0, 1]], [-S[1, 0], S[0, 0]]], dtype=np.int64) * di % p
    L = Sinv @ (A[list(rows), :] % p) % p  # alpha, beta as linear forms
    al, be = L[0], L[1]
    a, b, c = int(A[i, i]) % p, int(A[i, j]) % p, int(A[j, j]) % p
    if a:
        disc = (b * b - a * c) % p
        s = sqrt_mod(disc, p)
        if s is None:
            return None
        ia = pow(a, -1, p)
        t1, t2 = (-b + s) * ia % p, (-b - s) * ia % p
        return (al - t1 * be) * a % p, (al - t2 * be) % p
    return be % p, (2 * b * al + c * be) % p


def decomposable_relation_search(even_space: Sequence[SparsePoly], weight_w: Sequence[SparsePoly],
                                 weight_w2: Sequence[SparsePoly], background: GroebnerBasis | None = None,
                                 sample_budget: int = 2000, prime: int = 32003, points=None,
                                 sampler: Callable | None = None, seed: int = 0) -> list[Relation]:
    """Relations s1 s2 = s3 s4 with s1, s2 in even_space, s3 in weight_w2, s4 in weight_w.

    The linear relations among the products are found from normal forms (or
    from values at sample points when a sampler is given).  Inside that
    space the right-hand block must be a rank one matrix and the symmetric
    left-hand block must have rank at most two.
    """
    rng = random.Random(seed)
    F = GF(prime)
    vars = background.vars if background is not None else even_space[0].vars
    red = lambda g: (g.reduce(prime) if g.domain != F else g).with_vars(vars)
    E = [red(g) for g in even_space]
    W = [red(g) for g in weight_w]
    W2 = [red(g) for g in weight_w2]
    m, n1, n2 = len(E), len(W), len(W2)
    pairs = list(itertools.combinations_with_replacement(range(m), 2))
    products = [E[i] * E[j] for i, j in pairs] + [W2[k] * W[l] for k in range(n2) for l in range(n1)]
    ns = _relation_space(products, prime, background, points, sampler, sample_budget, rng)
    r = len(ns)
    if r == 0:
        return []
    tv = tuple(f"t{i}" for i in range(r))

    def blocks(vec_polys):
        A = [[None] * m for _ in range(m)]
        half = pow(2, -1, prime)
        for (i, j), c in zip(pairs, vec_polys[: len(pairs)]):
            if i == j:
                A[i][i] = c
            else:
                A[i][j] = A[j][i] = c.scale(half)
        B = [[vec_polys[len(pairs) + k * n1 + l].scale(-1) for l in range(n1)] for k in range(n2)]
        return A, B

    tpolys = [SparsePoly.var(t, tv, F) for t in tv]
    comb = []
    for col in range(len(products)):
        acc = SparsePoly.zero(tv, F)
        for t, row in zip(tpolys, ns):
            if row[col] % prime:
                acc = acc + t.scale(int(row[col]))
        comb.append(acc)
    A, B = blocks(comb)
    conds = [g for g in _minors(B, 2) if g] if min(n1, n2) >= 2 else []
    if m >= 3:
        conds += [g for g in _minors(A, 3) if g]
    found = []
    for lead in range(r):
        fixed = {t: SparsePoly.constant(0, tv, F) for t in tv[:lead]}
        fixed[tv[lead]] = SparsePoly.constant(1, tv, F)
        free = tv[lead + 1:]
        eqs = [g.subs(fixed, vars=tv) for g in conds]
        eqs = [g for g in eqs if g]
        if any(g.is_constant() for g in eqs):
            continue
        if free:
            try:
                sols = solve_mod_p(PolySystem([g.with_vars(free) for g in eqs] or
                                              [SparsePoly.zero(free, F)], free), prime)
            except PositiveDimensional as exc:
                raise BudgetExhausted(f"the decomposable relations form a positive-dimensional family: {exc}")
        else:
            sols = [{}]
        for s in sols:
            t = [0] * r
            t[lead] = 1
            for k, v in enumerate(free):
                t[lead + 1 + k] = s.get(v, 0) % prime
            found.append(tuple(t))
    out = []
    for t in dict.fromkeys(found):
        vec = np.zeros(len(products), dtype=np.int64)
        for c, row in zip(t, ns):
            vec = (vec + c * np.asarray(row, dtype=np.int64)) % prime
        rel = _split_relation(vec, pairs, m, n1, n2, E, W, W2, prime)
        if rel is not None and rel.residual(background).is_zero():
            out.append(rel)
    return out


def _split_relation(vec, pairs, m, n1, n2, E, W, W2, p):
    half = pow(2, -1, p)
    A = np.zeros((m, m), dtype=np.int64)
    for (i, j), c in zip(pairs, vec[: len(pairs)]):
        if i == j:
            A[i, i] = c
        else:
            A[i, j] = A[j, i] = c * half % p
    B = (-vec[len(pairs):].reshape(n2, n1)) % p
    if not A.any() or not B.any() or kernels.rank(B.copy(), p) != 1:
        return None
    fac = _factor_symmetric(A, p)
    if fac is None:
        return None
    k = next(i for i in range(n2) if B[i].any())
    u = B[:, np.flatnonzero(B[k])[0]].copy()
    v = B[k] * pow(int(u[k]), -1, p) % p
    comb = lambda coeffs, basis: sum((b.scale(int(c)) for c, b in zip(coeffs, basis) if c), SparsePoly.zero(basis[0].vars, basis[0].domain))
    s1, s2, s3, s4 = comb(fac[0], E), comb(fac[1], E), comb(u, W2), comb(v, W)
    # leading coefficient 1 on s1 and s3; s2 and s4 absorb the scalars
    c1, c3 = s1.sorted_terms()[0][1], s3.sorted_terms()[0][1]
    s1, s2 = s1.scale(pow(c1, -1, p)), s2.scale(c1)
    s3, s4 = s3.scale(pow(c3, -1, p)), s4.scale(c3)
    return Relation(s1, s2, s3, s4)


# ---------------------------------------------------------------------------
# toy corpus


def cyclic_sigma(vars=("a", "b", "c")) -> VarAction:
    a, b, c = vars
    return VarAction({a: b, b: c, c: a}, 3, "sigma")


def toy_corpus(p: int = 10009):
    """(name, f, d, background, expect_pass) over a small cyclic ring a, b, c."""
    F = GF(p)
    V = ("a", "b", "c")
    P = lambda s: parse_poly(s, V, F)
    cubic = buchberger([P("a^3 + b^3 + c^3 - 5*a*b*c")], vars=V)
    return [
        ("cube", P("a^3"), P("a*b*c"), None, True),
        ("unit", P("1"), P("1"), None, True),
        ("twisted", P("a^2*b"), P("a*b*c"), None, True),
        ("invariant", P("a + b + c"), P("a + b + c"), None, True),
        ("cube mod cubic", P("a^3 + a*(a^3 + b^3 + c^3 - 5*a*b*c)"), P("a*b*c"), cubic, True),
        ("doubled d", P("a^3"), P("2*a*b*c"), None, False),
        ("linear", P("a"), P("a"), None, False),
    ]
