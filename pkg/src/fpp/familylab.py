"""Verification pipeline for the family W of complete intersections in Gr(3, 6).

Smoothness and freeness are decided chart by chart over prime fields.  The
specialized discriminant is computed from the critical points of the first
equation on the threefold cut out by the other six, then localized away
from points with a nontrivial stabilizer in C7 x| C3.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from math import gcd, lcm
from typing import Sequence

import numpy as np

from . import kernels
from .exactnum import BiquadValue, crt_combine, rational_reconstruct, reduce_mod, sqrt_mod
from .grassmann import (CHART_VARS, INDICES, PLUCKER, PParams, TwoParam, c7_action, chart_minors,
                        chart_system, eigen_loci, family_equations, index_doubling, name, plucker_relations,
                        pm_ideals)
from .groebner import buchberger, is_empty, normal_forms, random_minor_combination
from .henselsolve import (PositiveDimensional, ReconstructFailed, _pdiv, _pgcd, _trim, minimal_polynomial,
                          quotient_dimension, roots_mod_p, solve_mod_p, standard_monomials)
from .multipoly import GF, QQ, SparsePoly, apply_action, evaluate_matrix, jacobian, parse_poly
from .verdict import FAIL, INCONCLUSIVE, PASS, PROBABLE, Verdict, combine

__all__ = [
    "Verdict", "DiscriminantResult", "ReconstructFailed", "W_GR", "DEGREE8", "BIVARIATE_ERRATA",
    "degree8_poly", "published_bivariate", "equations_mod_p", "chart_singular_ideal", "check_smooth",
    "check_free", "is_singular_param", "critical_values", "discriminant_specialized",
    "discriminant_symmetry_check", "numerical_invariants", "all_charts", "parallel_map",
    "squarefree_root_count",
]

# parameters of the surface with 42 A2 points; s15 = i*sqrt(15), s7 = i*sqrt(7), s105 = s15*s7 = -sqrt(105)
W_GR = TwoParam(
    p0=BiquadValue(Fraction(-2475, 256), Fraction(-35, 256), Fraction(49, 256), Fraction(-231, 256)),
    p3=BiquadValue(Fraction(-17, 16), Fraction(7, 16), 0, 0),
)

DEGREE8 = (999, -4950, 13739, -23670, 28532, -23670, 13739, -4950, 999)

# (p0 exponent, printed p3 exponent) -> corrected p3 exponent
BIVARIATE_ERRATA = {(5, 14): 13, (5, 15): 14, (4, 16): 15, (4, 17): 16, (3, 18): 17, (2, 19): 18}

PV = ("p0", "p3")


def all_charts() -> list[tuple]:
    return list(INDICES)


def degree8_poly() -> SparsePoly:
    terms = {(i, 0): c for i, c in enumerate(DEGREE8)}
    return SparsePoly(PV, terms, QQ)


def published_bivariate(corrected: bool = True) -> SparsePoly:
    """The degree-20 discriminant as printed, optionally with exponent fixes."""
    text = resources.files("fpp").joinpath("data", "bivariate.txt").read_text()
    body = [l.strip() for l in text.splitlines() if l.strip() and not l.startswith(("#", "vars"))]
    f = parse_poly(" ".join(body), PV, QQ)
    if not corrected:
        return f
    terms = {}
    for (a, b), c in f.terms.items():
        key = (a, BIVARIATE_ERRATA.get((a, b), b))
        if key in terms:
            raise ValueError("exponent correction collides with an existing term")
        terms[key] = c
    return SparsePoly(PV, terms, QQ)


def _roots_for(p: int) -> tuple[int, int] | None:
    r15, r7 = sqrt_mod(-15 % p, p), sqrt_mod(-7 % p, p)
    if r15 is None or r7 is None:
        return None
    return r15, r7


def equations_mod_p(params, p: int, roots=None) -> list[SparsePoly]:
    """Family equations over the parameter field, reduced mod p."""
    eqs = family_equations(params)
    if eqs[0].domain == QQ:
        return [g.reduce(p) for g in eqs]
    roots = roots or _roots_for(p)
    if roots is None:
        raise ValueError(f"-15 and -7 are not both squares mod {p}")
    return [g.reduce(p, roots) for g in eqs]


# ---------------------------------------------------------------------------
# smoothness


def chart_singular_ideal(eqs_p: Sequence[SparsePoly], chart, seeds: Sequence[int]):
    """Chart equations plus random combinations of the 7x7 Jacobian minors."""
    s = chart_system(eqs_p, chart)
    J = jacobian(s, CHART_VARS)
    return s + [random_minor_combination(J, 7, sd) for sd in seeds], J


def _chart_nonempty(eqs_p, chart, seeds):
    gens, J = chart_singular_ideal(eqs_p, chart, seeds)
    gb = buchberger(gens)
    return (not gb.is_unit()), gb, J


def _witness(gb, J, chart, p):
    """An F_p point of rank below 7 if there is one, else a description of the ideal."""
    F = GF(p)
    out = {"chart": "".join(map(str, chart)), "prime": p}
    try:
        pts = _points(gb, p)
    except PositiveDimensional:
        pts = None
    if pts:
        for pt in pts:
            M = np.array([[int(x) % p for x in row] for row in evaluate_matrix(J, pt)], dtype=np.int64)
            r = kernels.rank(M, p)
            if r < 7:
                out["point"] = [int(pt[v]) for v in CHART_VARS]
                out["jacobian_rank"] = r
                return out
    out["points_over_closure"] = quotient_dimension(gb)
    mp = minimal_polynomial(SparsePoly.var("u1", gb.vars, F), gb)
    out["minpoly_u1_degree"] = len(mp) - 1
    return out


def _points(gb, p):
    from .henselsolve import PolySystem

    return solve_mod_p(PolySystem(list(gb.generators), tuple(gb.vars)), p)


def _smooth_item(params, p, chart, seeds, retries, seed, roots):
    """Check one (prime, chart) work item; returns (used seeds, witness or None)."""
    eqs_p = equations_mod_p(params, p, roots)
    base = [seed * 1000 + k for k in range(seeds)]
    used = list(base)
    nonempty, gb, J = _chart_nonempty(eqs_p, chart, base)
    attempt = 0
    while nonempty and attempt < retries:
        attempt += 1
        extra = [seed * 1000 + 100 * attempt + k for k in range(seeds)]
        used += extra
        gb = buchberger(list(gb.generators) + chart_singular_ideal(eqs_p, chart, extra)[0][7:])
        nonempty = not gb.is_unit()
    return used, (_witness(gb, J, chart, p) if nonempty else None)


def parallel_map(fn, items, threads: int = 1):
    """Ordered map; a process pool when threads > 1, so results never depend on scheduling."""
    if threads <= 1 or len(items) <= 1:
        for it in items:
            yield fn(*it)
        return
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=threads) as pool:
        futs = [pool.submit(fn, *it) for it in items]
        for f in futs:
            yield f.result()


def check_smooth(params, primes: Sequence[int] = (32003, 32009), seeds: int = 3, charts=None,
                 retries: int = 1, seed: int = 0, roots=None, threads: int = 1) -> Verdict:
    """Probable-pass when every chart's singular ideal is empty mod every prime.

    A nonempty ideal is retried with fresh minor combinations; a fail needs
    the ideal to stay nonempty after adding the second set as well.  The
    first failing (prime, chart) in order supplies the witness.
    """
    charts = list(charts) if charts is not None else all_charts()
    items = [(params, p, c, seeds, retries, seed, roots) for p in primes for c in charts]
    details, used = [], set()
    done = {p: 0 for p in primes}
    for (_, p, chart, *_rest), (sd, w) in zip(items, parallel_map(_smooth_item, items, threads)):
        used.update(sd)
        if w is not None:
            details.append(f"chart {w['chart']} mod {p}: singular ideal is nonempty")
            return Verdict(FAIL, tuple(primes), tuple(charts), w, details, tuple(sorted(used)))
        done[p] += 1
    details += [f"mod {p}: {n} charts empty" for p, n in done.items()]
    return Verdict(PROBABLE, tuple(primes), tuple(charts), None, details, tuple(sorted(used)))


# ---------------------------------------------------------------------------
# freeness


def _all_ones(params) -> bool:
    if isinstance(params, PParams):
        return all(v == 1 for v in params.p)
    if isinstance(params, TwoParam):
        return params.p0 == 1 and params.p3 == 1
    return False


def check_free(params, primes: Sequence[int] = (32003, 32009), loci: str = "both", roots=None) -> Verdict:
    """Coordinate points off W (exact) and the involution loci empty (mod p).

    ``loci`` picks the displayed linear spaces ('display'), the eigenspaces
    of the involution as computed ('eigen') or both.
    """
    eqs = family_equations(params)
    details = []
    for t in INDICES:
        pt = {v: (1 if v == name(t) else 0) for v in PLUCKER}
        vals = [g.with_vars(PLUCKER).evaluate(pt) if set(g.vars) <= set(PLUCKER) else None for g in eqs]
        if all(v == 0 for v in vals):
            return Verdict(FAIL, (), (), {"coordinate_point": name(t)},
                           [f"coordinate point {name(t)} satisfies all seven equations"])
    details.append("20 coordinate points rejected exactly")
    sets = []
    if loci in ("display", "both"):
        plus, minus = pm_ideals()
        sets += [("displayed P+", plus), ("displayed P-", minus)]
    if loci in ("eigen", "both"):
        u6, u14 = eigen_loci()
        sets += [("U14 eigenlocus", u6), ("U6 eigenlocus", u14)]
    for p in primes:
        F = GF(p)
        eqs_p = [g.with_vars(PLUCKER) for g in equations_mod_p(params, p, roots)]
        rel = [g.reduce(p).with_vars(PLUCKER) for g in plucker_relations()]
        for label, lin in sets:
            lin_p = [g.reduce(p).with_vars(PLUCKER) for g in lin]
            gb = buchberger(eqs_p + rel + lin_p)
            if not is_empty(gb, "projective"):
                status = INCONCLUSIVE if _all_ones(params) else FAIL
                return Verdict(status, tuple(primes), (), {"locus": label, "prime": p},
                               details + [f"{label} meets W mod {p}"])
            details.append(f"{label}: empty mod {p}")
    if _all_ones(params):
        details.append("all parameters equal 1: the sufficient condition for freeness does not apply")
        return Verdict(INCONCLUSIVE, tuple(primes), (), None, details)
    return Verdict(PROBABLE, tuple(primes), (), None, details)


# ---------------------------------------------------------------------------
# singular parameters


def is_singular_param(p0, p3, p: int, charts=None, seeds: int = 3, seed: int = 0) -> bool:
    """True when some chart of W(p0, p3) over F_p-bar carries a singular point.

    A nonempty ideal is confirmed with a second independent set of minor
    combinations before answering True.
    """
    F = GF(p)
    eqs_p = family_equations(TwoParam(int(p0) % p, int(p3) % p), F)
    for chart in charts if charts is not None else all_charts():
        base = [seed * 1000 + k for k in range(seeds)]
        nonempty, gb, _ = _chart_nonempty(eqs_p, chart, base)
        if nonempty:
            extra = chart_singular_ideal(eqs_p, chart, [seed * 1000 + 100 + k for k in range(seeds)])[0][7:]
            if not buchberger(list(gb.generators) + extra).is_unit():
                return True
    return False


# ---------------------------------------------------------------------------
# specialized discriminant


@dataclass
class DiscriminantResult:
    specialized: SparsePoly          # in p0 over QQ, primitive integer coefficients
    excluded: SparsePoly | None      # critical values dropped by the localization
    primes: tuple
    samples: tuple                   # critical points (with multiplicity) per prime
    bivariate: SparsePoly | None = None
    details: list = field(default_factory=list)

    def coefficients(self) -> list[int]:
        return [int(self.specialized.coeff({"p0": i})) for i in range(self.specialized.total_degree() + 1)]

    def is_palindromic(self) -> bool:
        c = self.coefficients()
        return c == c[::-1]


def _lagrange_system(p3, p: int):
    F = GF(p)
    eqs = family_equations(TwoParam(0, p3), F)
    s = chart_system(eqs, (1, 2, 4))
    lam = tuple(f"l{i}" for i in range(1, 7))
    V = CHART_VARS + lam
    f = s[0].with_vars(V)  # equals x_356 on the chart, so p0 = -f on a fibre
    T = [g.with_vars(V) for g in s[1:]]
    L = [SparsePoly.var(v, V, F) for v in lam]
    crit = []
    for u in CHART_VARS:
        acc = f.diff(u)
        for li, g in zip(L, T):
            acc = acc + li * g.diff(u)
        crit.append(acc)
    return f, T + crit, V


def _mult_matrix(g, gb, std, idx):
    nfs = normal_forms([g.mul_term(e, 1) for e in std], gb)
    N = len(std)
    M = np.zeros((N, N), dtype=np.int64)
    for j, h in enumerate(nfs):
        for e, c in h.terms.items():
            M[idx[e], j] = c
    return M


def _krylov_minpoly(M, v, p):
    """Monic annihilating polynomial of v under M (constant term first)."""
    K = [v]
    for d in range(1, len(v) + 1):
        v = kernels.matmul_mod(M, v.reshape(-1, 1), p).ravel()
        K.append(v)
        A = np.array(K)
        if kernels.rank(A.copy(), p) < d + 1:
            ns = kernels.nullspace(A.T.copy(), p)
            inv = pow(int(ns[0][-1]), -1, p)
            return [int(x) * inv % p for x in ns[0]]
    raise AssertionError("Krylov sequence did not close")


def _stabilizer_forms(V, p, rng):
    """One form per order-3 subgroup of C7 x| C3 vanishing on its fixed points in chart 124."""
    F = GF(p)
    mins = {k: g.with_vars(V) for k, g in chart_minors((1, 2, 4), F).items()}
    dbl, c7 = index_doubling(), c7_action(p)
    out = []
    for k in range(7):
        g = dbl
        for _ in range(k):
            g = c7.compose(g)
        img = {J: mins[I].scale(F.convert(sg)) for I, (sg, J) in g.images.items()}
        h = SparsePoly.zero(V, F)
        for J in mins:
            h = h + (mins[J] * img["x_124"] - img[J] * mins["x_124"]).scale(rng.randrange(1, p))
        out.append(h)
    return out


def critical_values(p3, p: int, seed: int = 0) -> dict:
    """Critical values of x_356 on the threefold, as polynomials in p0 mod p.

    Returns {'all', 'free', 'points'}: the minimal polynomial over every
    critical point and over those not fixed by an order-3 element.  The
    prime must be 1 mod 7 so that C7 acts over F_p.
    """
    if (p - 1) % 7:
        raise ValueError("the localization needs p = 1 mod 7")
    p3 = reduce_mod(Fraction(p3), p) if not isinstance(p3, int) else p3 % p
    f, system, V = _lagrange_system(p3, p)
    gb = buchberger(system)
    if quotient_dimension(gb, limit=20000) is None:
        raise PositiveDimensional(f"critical locus is positive-dimensional at p3 = {p3} mod {p}")
    std = standard_monomials(gb.leading_monomials(), len(V))
    idx = {e: i for i, e in enumerate(std)}
    Mf = _mult_matrix(f, gb, std, idx)
    one = np.zeros(len(std), dtype=np.int64)
    one[idx[(0,) * len(V)]] = 1
    full = _krylov_minpoly(Mf, one.copy(), p)
    v = one
    for h in _stabilizer_forms(V, p, random.Random(seed)):
        Mh = _mult_matrix(h, gb, std, idx)
        for _ in range(len(std)):
            v = kernels.matmul_mod(Mh, v.reshape(-1, 1), p).ravel()
    free = _krylov_minpoly(Mf, v, p) if v.any() else [1]
    flip = lambda m: [c * (-1) ** i % p for i, c in enumerate(m)]  # p0 = -f
    return {"all": flip(full), "free": flip(free), "points": len(std)}


def _squarefree_mod(a, p):
    da = _trim([i * c % p for i, c in enumerate(a)][1:])
    g = _pgcd(a, da, p)
    return _pdiv(a, g, p) if len(g) > 1 else a


def _monic(a, p):
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _reconstruct(per_prime: list[list[int]], primes) -> list[Fraction]:
    """CRT, then rational reconstruction of the vector with a common denominator.

    Coefficients of small height fix the denominator D first; every entry
    is then read as n / D with 32 |n| D < m (2 |n| D < m makes it unique).
    """
    degs = {len(c) for c in per_prime}
    if len(degs) != 1:
        raise ReconstructFailed(f"degree differs between primes: {sorted(d - 1 for d in degs)}")
    residues, m = [], 1
    for cs in zip(*per_prime):
        r, m = crt_combine(zip(cs, primes))
        residues.append(r)
    D, pending = 1, list(range(len(residues)))
    while pending:
        progress = False
        for i in list(pending):
            for scale in (D, 1):
                try:
                    x = rational_reconstruct(residues[i] * scale % m, m)
                except Exception:
                    continue
                D = D * x.denominator if scale == D else lcm(D, x.denominator)
                pending.remove(i)
                progress = True
                break
        if not progress:
            break
    out = []
    for r in residues:
        n = r * D % m
        if n > m // 2:
            n -= m
        if 32 * abs(n) * D >= m:  # uniqueness needs 2|n|D < m; keep a margin against chance fits
            raise ReconstructFailed(f"coefficients too large for modulus {m}; use more primes")
        out.append(Fraction(n, D))
    return out


def _primitive(coeffs: list[Fraction]) -> list[int]:
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def discriminant_specialized(p3=1, primes: Sequence[int] = (32089, 32117), seed: int = 0,
                             check_prime: int | None = None) -> DiscriminantResult:
    """Polynomial in p0 whose roots are the singular members with p3 fixed.

    Per prime: critical values of the first equation on the threefold of
    the others, localized away from stabilized points, made squarefree and
    monic.  CRT plus rational reconstruction recovers the rational
    polynomial; ``check_prime`` adds an independent prime to confirm it.
    """
    frees, alls, counts = [], [], []
    for p in primes:
        cv = critical_values(p3, p, seed)
        frees.append(_monic(_squarefree_mod(cv["free"], p), p))
        alls.append(_monic(_squarefree_mod(cv["all"], p), p))
        counts.append(cv["points"])
    spec = _primitive(_reconstruct(frees, primes))
    details = [f"critical points per prime: {counts}"]
    excluded = None
    try:
        full = _primitive(_reconstruct(alls, primes))
        fq = SparsePoly(("p0",), {(i,): c for i, c in enumerate(full) if c}, QQ)
        sq = SparsePoly(("p0",), {(i,): c for i, c in enumerate(spec) if c}, QQ)
        excluded = _poly_quotient(fq, sq)
    except ReconstructFailed as exc:
        details.append(f"full critical polynomial did not reconstruct: {exc}")
    if check_prime is not None:
        cv = critical_values(p3, check_prime, seed)
        got = _monic(_squarefree_mod(cv["free"], check_prime), check_prime)
        want = _monic([c % check_prime for c in spec], check_prime)
        if got != want:
            raise ReconstructFailed(f"check prime {check_prime} disagrees; use more primes")
        details.append(f"confirmed mod {check_prime}")
    poly = SparsePoly(("p0",), {(i,): c for i, c in enumerate(spec) if c}, QQ)
    return DiscriminantResult(poly, excluded, tuple(primes), tuple(counts), None, details)


def _poly_quotient(a: SparsePoly, b: SparsePoly) -> SparsePoly | None:
    """Exact univariate quotient a / b over QQ, None if b does not divide a."""
    A = [a.coeff({"p0": i}) for i in range(a.total_degree() + 1)]
    B = [b.coeff({"p0": i}) for i in range(b.total_degree() + 1)]
    A = [Fraction(x) for x in A]
    B = [Fraction(x) for x in B]
    q = [Fraction(0)] * max(len(A) - len(B) + 1, 1)
    while len(A) >= len(B) and any(A):
        c = A[-1] / B[-1]
        s = len(A) - len(B)
        q[s] = c
        for i, x in enumerate(B):
            A[s + i] -= c * x
        while A and A[-1] == 0:
            A.pop()
    if any(A):
        return None
    return SparsePoly(("p0",), {(i,): c for i, c in enumerate(q) if c}, QQ)


def squarefree_root_count(coeffs: Sequence[int], p: int = 1_000_003) -> int | None:
    """Degree when the polynomial is squarefree mod p (hence over QQ), else None."""
    a = _trim([c % p for c in coeffs])
    if len(a) != len(coeffs):
        raise ValueError("leading coefficient vanishes mod p; pick another prime")
    da = _trim([i * c % p for i, c in enumerate(a)][1:])
    return len(a) - 1 if len(_pgcd(a, da, p)) == 1 else None


# ---------------------------------------------------------------------------
# symmetry (p0, p3) -> (p3^3 / p0, p3)


def discriminant_symmetry_check(f: SparsePoly) -> Verdict:
    """Pass iff p0^deg f(p3^3/p0, p3) equals f times a monomial in p3, up to scalar."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    f = f.with_vars(PV)
    n = f.degree_in("p0")
    img = {}
    for (a, b), c in f.terms.items():
        img[(n - a, b + 3 * a)] = c
    # compare after aligning the p3 shift and the scalar on one term
    (a0, b0), c0 = f.sorted_terms()[0]
    cands = [(k, c) for k, c in img.items() if k[0] == a0]
    for (a1, b1), c1 in cands:
        shift = b1 - b0
        ratio = Fraction(c1) / Fraction(c0)
        ok = len(img) == len(f.terms) and all(
            img.get((a, b + shift)) is not None and Fraction(img[(a, b + shift)]) == ratio * Fraction(c)
            for (a, b), c in f.terms.items())
        if ok:
            return Verdict(PASS, details=[f"image = {ratio} * p3^{shift} * f"])
    bad = next(((a, b) for (a, b), c in f.terms.items()), None)
    return Verdict(FAIL, witness={"term": bad}, details=["no monomial multiple of f matches its image"])


# ---------------------------------------------------------------------------
# numerology


def _gr36_hilbert(k: int) -> Fraction:
    """h^0(Gr(3,6), O(k)): Weyl dimension of the GL6 weight (k,k,k,0,0,0), a polynomial in k."""
    lam = (k, k, k, 0, 0, 0)
    num, den = 1, 1
    for i in range(6):
        for j in range(i + 1, 6):
            num *= lam[i] - lam[j] + j - i
            den *= j - i
    return Fraction(num, den)


def numerical_invariants(mode: str = "W") -> dict:
    """Invariants of W and S = W / C14 from the construction constants.

    W is cut from Gr(3,6) (dimension 9, index 6) by 7 hyperplanes, so
    K_W = O(1).  The degree of the Grassmannian and chi(O_W) come from its
    Hilbert polynomial through the Koszul complex of the seven hyperplanes.
    """
    from math import comb, factorial

    dim_gr, index, hyperplanes, group = 9, 6, 7, 14
    if dim_gr - hyperplanes != 2:
        raise AssertionError("not a surface")
    # leading coefficient of the Hilbert polynomial times 9! is the degree
    vals = [_gr36_hilbert(k) for k in range(dim_gr + 1)]
    diffs = vals
    for _ in range(dim_gr):
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    degree = int(diffs[0])
    k_w = hyperplanes - index  # K_W = O(k_w)
    K2_W = k_w ** 2 * degree
    chi_W = int(sum((-1) ** j * comb(hyperplanes, j) * _gr36_hilbert(-j) for j in range(hyperplanes + 1)))
    e_W = 12 * chi_W - K2_W
    if mode.upper() == "W":
        return {"K2": K2_W, "chi": chi_W, "e": e_W, "degree_gr": degree}
    if mode.upper() != "S":
        raise ValueError("mode is W or S")
    q = [Fraction(x, group) for x in (K2_W, chi_W, e_W)]
    if any(x.denominator != 1 for x in q):
        raise AssertionError("invariants are not divisible by the group order")
    K2_S, chi_S, e_S = (int(x) for x in q)
    # p_g = q = 0, so b1 = 0 and h^{1,1} = b2 = e - 2
    h11 = e_S - 2
    return {"K2": K2_S, "chi": chi_S, "e": e_S, "h11": h11, "moduli": 10 * chi_S - 2 * K2_S}
