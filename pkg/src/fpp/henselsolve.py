"""Zero-dimensional systems over Q(s15): solve mod p, lift, reconstruct.

The pipeline is the classical one.  Solutions are found over F_p by
slicing with linear relations and re-checking the number of solutions of the
sliced system, then lifted p-adically one digit at a time (or by Newton
doubling), and finally every coordinate a + b*s15 is rebuilt from the two
conjugate lifts by rational reconstruction and checked exactly.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactnum import (
    NotFound,
    PrimePowerValue,
    QuadValue,
    hensel_sqrt,
    random_fraction,
    reconstruct_quad,
    rational_reconstruct,
    sqrt_mod,
)
from .groebner import buchberger, normal_form
from .multipoly import GF, QQ, QQ15, ModDomain, SparsePoly, Zmod, evaluate_matrix, jacobian


class PositiveDimensional(ValueError):
    pass


class SingularJacobian(ArithmeticError):
    pass


class ReconstructFailed(ArithmeticError):
    pass


class VerificationFailed(ArithmeticError):
    pass


@dataclass
class PolySystem:
    equations: list[SparsePoly]
    variables: tuple[str, ...] = ()
    side_conditions: list[SparsePoly] = field(default_factory=list)

    def __post_init__(self):
        if not self.variables:
            vs = []
            for f in self.equations:
                vs += [v for v in f.vars if v not in vs]
            self.variables = tuple(vs)
        self.variables = tuple(self.variables)
        self.equations = [f.with_vars(self.variables) for f in self.equations]

    @property
    def all_equations(self) -> list[SparsePoly]:
        return self.equations + [f.with_vars(self.variables) for f in self.side_conditions]

    @property
    def domain(self):
        return self.equations[0].domain

    def has_s15(self) -> bool:
        return any(isinstance(c, QuadValue) and c.b for f in self.all_equations for c in f.terms.values())


@dataclass
class LiftedSolution:
    values: dict  # var -> PrimePowerValue
    p: int
    k: int
    root: int | None = None  # image of s15 modulo p^k
    regular: bool = True

    def residues(self) -> dict:
        return {v: x.residue for v, x in self.values.items()}


def _as_system(system) -> PolySystem:
    return system if isinstance(system, PolySystem) else PolySystem(list(system))


def _reduced(system: PolySystem, p: int, root: int | None, k: int = 1) -> list[SparsePoly]:
    out = []
    for f in system.all_equations:
        if isinstance(f.domain, ModDomain):
            out.append(f.reduce(p, k=k))
        else:
            out.append(f.reduce(p, [root] if root is not None else None, k))
    return out


# ---------------------------------------------------------------------------
# univariate roots over F_p


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, b, p):
    a = a[:]
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        s = len(a) - len(b)
        for i, x in enumerate(b):
            a[s + i] = (a[s + i] - c * x) % p
        _trim(a)
    return a


def _pmulmod(a, b, m, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(_trim(out), m, p)


def _ppowmod(base, e, m, p):
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _trim(a[:]), _trim(b[:])
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _pdiv(a, b, p):
    a = a[:]
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        s = len(a) - len(b)
        q[s] = c
        for i, x in enumerate(b):
            a[s + i] = (a[s + i] - c * x) % p
        _trim(a)
    return q


def roots_mod_p(coeffs: Sequence[int], p: int, seed: int = 0) -> list[int]:
    """Distinct roots in F_p of a polynomial given constant-first."""
    f = _trim([c % p for c in coeffs])
    if not f:
        raise ValueError("zero polynomial")
    if len(f) == 1:
        return []
    # split off the roots: g = gcd(f, x^p - x)
    xp = _ppowmod([0, 1], p, f, p)
    xp = xp + [0] * (2 - len(xp)) if len(xp) < 2 else xp
    h = xp[:]
    h[1] = (h[1] - 1) % p
    g = _pgcd(f, _trim(h), p)
    rng = random.Random(seed)
    out = []

    def split(g):
        if len(g) <= 1:
            return
        if len(g) == 2:
            out.append((-g[0]) * pow(g[1], -1, p) % p)
            return
        if p == 2:
            for a in (0, 1):
                if sum(c * pow(a, i, p) for i, c in enumerate(g)) % p == 0:
                    out.append(a)
            return
        while True:
            a = rng.randrange(p)
            w = _ppowmod([a, 1], (p - 1) // 2, g, p)
            w = w + [0] * (1 - len(w)) if not w else w
            w[0] = (w[0] - 1) % p
            d = _pgcd(g, _trim(w), p)
            if 1 < len(d) < len(g):
                split(d)
                split(_pdiv(g, d, p))
                return

    split(g)
    return sorted(out)


# ---------------------------------------------------------------------------
# solving over F_p


def quotient_dimension(gb, limit: int | None = None) -> int | None:
    """Number of standard monomials of an affine Groebner basis, None if infinite."""
    if gb.is_unit():
        return 0
    n = len(gb.vars)
    lms = gb.leading_monomials()
    pure = [False] * n
    for e in lms:
        nz = [i for i, x in enumerate(e) if x]
        if len(nz) == 1:
            pure[nz[0]] = True
    if not all(pure):
        return None
    return len(standard_monomials(lms, n, limit))


def standard_monomials(lms, n: int, limit: int | None = None) -> list[tuple]:
    """Walk the staircase upward from 1; every visited monomial is standard."""
    seen = {(0,) * n}
    todo = [(0,) * n]
    while todo:
        e = todo.pop()
        for i in range(n):
            f = e[:i] + (e[i] + 1,) + e[i + 1:]
            if f in seen:
                continue
            if any(all(a >= b for a, b in zip(f, m)) for m in lms):
                continue
            seen.add(f)
            todo.append(f)
            if limit is not None and len(seen) > limit:
                raise PositiveDimensional("standard monomial count exceeds the limit")
    return sorted(seen)


def minimal_polynomial(f: SparsePoly, gb, max_degree: int | None = None) -> list[int]:
    """Minimal polynomial (constant first, monic) of f in the quotient by gb.

    Powers are reduced one multiplication at a time, so the cost stays with
    the size of the quotient rather than the degree of f^k.
    """
    p = gb.domain.p
    f = f.with_vars(gb.vars)
    dim = quotient_dimension(gb)
    if dim is None:
        raise PositiveDimensional("the ideal is not zero-dimensional")
    cap = dim if max_degree is None else min(dim, max_degree)
    nfs = [normal_form(SparsePoly.constant(1, gb.vars, gb.domain), gb)]
    index: dict = {}
    rows = []

    def vec(g):
        for e in g.terms:
            if e not in index:
                index[e] = len(index)
        v = np.zeros(len(index), dtype=np.int64)
        for e, c in g.terms.items():
            v[index[e]] = c
        return v

    rows.append(vec(nfs[0]))
    for d in range(1, cap + 1):
        nfs.append(normal_form(nfs[-1] * f, gb))
        rows.append(vec(nfs[-1]))
        width = len(index)
        M = np.zeros((d + 1, width), dtype=np.int64)
        for i, r in enumerate(rows):
            M[i, : len(r)] = r
        from . import kernels

        if kernels.rank(M, p) < d + 1:
            ns = kernels.nullspace(M.T.copy(), p)
            v = [int(x) for x in ns[0]]
            inv = pow(v[-1], -1, p)
            return [x * inv % p for x in v]
    raise PositiveDimensional("no minimal polynomial within the degree cap")


def solve_mod_p(system, p: int, root: int | None = None, max_count: int = 10_000) -> list[dict]:
    """All F_p solutions of a zero-dimensional system.

    The count of solutions (with multiplicity) is read off the Groebner
    basis; coordinates are fixed one at a time by adding the linear relation
    x - a for each root a of the minimal polynomial of x and re-checking.
    """
    system = _as_system(system)
    if system.has_s15() and root is None:
        root = sqrt_mod(-15 % p, p)
        if root is None:
            raise ValueError(f"-15 is not a square mod {p}")
    eqs = _reduced(system, p, root)
    F = GF(p)
    vars = system.variables
    return _solve_rec(eqs, vars, F, {}, max_count)


def _solve_rec(eqs, vars, F, fixed, max_count):
    p = F.p
    gb = buchberger(eqs, vars=vars)
    dim = quotient_dimension(gb)
    if dim is None:
        raise PositiveDimensional("solution count does not stabilize (positive-dimensional)")
    if dim == 0:
        return []
    free = [v for v in vars if v not in fixed]
    if not free:
        return [dict(fixed)]
    x = free[0]
    mp = minimal_polynomial(SparsePoly.var(x, vars, F), gb)
    out = []
    for a in roots_mod_p(mp, p):
        slice_ = SparsePoly.var(x, vars, F) - SparsePoly.constant(a, vars, F)
        sub = dict(fixed)
        sub[x] = a
        out += _solve_rec(list(gb.generators) + [slice_], vars, F, sub, max_count)
        if len(out) > max_count:
            raise PositiveDimensional("too many solutions")
    return out


# ---------------------------------------------------------------------------
# lifting


def _solve_mod(A, b, m: int, p: int):
    """Solve A x = b over Z/m (m a power of p) with unit pivots; None if singular."""
    n_rows = len(A)
    n = len(A[0]) if n_rows else 0
    M = [[x % m for x in A[i]] + [b[i] % m] for i in range(n_rows)]
    r = 0
    piv_cols = []
    for c in range(n):
        piv = next((i for i in range(r, n_rows) if M[i][c] % p), None)
        if piv is None:
            return None
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, m)
        M[r] = [x * inv % m for x in M[r]]
        for i in range(n_rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % m for x, y in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    # remaining rows must be consistent
    for i in range(r, n_rows):
        if M[i][n] % m:
            raise SingularJacobian("overdetermined lift is inconsistent")
    return [M[i][n] for i in range(n)]


def _jacobian_at(jac, point, D):
    return [[int(x) for x in row] for row in evaluate_matrix(jac, point)]


def newton_lift(system, sol, target_k: int, method: str = "linear", root: int | None = None) -> LiftedSolution:
    """Lift an F_p solution (or a LiftedSolution) to modulus p^target_k.

    ``method`` is ``linear`` (one digit per step, each step a linear system
    mod p) or ``doubling`` (Newton iteration, precision doubles).  Both give
    the same residues.
    """
    system = _as_system(system)
    if isinstance(sol, LiftedSolution):
        p, k0, vals = sol.p, sol.k, sol.residues()
        root = sol.root if root is None else root
    else:
        raise TypeError("pass a LiftedSolution; use start_solution for F_p points")
    vars = system.variables
    K = target_k
    m = p**K
    rK = None
    if system.has_s15():
        if root is None:
            raise ValueError("a root of -15 is needed")
        rK = hensel_sqrt(-15, p, K, root)
    eqs = _reduced(system, p, rK, K)
    D = Zmod(p, K)
    jac = jacobian(eqs, vars)
    x = [vals[v] % m for v in vars]
    J0 = _jacobian_at(jac, dict(zip(vars, x)), D)
    if _solve_mod(J0, [0] * len(J0), p, p) is None:
        raise SingularJacobian("Jacobian is singular mod p at the solution")
    k = k0
    if method == "linear":
        while k < K:
            pt = dict(zip(vars, x))
            F = [f.evaluate(pt) for f in eqs]
            pk = p**k
            if any(v % pk for v in F):
                raise ArithmeticError("input is not a solution mod p^k")
            rhs = [(-(v // pk)) % p for v in F]
            J = _jacobian_at(jac, pt, D)
            delta = _solve_mod(J, rhs, p, p)
            x = [(xi + pk * di) % m for xi, di in zip(x, delta)]
            k += 1
    elif method == "doubling":
        while k < K:
            k2 = min(2 * k, K)
            mk = p**k2
            pt = dict(zip(vars, x))
            F = [f.evaluate(pt) % mk for f in eqs]
            J = _jacobian_at(jac, pt, D)
            delta = _solve_mod(J, [-v for v in F], mk, p)
            x = [(xi + di) % mk for xi, di in zip(x, delta)]
            k = k2
    else:
        raise ValueError(f"unknown method {method!r}")
    values = {v: PrimePowerValue(xi % m, p, K) for v, xi in zip(vars, x)}
    return LiftedSolution(values, p, K, rK, True)


def start_solution(values: dict, p: int, root: int | None = None) -> LiftedSolution:
    return LiftedSolution({v: PrimePowerValue(int(a) % p, p, 1) for v, a in values.items()}, p, 1, root)


def default_k(p: int, bound: int) -> int:
    """Smallest k with 2*bound^2 < p^k (rational reconstruction is then unique)."""
    k = 1
    while p**k <= 2 * bound * bound:
        k += 1
    return k


# ---------------------------------------------------------------------------
# reconstruction


def verify_exact(system, values: dict):
    """First equation that does not vanish exactly, or None."""
    system = _as_system(system)
    for i, f in enumerate(system.all_equations):
        D = QQ15 if system.has_s15() or any(isinstance(v, QuadValue) for v in values.values()) else f.domain
        g = f if f.domain == D else f.map_coeffs(lambda c: c, D)
        r = g.evaluate(values)
        if r:
            return i, r
    return None


def reconstruct_and_verify(system, lifted, bound: int | None = None) -> dict:
    """Exact solution from lifted residues, verified by substitution.

    ``lifted`` is a LiftedSolution (rational systems) or a pair of lifts
    under s15 -> r and s15 -> -r.
    """
    system = _as_system(system)
    if isinstance(lifted, LiftedSolution):
        pair = None
        m = lifted.p**lifted.k
    else:
        pair = tuple(lifted)
        m = pair[0].p**pair[0].k
    if bound is None:
        bound = math.isqrt(m // 2)
    if 2 * bound * bound >= m:
        raise ReconstructFailed(f"bound {bound} too large for modulus p^k")
    out = {}
    try:
        if pair is None:
            if system.has_s15():
                raise ReconstructFailed("an s15 system needs both conjugate lifts")
            for v, x in lifted.values.items():
                out[v] = rational_reconstruct(x.residue, m, bound)
        else:
            plus, minus = pair
            r = plus.root
            if minus.root is not None and (minus.root + r) % m:
                raise ReconstructFailed("lifts do not use conjugate roots")
            for v in system.variables:
                q = reconstruct_quad(plus.values[v].residue, minus.values[v].residue, r, m, bound)
                out[v] = q
    except NotFound as exc:
        raise ReconstructFailed(str(exc)) from exc
    bad = verify_exact(system, out)
    if bad is not None:
        raise VerificationFailed(f"equation {bad[0]} evaluates to {bad[1]}")
    return out


def solve_exact(system, p: int = 19, bound: int = 10**3, k: int | None = None, method: str = "linear") -> list[dict]:
    """Every solution reconstructible from F_p points (both embeddings for s15)."""
    system = _as_system(system)
    k = k or default_k(p, bound)
    if not system.has_s15():
        out = []
        for s in solve_mod_p(system, p):
            lift = newton_lift(system, start_solution(s, p), k, method)
            try:
                out.append(reconstruct_and_verify(system, lift, bound))
            except (ReconstructFailed, VerificationFailed):
                pass
        return out
    r = sqrt_mod(-15 % p, p)
    plus = [newton_lift(system, start_solution(s, p, r), k, method) for s in solve_mod_p(system, p, r)
            if _regular(system, s, p, r)]
    minus = [newton_lift(system, start_solution(s, p, p - r), k, method) for s in solve_mod_p(system, p, p - r)
             if _regular(system, s, p, p - r)]
    out = []
    for a in plus:
        for b in minus:
            try:
                sol = reconstruct_and_verify(system, (a, b), bound)
            except (ReconstructFailed, VerificationFailed):
                continue
            if sol not in out:
                out.append(sol)
    return out


def _regular(system, s, p, r) -> bool:
    eqs = _reduced(system, p, r)
    J = _jacobian_at(jacobian(eqs, system.variables), s, GF(p))
    try:
        return _solve_mod(J, [0] * len(J), p, p) is not None
    except SingularJacobian:
        return False


# ---------------------------------------------------------------------------
# the cube constraints on an exceptional curve


def assemble_cube_constraints(a: Sequence, b: Sequence) -> list:
    """Six relations saying a0 + a1 t + a2 t^2 + a3 t^3 is proportional to (b0 + b1 t)^3."""
    a0, a1, a2, a3 = a
    b0, b1 = b
    return [
        3 * a3 * b0 - a2 * b1,
        a2 * b0 - a1 * b1,
        a1 * b0 - 3 * a0 * b1,
        9 * a0 * a3 - a1 * a2,
        3 * a0 * a2 - a1 * a1,
        3 * a1 * a3 - a2 * a2,
    ]


def is_proportional_to_cube(a: Sequence[int], b: Sequence[int], p: int) -> bool:
    """Brute-force: a = c * b^3 over F_p for some c (b nonzero)."""
    b0, b1 = b[0] % p, b[1] % p
    cube = [b0**3 % p, 3 * b0 * b0 * b1 % p, 3 * b0 * b1 * b1 % p, b1**3 % p]
    return any(all((c * x - y) % p == 0 for x, y in zip(cube, a)) for c in range(p))


def cube_constraint_table(p: int = 5) -> tuple[int, int]:
    """Exhaustive check over F_p: (pairs checked, disagreements) for b != 0."""
    import itertools

    checked = bad = 0
    for a in itertools.product(range(p), repeat=4):
        for b in itertools.product(range(p), repeat=2):
            checked += 1
            if b == (0, 0):
                continue
            vanish = all(r % p == 0 for r in assemble_cube_constraints(a, b))
            if vanish != is_proportional_to_cube(a, b, p):
                bad += 1
    return checked, bad


# ---------------------------------------------------------------------------
# planted test systems


def random_quad(rng: random.Random, height: int, p: int | None = None) -> QuadValue:
    return QuadValue(random_fraction(rng, height, p), random_fraction(rng, height, p))


def planted_system(rng: random.Random, nvars: int = 3, height: int = 10**3, p: int = 19,
                   coeff: int = 5, rational: bool = False) -> tuple[PolySystem, dict]:
    """Quadratic system with a planted solution that is regular mod p.

    Each equation is L_i(x - X) + Q_i(x - X) with small integer L, Q and the
    planted point X; L is invertible mod p so X mod p is a simple root.
    """
    vars = tuple(f"x{i}" for i in range(nvars))
    D = QQ if rational else QQ15
    while True:
        X = {v: (random_fraction(rng, height, p) if rational else random_quad(rng, height, p)) for v in vars}
        L = [[rng.randint(-coeff, coeff) for _ in vars] for _ in vars]
        if _det_int(L) % p:
            break
    shifted = [SparsePoly.var(v, vars, D) - SparsePoly.constant(D.convert(X[v]), vars, D) for v in vars]
    eqs = []
    for i in range(nvars):
        f = SparsePoly.zero(vars, D)
        for j in range(nvars):
            if L[i][j]:
                f = f + shifted[j].scale(D.convert(L[i][j]))
        for j in range(nvars):
            for l in range(j, nvars):
                c = rng.randint(-coeff, coeff)
                if c:
                    f = f + (shifted[j] * shifted[l]).scale(D.convert(c))
        eqs.append(f)
    return PolySystem(eqs, vars), X


def _det_int(M) -> int:
    M = [[Fraction(x) for x in row] for row in M]
    n = len(M)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        d *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return int(d)


def run_planted(trials: int = 100, seed: int = 0, nvars: int = 3, p: int = 19, height: int = 10**3,
                method: str = "linear") -> list[tuple[int, bool, str]]:
    """Solve planted systems end to end; one (trial, recovered, note) per trial."""
    rng = random.Random(seed)
    out = []
    for t in range(trials):
        system, X = planted_system(rng, nvars, height, p)
        try:
            sols = solve_exact(system, p, height, method=method)
            ok = any(all(s[v] == X[v] for v in system.variables) for s in sols)
            out.append((t, ok, f"{len(sols)} exact solutions"))
        except Exception as exc:  # reported, not swallowed silently
            out.append((t, False, f"{type(exc).__name__}: {exc}"))
    return out
