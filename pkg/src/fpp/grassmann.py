"""Pluecker algebra for Gr(3,6).

Variables are named ``x_ijk`` with i < j < k.  V6 has basis x_1..x_6 with the
C7 generator acting by x_i -> eps^i x_i, and the skew form
omega = x_1^x_6 + x_2^x_5 + x_4^x_3.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import exactnum as en
from .multipoly import (
    QQ,
    Domain,
    SparsePoly,
    VarAction,
    domain_of_scalar,
    parse_poly,
)

INDICES = tuple(itertools.combinations(range(1, 7), 3))
PLUCKER = tuple("x_%d%d%d" % t for t in INDICES)
PAIRS = ((1, 6), (2, 5), (4, 3))  # omega = sum x_a ^ x_b
DOUBLING = {1: 2, 2: 4, 3: 6, 4: 1, 5: 3, 6: 5}
CHART_VARS = tuple(f"u{i}" for i in range(1, 10))


class Zero:
    """Marker for a Pluecker symbol with a repeated index."""

    def __repr__(self):
        return "Zero"


ZERO = Zero()


def plucker_normalize(i: int, j: int, k: int):
    """Sorted index and the sign of the sorting permutation, or ZERO."""
    for t in (i, j, k):
        if not 1 <= t <= 6:
            raise ValueError(f"index {t} out of range")
    idx = [i, j, k]
    if len(set(idx)) < 3:
        return ZERO
    sign = 1
    for a in range(3):
        for b in range(2 - a):
            if idx[b] > idx[b + 1]:
                idx[b], idx[b + 1] = idx[b + 1], idx[b]
                sign = -sign
    return tuple(idx), sign


def name(idx) -> str:
    return "x_%d%d%d" % tuple(idx)


def c7_weight(idx) -> int:
    return sum(idx) % 7


# ---------------------------------------------------------------------------
# 3-forms as dicts {sorted index: coefficient}


def wedge1(a: int, form2: dict) -> dict:
    """x_a wedge a 2-form given as {(i, j): c}."""
    out: dict = {}
    for (i, j), c in form2.items():
        r = plucker_normalize(a, i, j)
        if r is ZERO:
            continue
        idx, s = r
        out[idx] = out.get(idx, 0) + s * c
    return {k: v for k, v in out.items() if v}


OMEGA = {(1, 6): 1, (2, 5): 1, (4, 3): 1}


def _contract1(a: int, idx: tuple) -> tuple | None:
    """Interior product with e_a on x_idx: (sign, remaining 2-index) or None."""
    if a not in idx:
        return None
    pos = idx.index(a)
    rest = tuple(t for t in idx if t != a)
    return (-1) ** pos, rest


def contract_omega_inv(v: dict) -> dict:
    """Contraction of a 3-form with omega^{-1} = sum e_a ^ e_b (pairs as in omega).

    Convention: e_a ^ e_b acts as i_{e_b} after i_{e_a}.  Returns a 1-form {i: c}.
    """
    out: dict = {}
    for idx, c in v.items():
        for a, b in PAIRS:
            r = _contract1(a, idx)
            if r is None:
                continue
            s1, rest = r
            r2 = _contract1(b, rest)
            if r2 is None:
                continue
            s2, last = r2
            out[last[0]] = out.get(last[0], 0) + s1 * s2 * c
    return {k: x for k, x in out.items() if x}


def u6_basis() -> list[dict]:
    """x_a wedge omega for a = 1..6."""
    return [wedge1(a, OMEGA) for a in range(1, 7)]


def _solve_rational(rows: list[list[Fraction]], rhs: list[Fraction]):
    """Least-effort exact solve of a consistent square-or-tall system."""
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(aug)) if aug[i][c]), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, len(aug)):
        if aug[i][n]:
            raise ValueError("inconsistent system")
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = aug[i][n]
    return x


def _nullspace_rational(rows: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    m = [list(map(Fraction, r)) for r in rows]
    piv = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv.append(c)
        r += 1
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -m[i][f]
        basis.append(v)
    return basis


def weight_space(w: int) -> list[tuple]:
    return [t for t in INDICES if c7_weight(t) == w]


def u14_weight_basis(w: int) -> list[dict]:
    """Basis of the weight-w part of U14, normalized for display.

    Kernel of the contraction with omega^{-1}, brought to reduced echelon form
    over the sorted weight-space coordinates; vectors with more terms first.
    """
    space = weight_space(w)
    rows = []
    for i in range(1, 7):
        rows.append([Fraction(contract_omega_inv({t: 1}).get(i, 0)) for t in space])
    ker = _nullspace_rational(rows, len(space))
    # reduced echelon form of the kernel rows
    ech = _rref_rows(ker)
    vecs = [{t: c for t, c in zip(space, v) if c} for v in ech]
    vecs.sort(key=lambda d: (-len(d), sorted(d)))
    return vecs


def _rref_rows(vs):
    m = [list(v) for v in vs]
    n = len(m[0]) if m else 0
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return m[:r]


def u14_basis() -> dict[int, list[dict]]:
    return {w: u14_weight_basis(w) for w in range(7)}


def split_u6_u14(v: dict) -> tuple[dict, dict]:
    """Decompose a 3-form (as {index: c}) into its U6 and U14 components."""
    v = {tuple(k): Fraction(c) for k, c in v.items() if c}
    out6: dict = {}
    out14: dict = {}
    for w in range(7):
        space = weight_space(w)
        part = {t: v[t] for t in space if t in v}
        if not part:
            continue
        b6 = [d for d in u6_basis() if d and all(c7_weight(t) == w for t in d)]
        b14 = u14_weight_basis(w)
        basis = b6 + b14
        cols = [[Fraction(d.get(t, 0)) for d in basis] for t in space]
        coef = _solve_rational(cols, [part.get(t, Fraction(0)) for t in space])
        for k, d in enumerate(basis):
            target = out6 if k < len(b6) else out14
            for t, c in d.items():
                target[t] = target.get(t, 0) + coef[k] * c
    clean = lambda d: {k: x for k, x in d.items() if x}
    return clean(out6), clean(out14)


# ---------------------------------------------------------------------------
# tables


# Column order of the C7 eigenbasis table as laid out in the reference
# table; the grouping itself is recomputed and compared in eigentable().
_EIGEN_LAYOUT = (
    ("124", "356"),
    ("125", "134", "456"),
    ("126", "135", "234"),
    ("136", "145", "235"),
    ("245", "146", "236"),
    ("345", "156", "246"),
    ("123", "346", "256"),
)


def eigen_columns() -> dict[int, list[tuple]]:
    cols: dict[int, list[tuple]] = {w: [] for w in range(7)}
    for t in INDICES:
        cols[c7_weight(t)].append(t)
    return cols


def _render_columns(header, columns) -> str:
    width = max(len(s) for col in columns for s in col) + 2
    width = max(width, 4)
    height = max(len(c) for c in columns)
    lines = ["".join(str(h).ljust(width) for h in header).rstrip()]
    for r in range(height):
        cells = [(c[r] if r < len(c) else "") for c in columns]
        lines.append("".join(s.ljust(width) for s in cells).rstrip())
    return "\n".join(lines) + "\n"


def eigentable() -> str:
    """Plain-text table of the C7 eigenbasis of the 20 Pluecker coordinates."""
    cols = eigen_columns()
    for w, layout in enumerate(_EIGEN_LAYOUT):
        if sorted("".join(map(str, t)) for t in cols[w]) != sorted(layout):
            raise AssertionError(f"weight {w}: computed {cols[w]} disagrees with layout")
    return _render_columns(range(7), [["x_" + s for s in layout] for layout in _EIGEN_LAYOUT])


def format_form(d: dict) -> str:
    parts = []
    for i, (t, c) in enumerate(sorted(d.items())):
        nm = name(t)
        if c == 1:
            s = nm
        elif c == -1:
            s = "-" + nm
        else:
            s = f"{en.format_scalar(Fraction(c))}*{nm}"
        if i and not s.startswith("-"):
            s = "+" + s
        parts.append(s)
    return "".join(parts) if parts else "0"


def u14_table() -> str:
    b = u14_basis()
    return _render_columns(range(7), [[format_form(d) for d in b[w]] for w in range(7)])


def tables() -> str:
    return "C7 eigenspaces\n" + eigentable() + "\nU14 eigenspaces\n" + u14_table()


# ---------------------------------------------------------------------------
# actions


def form_to_poly(d: dict, domain: Domain = QQ) -> SparsePoly:
    vars = PLUCKER
    terms = {}
    for t, c in d.items():
        e = tuple(1 if v == name(t) else 0 for v in vars)
        terms[e] = c
    return SparsePoly(vars, terms, domain)


def index_doubling() -> VarAction:
    """C3 action x_i -> x_{2i mod 7} on Pluecker variables."""
    images = {}
    for t in INDICES:
        r = plucker_normalize(*(DOUBLING[i] for i in t))
        idx, s = r
        images[name(t)] = (s, name(idx))
    return VarAction(images, 3, "doubling")


def index_reversal() -> VarAction:
    """x_k -> x_{7-k}, inducing the (p0, p3) -> (p3^3/p0, p3) symmetry."""
    images = {}
    for t in INDICES:
        idx, s = plucker_normalize(*(7 - i for i in t))
        images[name(t)] = (s, name(idx))
    return VarAction(images, 2, "reversal")


def c7_action(p: int) -> VarAction:
    """x_ijk -> eps^(i+j+k) x_ijk over GF(p), p = 1 mod 7."""
    if (p - 1) % 7:
        raise ValueError("need p = 1 mod 7 for a 7th root of unity")
    g = 2
    while True:
        eps = pow(g, (p - 1) // 7, p)
        if eps != 1:
            break
        g += 1
    images = {name(t): (pow(eps, c7_weight(t), p), name(t)) for t in INDICES}
    return VarAction(images, 7, "c7")


def involution_action() -> VarAction:
    """Annihilator involution on coordinates: +1 on U14, -1 on U6.

    Computed by decomposing each coordinate form; the result is a signed
    permutation of the 20 variables.
    """
    images = {}
    for t in INDICES:
        a6, a14 = split_u6_u14({t: 1})
        img = dict(a14)
        for k, c in a6.items():
            img[k] = img.get(k, 0) - c
        img = {k: c for k, c in img.items() if c}
        if len(img) != 1:
            raise AssertionError(f"involution image of {name(t)} is not a signed coordinate")
        (k, c), = img.items()
        images[name(t)] = (int(c), name(k))
    return VarAction(images, 2, "iota")


# ---------------------------------------------------------------------------
# family equations


TWO_PARAM_TEXT = (
    "p0*x_124 + x_356",
    "x_456 + x_125 - x_143",
    "x_135 + x_243 - x_216",
    "x_263 + x_416 - x_425",
    "p3*x_415 + x_316 - x_325",
    "p3*x_246 + x_543 - x_516",
    "p3*x_123 + x_625 - x_643",
)

# seven-parameter display form; the fourth line carries the sign fix that
# puts it in U14 and makes it the C3-image of the third
P_MODE_TEXT = (
    "p0*x_124 + x_356",
    "p1*x_456 + x_125 + x_134",
    "p2*x_135 - x_234 + x_126",
    "-p4*x_236 - x_146 + x_245",
    "-p3*x_145 - x_136 + x_235",
    "p5*x_246 - x_345 + x_156",
    "p6*x_123 + x_256 + x_346",
)
P_MODE_TEXT_VERBATIM_4 = "-p4*x_236 + x_146 + x_245"

# weight of each displayed equation
DISPLAY_WEIGHTS = (0, 1, 2, 4, 3, 5, 6)


@dataclass(frozen=True)
class TwoParam:
    p0: object
    p3: object


@dataclass(frozen=True)
class PParams:
    p: tuple  # (p0, ..., p6)


@dataclass(frozen=True)
class GeneralParams:
    H: tuple  # seven (a, b) pairs in the u14_basis of each weight


def _substitute_params(texts, values: dict, domain=None, symbolic=()):
    """Parse equations, substitute numeric parameters, keep ``symbolic`` ones."""
    pnames = tuple(f"p{i}" for i in range(7))
    dom = domain or _common_domain(list(values.values()))
    vars = pnames + PLUCKER
    out = []
    for t in texts:
        f = parse_poly(t, vars=vars)
        if f.domain != dom:
            f = f.map_coeffs(lambda c: c, dom)
        sub = {k: SparsePoly.constant(dom.convert(v), (), dom) for k, v in values.items()}
        if sub:
            f = f.subs(sub, vars=tuple(symbolic) + PLUCKER)
        out.append(f.with_vars(tuple(symbolic) + PLUCKER))
    return out


def _common_domain(items):
    from .multipoly import QQ15, QQ157, ModDomain

    best = QQ
    for x in items:
        d = x if isinstance(x, Domain) else domain_of_scalar(x)
        if isinstance(d, ModDomain):
            return d
        if d == QQ157:
            best = QQ157
        elif d == QQ15 and best == QQ:
            best = QQ15
    return best


def family_equations(params, domain: Domain | None = None) -> list[SparsePoly]:
    """The seven linear forms cutting out W in Pluecker coordinates.

    ``params`` is TwoParam, PParams or GeneralParams.  Parameter values may
    be numbers or the strings 'p0', 'p3', ... to keep them symbolic; symbolic
    parameters come first in the variable tuple.
    """
    if isinstance(params, TwoParam):
        vals = {"p0": params.p0, "p3": params.p3}
        texts = TWO_PARAM_TEXT
    elif isinstance(params, PParams):
        vals = {f"p{i}": v for i, v in enumerate(params.p)}
        texts = P_MODE_TEXT
    elif isinstance(params, GeneralParams):
        return _general_equations(params, domain)
    else:
        raise TypeError("unknown parameter vector")
    symbolic = [k for k, v in vals.items() if isinstance(v, str)]
    numeric = {k: v for k, v in vals.items() if not isinstance(v, str)}
    for k, v in numeric.items():
        if not v:
            pass  # zero parameters are allowed for degenerate checks
    return _substitute_params(texts, numeric, domain, symbolic)


def _general_equations(params: GeneralParams, domain):
    b = u14_basis()
    dom = domain or _common_domain([c for ab in params.H for c in ab])
    out = []
    for w in DISPLAY_WEIGHTS:
        a, c = params.H[w]
        form = {}
        for coef, d in ((a, b[w][0]), (c, b[w][1])):
            for t, x in d.items():
                form[t] = form.get(t, 0) + dom.convert(coef) * dom.convert(x)
        out.append(form_to_poly({t: x for t, x in form.items() if x}, dom))
    return out


def p_to_general(p: Sequence) -> GeneralParams:
    """Seven-parameter display form as coefficient pairs in the U14 basis."""
    p = list(p)
    H = [None] * 7
    H[0] = (p[0], 1)
    H[1] = (1, p[1])
    H[2] = (1, p[2])
    H[3] = (-1, -p[3])
    H[4] = (-1, -p[4])
    H[5] = (1, p[5])
    H[6] = (1, p[6])
    return GeneralParams(tuple(H))


# ---------------------------------------------------------------------------
# charts


def chart_matrix(chart: tuple, domain: Domain = QQ, vars=CHART_VARS):
    """3x6 matrix with the identity in the chart columns and u's elsewhere."""
    chart = tuple(chart)
    others = [c for c in range(1, 7) if c not in chart]
    one = SparsePoly.constant(domain.one, vars, domain)
    zero = SparsePoly.zero(vars, domain)
    M = [[None] * 6 for _ in range(3)]
    for r in range(3):
        for c in range(1, 7):
            if c in chart:
                M[r][c - 1] = one if chart.index(c) == r else zero
        for k, c in enumerate(others):
            M[r][c - 1] = SparsePoly.var(vars[3 * r + k], vars, domain)
    return M


def _det3(a):
    return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))


def chart_minors(chart: tuple, domain: Domain = QQ, vars=CHART_VARS) -> dict[str, SparsePoly]:
    """Pluecker coordinates of the chart as polynomials in u1..u9."""
    M = chart_matrix(chart, domain, vars)
    out = {}
    for t in INDICES:
        sub = [[M[r][c - 1] for c in t] for r in range(3)]
        out[name(t)] = _det3(sub)
    return out


def chart_coordinates(chart: tuple, u: Sequence, domain: Domain | None = None) -> dict[str, object]:
    """Pluecker vector of a chart point."""
    dom = domain or _common_domain(list(u) or [0])
    point = dict(zip(CHART_VARS, u))
    return {k: f.evaluate(point) for k, f in chart_minors(chart, dom).items()}


def chart_system(equations: Sequence[SparsePoly], chart: tuple, extra_vars=()) -> list[SparsePoly]:
    """Restrict linear Pluecker equations to a chart (polynomials in u and extras)."""
    dom = equations[0].domain
    vars = tuple(extra_vars) + CHART_VARS
    minors = {k: f.with_vars(vars) for k, f in chart_minors(chart, dom, CHART_VARS).items()}
    out = []
    for f in equations:
        g = f.subs(minors, vars=vars)
        out.append(g.with_vars(vars))
    return out


# ---------------------------------------------------------------------------
# Pluecker relations


def _three_term_relations() -> list[dict]:
    rels = []
    for I in itertools.combinations(range(1, 7), 2):
        for J in itertools.combinations(range(1, 7), 4):
            rel: dict = {}
            for pos, j in enumerate(J):
                a = plucker_normalize(I[0], I[1], j)
                rest = tuple(x for x in J if x != j)
                if a is ZERO:
                    continue
                (ia, sa) = a
                s = sa * (-1) ** pos
                key = tuple(sorted((ia, rest)))
                rel[key] = rel.get(key, 0) + s
            rel = {k: v for k, v in rel.items() if v}
            if rel:
                rels.append(rel)
    return rels


def plucker_relations(domain: Domain = QQ) -> list[SparsePoly]:
    """Inter-reduced basis of the degree-2 part of the Pluecker ideal (35 quadrics)."""
    rels = _three_term_relations()
    monos = sorted({k for r in rels for k in r}, reverse=True)
    idx = {m: i for i, m in enumerate(monos)}
    rows = [[Fraction(0)] * len(monos) for _ in rels]
    for row, r in zip(rows, rels):
        for k, v in r.items():
            row[idx[k]] = Fraction(v)
    ech = _rref_rows(rows)
    out = []
    pos = {v: i for i, v in enumerate(PLUCKER)}
    for v in ech:
        den = 1
        for c in v:
            den = den * c.denominator // _gcd(den, c.denominator)
        terms = {}
        for c, m in zip(v, monos):
            if c:
                e = [0] * 20
                e[pos[name(m[0])]] += 1
                e[pos[name(m[1])]] += 1
                terms[tuple(e)] = c * den
        out.append(SparsePoly(PLUCKER, terms, QQ).map_coeffs(lambda c: c, domain) if domain != QQ else SparsePoly(PLUCKER, terms, QQ))
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# fixed loci


def c7_fixed_points() -> list[dict[str, int]]:
    return [{v: (1 if v == name(t) else 0) for v in PLUCKER} for t in INDICES]


PM_PLUS_TEXT = ("x_125 + x_134", "x_126 - x_234", "x_136 - x_235", "x_146 - x_245", "x_156 - x_345", "x_256 + x_346")
PM_MINUS_TEXT = (
    "-x_125 + x_134", "x_126 + x_234", "x_136 + x_235", "x_146 + x_245", "x_156 + x_345", "-x_256 + x_346",
    "x_456", "x_135", "x_145", "x_236", "x_246", "x_123", "x_124", "x_356",
)


def pm_ideals(domain: Domain = QQ) -> tuple[list[SparsePoly], list[SparsePoly]]:
    """The two linear ideals of the displayed fixed loci (6 and 14 equations)."""
    plus = [parse_poly(t, vars=PLUCKER) for t in PM_PLUS_TEXT]
    minus = [parse_poly(t, vars=PLUCKER) for t in PM_MINUS_TEXT]
    if domain != QQ:
        plus = [f.map_coeffs(lambda c: c, domain) for f in plus]
        minus = [f.map_coeffs(lambda c: c, domain) for f in minus]
    return plus, minus


def eigen_loci(domain: Domain = QQ) -> tuple[list[SparsePoly], list[SparsePoly]]:
    """Fixed loci of involution_action: V(U6 forms) and V(U14 forms)."""
    u6 = [form_to_poly(d, domain) for d in u6_basis()]
    u14 = [form_to_poly(d, domain) for w in range(7) for d in u14_weight_basis(w)]
    return u6, u14


# ---------------------------------------------------------------------------
# torus rescaling and moduli count


def torus_report() -> dict:
    """Rank of the (C*)^3 acting on the seven eigen-coefficient ratios.

    The diagonal torus t_i on V6 preserving omega up to scale has
    t1 t6 = t2 t5 = t3 t4 = lam; on P(wedge^3) the overall scalar acts
    trivially.  Each weight space contributes the character of the ratio
    of its two U14 basis vectors.
    """
    # exponents of (t1, t2, t3, lam) for x_1..x_6
    ch = {1: (1, 0, 0, 0), 2: (0, 1, 0, 0), 3: (0, 0, 1, 0), 4: (0, 0, -1, 1), 5: (0, -1, 0, 1), 6: (-1, 0, 0, 1)}

    def char(t):
        return tuple(sum(ch[i][k] for i in t) for k in range(4))

    b = u14_basis()
    ratios = []
    for w in range(7):
        c0 = {char(t) for t in b[w][0]}
        c1 = {char(t) for t in b[w][1]}
        if len(c0) != 1 or len(c1) != 1:
            raise AssertionError("U14 basis vectors are not torus eigenvectors")
        a, c = c0.pop(), c1.pop()
        ratios.append([Fraction(x - y) for x, y in zip(c, a)])
    rank = len(_rref_rows(ratios))
    return {"parameters": 7, "torus_rank": rank, "moduli": 7 - rank}
