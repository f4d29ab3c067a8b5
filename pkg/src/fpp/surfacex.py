"""The surface X in P^7: bundled equations, symmetries and point checks.

The nine generators live over Q(s15) with s15 = sqrt(-15).  Five of them
(eq1, eq4, eq5, eq6, eq9) are stored as printed in ``data/x_equations.txt``
together with the section d; the other four are images under sigma.  A few
printed lines are not consistent with the stated symmetries, so a short list
of corrections is applied when loading; every correction is reported and the
symmetry checks are run again on the result.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from importlib import resources

from . import kernels
from .exactnum import QuadValue, find_suitable_prime, reduce_mod
from .groebner import buchberger, hilbert_profile, normal_forms
from .multipoly import (
    QQ15,
    GF,
    SparsePoly,
    VarAction,
    apply_action,
    evaluate_matrix,
    jacobian,
    parse_poly,
    write_poly_text,
)
from .verdict import FAIL, PASS, Verdict

W = tuple(f"W{i}" for i in range(8))
ODD = ("W4", "W5", "W6", "W7")

DATA_FILE = "x_equations.txt"
DATA_SHA256 = "7b813d71882b1a13c082ff9050375ad5dd1c7316988e6db736e0f36a5b558eb8"

# (label, printed text, replacement, reason)
ERRATA = (
    ("eq4",
     "( - 5328591207840000 + 2144900495488320 s15 W0^2 W7 )",
     "( - 5328591207840000 + 2144900495488320 s15) W0^2 W7",
     "closing parenthesis misplaced; the coefficient multiplies W0^2 W7"),
    ("eq5",
     "W0 (W3 W4+ W2 W5 + W1 W6)",
     "W0 (W3 W4+ W1 W5 + W2 W6)",
     "sigma-orbit of W0 W3 W4 is W0 (W3 W4 + W1 W5 + W2 W6)"),
    ("eq5",
     "( 642303707483671947 W4 W7^2 + 134647945440329475 s15 (W4+W5+W6) W7^2",
     "( 642303707483671947 + 134647945440329475 s15) (W4+W5+W6) W7^2",
     "unbalanced parenthesis; one coefficient for the sigma-orbit of W4 W7^2"),
    ("eq4",
     "- (1094836267717214400 + 398810644281337680 s15 )(W1 W2 W4",
     "+ (- 1094836267717214400 + 398810644281337680 s15 )(W1 W2 W4",
     "sign of the s15 part; forced by Jacobian rank 4 at the singular points"),
)

# parity under iota (W4..W7 -> minus themselves)
PARITY = {"eq1": 1, "eq2": 1, "eq3": 1, "eq4": -1, "eq5": -1,
          "eq6": 1, "eq7": 1, "eq8": 1, "eq9": 1, "d": 1}
DEGREES = {"eq1": 2, "eq2": 2, "eq3": 2, "eq4": 3, "eq5": 3,
           "eq6": 3, "eq7": 3, "eq8": 3, "eq9": 3, "d": 2}


class DataCorrupt(ValueError):
    pass


class PointNotOnX(ValueError):
    pass


def sigma_action() -> VarAction:
    """W1 -> W2 -> W3 -> W1 and W4 -> W5 -> W6 -> W4."""
    img = {"W0": "W0", "W1": "W2", "W2": "W3", "W3": "W1",
           "W4": "W5", "W5": "W6", "W6": "W4", "W7": "W7"}
    return VarAction(img, 3, "sigma")


def iota_action() -> VarAction:
    img = {v: ("-" + v if v in ODD else v) for v in W}
    return VarAction(img, 2, "iota")


def _act(f: SparsePoly, a: VarAction) -> SparsePoly:
    return apply_action(f, a).with_vars(W)


@dataclass
class XData:
    equations: list[SparsePoly]
    names: list[str]
    d: SparsePoly
    sigma: VarAction
    iota: VarAction
    singular_points: list[tuple]
    corrections: list[str] = field(default_factory=list)

    def eq(self, k: int) -> SparsePoly:
        return self.equations[k - 1]


def raw_text() -> str:
    return resources.files("fpp").joinpath("data", DATA_FILE).read_text()


def _parse_raw(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        label, _, body = line.partition("=")
        out[label.strip()] = body.strip()
    return out


def singular_points() -> list[tuple]:
    pts = []
    for i in (1, 2, 3):
        for s in (1, -1):
            v = [0] * 8
            v[i] = 1
            v[i + 3] = s
            pts.append(tuple(v))
    return pts


def symmetry_problems(eqs: dict[str, SparsePoly]) -> list[str]:
    """Every violated symmetry or parity statement, as text."""
    s, i = sigma_action(), iota_action()
    bad = []
    for a, b in (("eq1", "eq2"), ("eq2", "eq3"), ("eq3", "eq1"), ("eq6", "eq7"), ("eq7", "eq8"), ("eq8", "eq6")):
        if _act(eqs[a], s) != eqs[b]:
            bad.append(f"sigma({a}) != {b}")
    for k in ("eq4", "eq5", "eq9", "d"):
        if _act(eqs[k], s) != eqs[k]:
            bad.append(f"{k} is not sigma-invariant")
    for k, sign in PARITY.items():
        f = eqs[k]
        if _act(f, i) != (f if sign > 0 else -f):
            bad.append(f"{k} has wrong parity")
        if not f.is_homogeneous() or f.total_degree() != DEGREES[k]:
            bad.append(f"{k} is not homogeneous of degree {DEGREES[k]}")
    return bad


def load_x(text: str | None = None, errata=ERRATA, check_sum: bool = True) -> XData:
    """Parse, correct, complete and verify the equations of X.

    Raises DataCorrupt when the checksum, a symmetry check, the vanishing at
    the six singular points or the Jacobian rank 4 there fails.
    """
    if text is None:
        text = raw_text()
        if check_sum and hashlib.sha256(text.encode()).hexdigest() != DATA_SHA256:
            raise DataCorrupt("equation file checksum mismatch")
    raw = _parse_raw(text)
    notes = []
    for label, old, new, why in errata:
        if old not in raw.get(label, ""):
            raise DataCorrupt(f"{label}: expected printed text for a correction is missing")
        raw[label] = raw[label].replace(old, new)
        notes.append(f"{label}: {why}")
    eqs = {}
    try:
        for label in ("eq1", "eq4", "eq5", "eq6", "eq9", "d"):
            f = parse_poly(raw[label], vars=W)
            eqs[label] = f.map_coeffs(lambda c: c, QQ15) if f.domain != QQ15 else f
    except Exception as exc:  # parse errors are data errors here
        raise DataCorrupt(f"cannot parse equations: {exc}") from exc
    s = sigma_action()
    eqs["eq2"] = _act(eqs["eq1"], s)
    eqs["eq3"] = _act(eqs["eq2"], s)
    eqs["eq7"] = _act(eqs["eq6"], s)
    eqs["eq8"] = _act(eqs["eq7"], s)
    bad = symmetry_problems(eqs)
    if bad:
        raise DataCorrupt("; ".join(bad))
    names = [f"eq{k}" for k in range(1, 10)]
    data = XData([eqs[n] for n in names], names, eqs["d"], s, iota_action(), singular_points(), notes)
    on_x = verify_points_on_x(data)
    if not on_x.ok:
        raise DataCorrupt(on_x.witness)
    ranks = [jacobian_rank_at(pt, data=data) for pt in data.singular_points]
    if any(r != 4 for r in ranks):
        raise DataCorrupt(f"Jacobian ranks {ranks} at the singular points, expected 4")
    return data


def _point_dict(point) -> dict:
    return {v: QQ15.convert(x) for v, x in zip(W, point)}


def verify_points_on_x(data: XData | None = None) -> Verdict:
    """All nine equations and d vanish exactly at the six singular points."""
    data = data or load_x()
    details = []
    bad = None
    for pt in data.singular_points:
        P = _point_dict(pt)
        for name, f in zip(data.names + ["d"], data.equations + [data.d]):
            if f.evaluate(P):
                bad = bad or (name, pt)
        details.append(f"{pt}: all vanish")
    if bad:
        return Verdict(FAIL, witness=f"{bad[0]} does not vanish at {bad[1]}")
    return Verdict(PASS, details=[f"{len(data.singular_points)} points, {len(data.equations)} equations and d vanish"])


def _rank_exact(M, D) -> int:
    A = [list(r) for r in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = D.inv(A[r][c])
        for i in range(r + 1, rows):
            if A[i][c]:
                f = D.mul(A[i][c], inv)
                A[i] = [D.sub(x, D.mul(f, y)) for x, y in zip(A[i], A[r])]
        r += 1
    return r


def jacobian_rank_at(point, prime: int | None = None, root: int | None = None, data: XData | None = None) -> int:
    """Rank of the 9x8 Jacobian at a point of X.

    With ``prime`` the point is a tuple of residues and the equations are
    reduced with s15 -> ``root``; otherwise the point is exact over Q(s15).
    """
    data = data or load_x()
    if prime is None:
        eqs = data.equations
        P = _point_dict(point)
        D = QQ15
    else:
        if root is None:
            root = reduce_root(prime)
        eqs = [f.reduce(prime, [root]) for f in data.equations]
        D = GF(prime)
        P = {v: int(x) % prime for v, x in zip(W, point)}
    if all(not D.convert(x) for x in P.values()):
        raise PointNotOnX("the zero vector is not a projective point")
    for f in eqs:
        if f.evaluate(P):
            raise PointNotOnX(f"{point} is not on X")
    M = evaluate_matrix(jacobian(eqs, W), P)
    if prime is not None:
        return kernels.rank([[int(x) for x in row] for row in M], prime)
    return _rank_exact(M, D)


def reduce_root(p: int) -> int:
    from .exactnum import sqrt_mod

    r = sqrt_mod(-15 % p, p)
    if r is None:
        raise ValueError(f"-15 is not a square mod {p}")
    return r


def reduced_equations(p: int, root: int | None = None, data: XData | None = None) -> list[SparsePoly]:
    data = data or load_x()
    root = reduce_root(p) if root is None else root
    return [f.reduce(p, [root]) for f in data.equations]


def hilbert_polynomial_value(n: int) -> int:
    return 12 * n * n - 6 * n + 2


def hilbert_check_x(prime: int | None = None, n_max: int = 6, data: XData | None = None, seed: int = 0):
    """Hilbert function of the scheme cut out by the nine equations mod p.

    Two profiles are computed: the ideal generated by the nine equations
    (truncated basis) and its saturation by the irrelevant ideal, which is the
    homogeneous ideal of the scheme.  The verdict is on the saturation: pass
    iff h(n) = 12n^2 - 6n + 2 for 5 <= n <= n_max.  Returns
    (scheme profile, Verdict); the generated values are in the details.
    """
    from .groebner import saturate_irrelevant

    if n_max < 6:
        raise ValueError("n_max must be at least 6")
    if prime is None:
        prime, _ = find_suitable_prime([-15], 17)
    eqs = reduced_equations(prime, data=data)
    if any(f.is_zero() for f in eqs):
        raise ValueError(f"an equation vanishes identically mod {prime}; pick another prime")
    gen = hilbert_profile(buchberger(eqs, max_degree=n_max), n_max)
    sat_gb = saturate_irrelevant(eqs, seed)
    prof = hilbert_profile(sat_gb, n_max)
    quadrics = sum(1 for g in sat_gb.generators if g.total_degree() == 2)
    bad = [(n, h) for n, h in prof.values if n >= 5 and h != hilbert_polynomial_value(n)]
    details = [f"n={n} generated={g} scheme={h} expected={hilbert_polynomial_value(n)}"
               for (n, g), (_, h) in zip(gen.values, prof.values)]
    details.append(f"quadrics in the saturated ideal: {quadrics}")
    if bad:
        n, h = bad[0]
        v = Verdict(FAIL, (prime,), witness=f"h({n}) = {h}, expected {hilbert_polynomial_value(n)}",
                    details=details, seeds=(seed,))
    else:
        v = Verdict(PASS, (prime,), details=details, seeds=(seed,))
    prof.generated = gen
    return prof, v


def random_point_on_x(p: int, seed: int = 0, tries: int = 50, data: XData | None = None):
    """An F_p point of X found by cutting with two random hyperplanes in W0 = 1."""
    from .henselsolve import solve_mod_p

    eqs = reduced_equations(p, data=data)
    F = GF(p)
    rng = random.Random(seed)
    for _ in range(tries):
        aff = [f.subs({"W0": SparsePoly.constant(1, (), F)}, vars=W[1:]) for f in eqs]
        cuts = []
        for _ in range(2):
            c = [rng.randrange(p) for _ in range(8)]
            g = SparsePoly.constant(c[0], W[1:], F)
            for ci, v in zip(c[1:], W[1:]):
                g = g + SparsePoly.var(v, W[1:], F).scale(ci)
            cuts.append(g)
        sols = solve_mod_p(aff + cuts, p)
        if sols:
            s = sols[0]
            return (1,) + tuple(int(s[v]) for v in W[1:])
    return None


def ideal_is_stable(p: int | None = None, data: XData | None = None) -> bool:
    """sigma and iota map every generator into the ideal (checked mod p)."""
    data = data or load_x()
    if p is None:
        p, _ = find_suitable_prime([-15], 17)
    r = reduce_root(p)
    eqs = [f.reduce(p, [r]) for f in data.equations]
    gb = buchberger(eqs, max_degree=3)
    imgs = [_act(f, a).reduce(p, [r]) for f in data.equations for a in (data.sigma, data.iota)]
    return all(g.is_zero() for g in normal_forms(imgs, gb))


def export(data: XData | None = None) -> str:
    data = data or load_x()
    header = "equations of X and the section d\n" + "\n".join("correction " + c for c in data.corrections)
    return write_poly_text(data.equations + [data.d], names=data.names + ["d"], header=header)


def verify(data: XData | None = None, primes=None, n_max: int = 6, hilbert: bool = False) -> Verdict:
    """Load checks, point checks, Jacobian ranks and optionally the Hilbert check."""
    from .verdict import combine

    try:
        data = data or load_x()
    except DataCorrupt as exc:
        return Verdict(FAIL, witness=f"DataCorrupt: {exc}")
    out = [Verdict(PASS, details=["symmetry and parity checks pass"] + ["correction " + c for c in data.corrections])]
    on_x = verify_points_on_x(data)
    out.append(on_x)
    if not on_x.ok:
        return combine(out)
    ranks = [jacobian_rank_at(pt, data=data) for pt in data.singular_points]
    if all(r == 4 for r in ranks):
        out.append(Verdict(PASS, details=[f"Jacobian rank at singular points: {ranks}"]))
    else:
        out.append(Verdict(FAIL, witness=f"Jacobian ranks {ranks}"))
    if hilbert:
        if primes is None:
            primes = (17, 23)  # 19 kills the first equation
        for q in primes:
            out.append(hilbert_check_x(q, n_max, data)[1])
    return combine(out)


__all__ = [
    "XData", "DataCorrupt", "PointNotOnX", "ERRATA", "load_x", "verify_points_on_x",
    "jacobian_rank_at", "hilbert_check_x", "random_point_on_x", "export", "verify",
    "sigma_action", "iota_action", "singular_points", "ideal_is_stable", "reduce_mod",
    "QuadValue",
]
