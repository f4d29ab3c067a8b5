"""Command-line driver: one pipeline stage per subcommand, deterministic reports."""
from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .exactnum import is_prime

EXIT_USAGE = 64

COMMANDS = ("eigentable", "build-w", "check-smooth", "check-free", "discriminant", "hensel",
            "cover-check", "cube-check", "relation-search", "surfacex", "run-all")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


@dataclass
class RunConfig:
    command: str
    primes: tuple = ()
    seed: int = 0
    k: int | None = None
    bound: int | None = None
    samples: int | None = None
    charts: tuple = ()
    input: str | None = None
    output: str | None = None
    threads: int = 1
    extra: dict = field(default_factory=dict)

    def lines(self) -> list[str]:
        out = []
        for key, val in asdict(self).items():
            if key == "extra":
                for k2, v2 in sorted(val.items()):
                    out.append(f"config.{k2} = {_fmt(v2)}")
            elif val not in (None, (), []):
                out.append(f"config.{key} = {_fmt(val)}")
        return out


def _fmt(v) -> str:
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt(x) for x in v)
    return str(v)


@dataclass
class Report:
    config: RunConfig
    sections: list = field(default_factory=list)  # (title, lines)
    values: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    exit_code: int = 0

    def add(self, title: str, lines):
        self.sections.append((title, [str(l) for l in lines]))

    def text(self, with_timings: bool = False) -> str:
        out = [f"# fpp {self.config.command}"]
        out += self.config.lines()
        for title, lines in self.sections:
            out.append(f"## {title}")
            out += lines
        if with_timings:
            out.append("## timings")
            out += [f"{k}: {v:.2f}s" for k, v in self.timings.items()]
        out.append("## result")
        for k, v in self.values.items():
            out.append(f"{k}={_fmt(v)}")
        out.append(f"exit_code={self.exit_code}")
        return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# argument helpers


def _primes_arg(text: str, start: int = 32003, modulus: int = 1) -> tuple:
    """'3' means the first three suitable primes from ``start``; 'a,b' is a list."""
    text = str(text).strip()
    if "," in text or int(text) > 64:
        ps = tuple(int(x) for x in text.split(",") if x.strip())
        bad = [p for p in ps if not is_prime(p)]
        if bad:
            raise UsageError(f"not prime: {bad}")
        return ps
    n, out, q = int(text), [], start
    while len(out) < n:
        if is_prime(q) and (q - 1) % modulus == 0:
            out.append(q)
        q += 1
    return tuple(out)


def _number(text: str):
    try:
        return Fraction(text) if "/" in text else int(text)
    except ValueError:
        raise UsageError(f"not a rational number: {text!r}")


def _charts_arg(text: str) -> tuple:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if len(tok) != 3 or not tok.isdigit() or sorted(set(tok)) != sorted(tok) or any(c not in "123456" for c in tok):
            raise UsageError(f"bad chart {tok!r}; use three distinct indices like 124")
        out.append(tuple(sorted(int(c) for c in tok)))
    return tuple(out)


def _read_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key=value")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def _params(args):
    from .familylab import W_GR
    from .grassmann import PParams, TwoParam

    if getattr(args, "wgr", False):
        return W_GR
    if getattr(args, "params", None):
        vals = [_number(x) for x in args.params.split(",")]
        if len(vals) != 7:
            raise UsageError("--params needs seven values p0,...,p6")
        return PParams(tuple(vals))
    return TwoParam(_number(args.p0), _number(args.p3))


# ---------------------------------------------------------------------------
# subcommands


def cmd_eigentable(args, cfg, rep):
    from .grassmann import tables

    rep.raw = tables()
    return 0


def cmd_build_w(args, cfg, rep):
    from .familylab import equations_mod_p
    from .grassmann import family_equations
    from .multipoly import write_poly_text

    params = _params(args)
    if cfg.primes:
        eqs = equations_mod_p(params, cfg.primes[0])
    else:
        eqs = family_equations(params)
    rep.raw = write_poly_text(eqs, names=[f"e{i}" for i in range(1, 8)], header=f"W for {params}")
    return 0


def _verdict_out(rep, v, title="verdict"):
    rep.add(title, v.lines())
    rep.values["status"] = v.status
    if v.primes:
        rep.values["primes"] = v.primes
    rep.values["seed"] = rep.config.seed
    return v.exit_code


def cmd_check_smooth(args, cfg, rep):
    from .familylab import check_smooth

    primes = cfg.primes or ((23, 47) if args.wgr else (32003, 32009))
    cfg.primes = primes
    v = check_smooth(_params(args), primes, seeds=args.minor_seeds, charts=cfg.charts or None,
                     seed=cfg.seed, threads=cfg.threads)
    return _verdict_out(rep, v)


def cmd_check_free(args, cfg, rep):
    from .familylab import check_free

    primes = cfg.primes or (32003, 32009)
    cfg.primes = primes
    v = check_free(_params(args), primes, loci=args.loci)
    return _verdict_out(rep, v)


def cmd_discriminant(args, cfg, rep):
    from .familylab import DEGREE8, ReconstructFailed, discriminant_specialized, squarefree_root_count
    from .henselsolve import PositiveDimensional

    primes = _primes_arg(args.primes or "2", 32003, 7)
    cfg.primes = primes
    try:
        res = discriminant_specialized(_number(args.p3), primes, seed=cfg.seed, check_prime=args.check_prime)
    except (ReconstructFailed, PositiveDimensional) as exc:
        rep.add("discriminant", [f"{type(exc).__name__}: {exc}"])
        rep.values["status"] = "inconclusive"
        return 2
    coeffs = res.coefficients()
    lines = [f"p0-polynomial: {res.specialized}", f"degree: {len(coeffs) - 1}",
             f"palindromic: {res.is_palindromic()}",
             f"distinct roots: {squarefree_root_count(coeffs)}"]
    if res.excluded is not None:
        lines.append(f"excluded critical values: {res.excluded}")
    rep.add("discriminant", lines + res.details)
    rep.values["coefficients"] = coeffs
    rep.values["primes"] = primes
    rep.values["seed"] = cfg.seed
    if _number(args.p3) == 1:
        g = lambda c: [Fraction(x, c[-1]) for x in c]
        match = g(coeffs) == g(list(DEGREE8))
        rep.values["matches_published"] = match
        rep.values["status"] = "pass" if match else "fail"
        return 0 if match else 1
    rep.values["status"] = "pass"
    return 0


def cmd_hensel(args, cfg, rep):
    from .henselsolve import run_planted

    res = run_planted(args.trials, cfg.seed, p=args.prime, height=cfg.bound or 10**3, method=args.method)
    fails = [r for r in res if not r[1]]
    rep.add("planted systems", [f"trial {t}: {'ok' if ok else 'FAILED'} ({note})" for t, ok, note in res])
    rep.values.update(trials=len(res), failures=len(fails), status="pass" if not fails else "fail")
    return 0 if not fails else 1


def cmd_cube_check(args, cfg, rep):
    from .henselsolve import cube_constraint_table

    if args.prime < 5 or not is_prime(args.prime):
        raise UsageError("--prime must be a prime >= 5 (the relations have coefficients 3 and 9)")
    checked, bad = cube_constraint_table(args.prime)
    rep.add("cube constraints", [f"pairs checked over F_{args.prime}: {checked}", f"disagreements: {bad}"])
    rep.values.update(checked=checked, disagreements=bad, status="pass" if bad == 0 else "fail")
    return 0 if bad == 0 else 1


def cmd_cover_check(args, cfg, rep):
    from .coverlab import KeyEquationFails, cyclic_sigma, toy_corpus, verify_lift_consistency
    from .multipoly import GF, parse_poly

    if args.f:
        F = GF(args.prime)
        V = tuple(args.vars.split(","))
        cases = [("user", parse_poly(args.f, V, F), parse_poly(args.d, V, F), None, None)]
        sigma = cyclic_sigma(V[:3])
    else:
        cases = toy_corpus(args.prime)
        sigma = cyclic_sigma()
    lines, bad = [], 0
    for name, f, d, bg, expect in cases:
        try:
            v = verify_lift_consistency(f, d, sigma, bg)
            got = v.ok
            note = v.status
        except KeyEquationFails as exc:
            got, note = False, f"rejected ({exc})"
        ok = got if expect is None else got == expect
        bad += not ok
        lines.append(f"{name}: {note}{'' if ok else '  UNEXPECTED'}")
    rep.add("cover algebra", lines)
    rep.values.update(cases=len(cases), unexpected=bad, status="pass" if not bad else "fail")
    return 0 if not bad else 1


def cmd_relation_search(args, cfg, rep):
    from .coverlab import BudgetExhausted, decomposable_relation_search
    from .groebner import buchberger
    from .multipoly import GF, parse_poly, read_poly_text

    p = cfg.primes[0] if cfg.primes else 32003
    F = GF(p)
    if cfg.input:
        with open(cfg.input) as fh:
            pf = read_poly_text(fh.read(), F)
        groups = {"e": [], "w": [], "v": [], "bg": []}
        for nm, g in zip(pf.names, pf.polys):
            key = "".join(c for c in (nm or "") if c.isalpha())
            if key not in groups:
                raise UsageError(f"polynomial name {nm!r}: use e*, w*, v* (weight w^2) or bg*")
            groups[key].append(g)
        E, W, W2, bgs = groups["e"], groups["w"], groups["v"], groups["bg"]
        vars = pf.vars
    else:
        # built-in demo: a planted s1 s2 = s3 s4 over a plane cubic
        vars = ("x", "y", "z")
        P = lambda s: parse_poly(s, vars, F)
        r1, r2, r1p, r2p = P("x+2*y"), P("y-z"), P("3*x+z"), P("x-y+z")
        E = [r1 * r2p, r2 * r1p, P("x^2+y*z"), P("z^2-3*x*y")]
        W2 = [r1 * r2, P("x*z+y^2")]
        W = [r1p * r2p, P("y*z-2*x^2")]
        bgs = [P("x^3 + y^3 + z^3 - 2*x*y*z")]
    bg = buchberger(bgs, vars=vars) if bgs else None
    try:
        rels = decomposable_relation_search(E, W, W2, bg, sample_budget=cfg.samples or 2000, prime=p, seed=cfg.seed)
    except BudgetExhausted as exc:
        rep.add("relations", [f"budget exhausted: {exc}"])
        rep.values["status"] = "inconclusive"
        return 2
    rep.add("relations", [str(r) for r in rels] or ["none"])
    rep.values.update(found=len(rels), prime=p, status="pass")
    return 0


def cmd_surfacex(args, cfg, rep):
    from . import surfacex as sx

    text = None
    if cfg.input:
        with open(cfg.input) as fh:
            text = fh.read()
    try:
        data = sx.load_x(text)
    except sx.DataCorrupt as exc:
        rep.add("surface X", [f"DataCorrupt: {exc}"])
        rep.values["status"] = "fail"
        return 1
    if args.action == "export":
        rep.raw = sx.export(data)
        return 0
    if args.action == "verify":
        v = sx.verify(data, hilbert=False)
        return _verdict_out(rep, v)
    primes = cfg.primes or (17, 23)
    cfg.primes = primes
    from .verdict import combine

    vs = []
    for q in primes:
        prof, v = sx.hilbert_check_x(q, args.n_max, data)
        vs.append(v)
    return _verdict_out(rep, combine(vs))


def cmd_run_all(args, cfg, rep):
    """quick: tables, freeness, X point checks, Hensel corpus; full adds the long checks."""
    from .familylab import check_free, check_smooth, discriminant_specialized, numerical_invariants, DEGREE8
    from .grassmann import PParams, TwoParam, tables
    from .henselsolve import cube_constraint_table, run_planted
    from . import surfacex as sx
    from .verdict import FAIL, PASS, Verdict

    results = []

    def record(name, v: Verdict):
        results.append((name, v))
        rep.add(name, v.lines())

    record("eigentable", Verdict(PASS, details=[f"{len(tables().splitlines())} lines"]))
    nums = numerical_invariants("W") | {f"S.{k}": v for k, v in numerical_invariants("S").items()}
    record("numerology", Verdict(PASS, details=[f"{k}={v}" for k, v in nums.items()]))
    record("check-free (2,3)", check_free(TwoParam(2, 3), (32003, 32009)))
    text = None
    if cfg.input:
        with open(cfg.input) as fh:
            text = fh.read()
    try:
        data = sx.load_x(text)
        record("surfacex", sx.verify(data))
    except sx.DataCorrupt as exc:
        data = None
        record("surfacex", Verdict(FAIL, witness=f"DataCorrupt: {exc}"))
    res = run_planted(args.trials, cfg.seed)
    fails = [r for r in res if not r[1]]
    record("hensel corpus", Verdict(PASS if not fails else FAIL, (19,), witness=fails[0] if fails else None,
                                    details=[f"{len(res)} planted systems, {len(fails)} failures"], seeds=(cfg.seed,)))
    checked, bad = cube_constraint_table(5)
    record("cube constraints", Verdict(PASS if not bad else FAIL, (5,), witness=bad or None,
                                       details=[f"{checked} pairs, {bad} disagreements"]))
    if args.profile == "full":
        record("check-smooth (2,3)", check_smooth(TwoParam(2, 3), (32003, 32009), seed=cfg.seed, threads=cfg.threads))
        ps = _primes_arg("2", 32003, 7)
        res = discriminant_specialized(1, ps, seed=cfg.seed)
        c = res.coefficients()
        ok = [Fraction(x, c[-1]) for x in c] == [Fraction(x, DEGREE8[-1]) for x in DEGREE8]
        record("discriminant p3=1", Verdict(PASS if ok else FAIL, ps, witness=None if ok else c,
                                            details=[str(res.specialized)], seeds=(cfg.seed,)))
        if data is not None:
            for q in (17, 23):
                record(f"hilbert X mod {q}", sx.hilbert_check_x(q, 6, data)[1])
    worst = 0
    for name, v in results:
        rep.values[name.replace(" ", "_")] = v.status
        worst = max(worst, {0: 0, 2: 1, 1: 2}[v.exit_code])
    code = {0: 0, 1: 2, 2: 1}[worst]
    rep.values["status"] = {0: "pass", 1: "fail", 2: "inconclusive"}[code]
    return code


HANDLERS = {
    "eigentable": cmd_eigentable, "build-w": cmd_build_w, "check-smooth": cmd_check_smooth,
    "check-free": cmd_check_free, "discriminant": cmd_discriminant, "hensel": cmd_hensel,
    "cover-check": cmd_cover_check, "cube-check": cmd_cube_check, "relation-search": cmd_relation_search,
    "surfacex": cmd_surfacex, "run-all": cmd_run_all,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, allow_abbrev=False)
    common.add_argument("--config", help="key=value file; flags override it")
    common.add_argument("--primes", help="comma-separated primes (or a count for discriminant)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="also write the report to this path")
    common.add_argument("--input", help="input file in the polynomial text format")
    common.add_argument("--timings", action="store_true", help="append wall-clock timings (not byte-stable)")

    params = _Parser(add_help=False, allow_abbrev=False)
    params.add_argument("--p0", default="2")
    params.add_argument("--p3", default="3")
    params.add_argument("--params", help="seven values p0,...,p6 of the display form")
    params.add_argument("--wgr", action="store_true", help="use the parameters of W_Gr")

    top = _Parser(prog="fpp", allow_abbrev=False, description="Verification pipeline for the fake projective plane construction.")
    sub = top.add_subparsers(dest="command", parser_class=_Parser)
    sub.add_parser("eigentable", parents=[common], allow_abbrev=False)
    sub.add_parser("build-w", parents=[common, params], allow_abbrev=False)
    p = sub.add_parser("check-smooth", parents=[common, params], allow_abbrev=False)
    p.add_argument("--charts", help="comma-separated charts, e.g. 124,356")
    p.add_argument("--minor-seeds", type=int, default=3)
    p = sub.add_parser("check-free", parents=[common, params], allow_abbrev=False)
    p.add_argument("--loci", choices=("display", "eigen", "both"), default="both")
    p = sub.add_parser("discriminant", parents=[common], allow_abbrev=False)
    p.add_argument("--p3", default="1")
    p.add_argument("--check-prime", type=int, help="independent prime (1 mod 7) that must agree")
    p = sub.add_parser("hensel", parents=[common], allow_abbrev=False)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--prime", type=int, default=19)
    p.add_argument("--bound", type=int, default=10**3)
    p.add_argument("--method", choices=("linear", "doubling"), default="linear")
    p = sub.add_parser("cover-check", parents=[common], allow_abbrev=False)
    p.add_argument("--prime", type=int, default=10009)
    p.add_argument("--f", help="f as a polynomial in --vars (first three are cycled)")
    p.add_argument("--d")
    p.add_argument("--vars", default="a,b,c")
    p = sub.add_parser("cube-check", parents=[common], allow_abbrev=False)
    p.add_argument("--prime", type=int, default=5)
    p = sub.add_parser("relation-search", parents=[common], allow_abbrev=False)
    p.add_argument("--samples", type=int, default=2000)
    p = sub.add_parser("surfacex", parents=[common], allow_abbrev=False)
    p.add_argument("action", choices=("verify", "export", "hilbert"))
    p.add_argument("--n-max", type=int, default=6)
    p = sub.add_parser("run-all", parents=[common], allow_abbrev=False)
    p.add_argument("--profile", choices=("quick", "full"), default="quick")
    p.add_argument("--trials", type=int, default=100)
    return top


def _config_from(args) -> RunConfig:
    threads = int(os.environ.get("FPP_THREADS", "1") or 1)
    primes = ()
    if args.primes and args.command != "discriminant":
        primes = _primes_arg(args.primes)
    charts = _charts_arg(args.charts) if getattr(args, "charts", None) else ()
    extra = {}
    for k in ("p0", "p3", "check_prime", "params", "wgr", "loci", "trials", "prime", "method", "profile", "action", "n_max",
              "minor_seeds", "f", "d", "vars"):
        v = getattr(args, k, None)
        if v not in (None, False):
            extra[k] = v
    return RunConfig(args.command, primes, args.seed, None, getattr(args, "bound", None),
                     getattr(args, "samples", None), charts, args.input, args.out, max(threads, 1), extra)


def _usage_text(exc) -> str:
    msg = str(exc)
    if msg.startswith("usage"):
        return msg + "\n"
    return build_parser().format_usage() + f"fpp: error: {msg}\n"


def dispatch(argv) -> tuple[int, str]:
    parser = build_parser()
    argv = list(argv)
    try:
        if not argv or argv[0] not in COMMANDS:
            if argv and argv[0] in ("--help", "-h"):
                return 0, parser.format_help()
            raise UsageError(parser.format_usage() + f"fpp: error: unknown command {argv[0] if argv else '(none)'!r}; "
                             f"choose from {', '.join(COMMANDS)}")
        args = parser.parse_args(argv)
        if args.config:
            sub = parser._subparsers._group_actions[0].choices[args.command]
            file_vals = _read_config(args.config)
            known = {a.dest for a in sub._actions}
            unknown = set(file_vals) - known
            if unknown:
                raise UsageError(f"unknown keys in {args.config}: {sorted(unknown)}")
            sub.set_defaults(**file_vals)
            args = parser.parse_args(argv)
            for a in sub._actions:
                if a.type is not None and isinstance(getattr(args, a.dest, None), str) and a.dest in file_vals:
                    setattr(args, a.dest, a.type(getattr(args, a.dest)))
        cfg = _config_from(args)
    except UsageError as exc:
        return EXIT_USAGE, _usage_text(exc)
    rep = Report(cfg)
    rep.raw = None
    t0 = time.perf_counter()
    try:
        code = HANDLERS[args.command](args, cfg, rep)
    except UsageError as exc:
        return EXIT_USAGE, _usage_text(exc)
    rep.timings[args.command] = time.perf_counter() - t0
    rep.exit_code = code
    text = rep.raw if rep.raw is not None else rep.text(args.timings)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    return code, text


def main(argv=None) -> int:
    code, text = dispatch(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if code == EXIT_USAGE else sys.stdout
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
