"""Command-line front end.

Subcommands ``gen``, ``cf``, ``verify`` and ``disc``. Machine-readable
output goes to stdout and diagnostics to stderr. Exit codes: 0 pass,
1 experiment failure, 2 invalid configuration, 3 resource or precision
limit.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import __version__
from .errors import KronHaltonError, ResourceError
from .laurent import RationalSeries, cf_certified, cf_expand, parse_series
from .parallel import set_threads
from .poly import FieldChar, format_poly, parse_poly
from .quality import DEFAULT_DISC_CAP, rational_fields, star_disc_1d, star_disc_exact
from .sequences import HybridSpec, generate, read_points_csv, write_points_csv
from . import theorems as th

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_RESOURCE = 0, 1, 2, 3
DEFAULT_SEED = 2024
VERIFY_TARGETS = ("thm1", "thm2", "thm3", "prop1", "prop2", "lemma3", "lemma4",
                  "example2", "nets", "growth")


def _out(line: str = "") -> None:
    sys.stdout.write(line + "\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _build_spec(args) -> HybridSpec:
    p = FieldChar(args.p)
    series = tuple(parse_series(s, p) for s in (args.kronecker or []))
    bases = tuple(parse_poly(b, p) for b in (args.halton or []))
    label = ";".join([f"kronecker={s}" for s in (args.kronecker or [])]
                     + [f"halton={b}" for b in (args.halton or [])])
    return HybridSpec(series=series, bases=bases, precision=args.prec, label=label)


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    spec = _build_spec(args)
    if args.n < 0:
        raise ValueError("--n must be nonnegative")
    pts = generate(spec, args.n, start=args.start)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_points_csv(pts, fh, spec.describe())
    else:
        write_points_csv(pts, sys.stdout, spec.describe())
    return EXIT_OK


def cmd_cf(args) -> int:
    p = FieldChar(args.p)
    L = parse_series(args.series, p)
    if isinstance(L, RationalSeries):
        cf = cf_expand(L)
    elif args.max_coeff is not None:
        cf = cf_expand(L, args.max_coeff)
    else:
        cf = cf_certified(L, args.terms or 16)
    wanted = args.terms if args.terms is not None else cf.certified_count
    shown = cf.quotients[:wanted]
    K = max((A.deg for A in shown), default=0)
    _out(th.kv_line({"series": args.series, "p": int(p), "A0": cf.a0,
                     "certified": cf.certified_count, "exact": cf.exact,
                     "max_coeff": cf.max_coeff if cf.max_coeff is not None else "all",
                     "K_horizon": K, "horizon": len(shown)}))
    _out("quotients=" + ",".join(format_poly(A) for A in shown))
    for h in range(1, len(shown) + 1):
        P, Q = cf.convergent(h)
        _out(th.kv_line({"h": h, "A": shown[h - 1], "d": cf.d(h), "P": P, "Q": Q}))
    if cf.certified_count < wanted:
        print(f"only {cf.certified_count} of {wanted} quotients certified", file=sys.stderr)
        return EXIT_RESOURCE
    return EXIT_OK


def _series_and_bases(args, default_series="gap2", default_bases=("X",)):
    p = FieldChar(args.p)
    L = parse_series(args.series or default_series, p)
    bases = [parse_poly(b, p) for b in (args.halton or default_bases)]
    return p, L, bases


def cmd_verify(args) -> int:
    target = args.target
    p = FieldChar(args.p)
    if target == "thm1":
        _, L, bases = _series_and_bases(args)
        report = th.thm1_grid(HybridSpec(series=(L,), bases=tuple(bases)),
                              dmax=args.dmax, lmax=args.lmax, Ks=args.blocks)
    elif target == "thm2":
        _, L, bases = _series_and_bases(args)
        nlist = args.nlist or [2 ** k for k in range(4, 13)]
        const = th.THM2_CONSTANT.get((int(p), len(bases)))
        report = th.thm2_scaling(L, bases, nlist, constant=const, cap=args.cap)
    elif target == "thm3":
        report = th.thm3_report(args.level)
    elif target == "prop1":
        L = parse_series(args.series or "gap2", p)
        B = parse_poly(args.B or "1", p)
        report = th.prop1_check(L, B, m_max=args.mmax)
    elif target == "prop2":
        _, L, bases = _series_and_bases(args)
        report = th.prop2_report(L, bases, args.n if args.n is not None else 1024)
    elif target == "lemma3":
        cyl = th.CylinderSpec(tuple(parse_poly(t, p) for t in (args.cyl or "X").split(",")))
        report = th.lemma3_mc(cyl, samples=args.samples, seed=args.seed)
    elif target == "lemma4":
        B = parse_poly(args.B or "X", p)
        report = th.lemma4_mc(B, samples=args.samples, seed=args.seed, r=args.r)
    elif target == "example2":
        report = th.example2(m_max=args.mmax)
    elif target == "nets":
        report = th.nets_report(m_max=min(args.mmax, 16))
    elif target == "growth":
        bases = [parse_poly(b, p) for b in (args.halton or ["X"])]
        hs = args.nlist or [2, 4, 6, 8, 10]
        report = th.growth_study(bases, hs, samples=min(args.samples, 64), p=int(p), seed=args.seed)
    else:  # argparse restricts the choices
        raise ValueError(f"unknown target {target}")
    for line in report.lines():
        _out(line)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            report.write_csv(fh)
    return EXIT_OK if report.passed else EXIT_FAIL


def _disc_fields(pts, cap: int) -> dict:
    if pts.dim == 1:
        value = star_disc_1d(pts)
    else:
        value = star_disc_exact(pts, cap=cap)
    f = rational_fields(value, int(pts.p))
    return {"N": len(pts), "s": pts.dim, "precision": pts.precision,
            "disc": f["value"], "disc_pk": f["pk"], "decimal": f["decimal"], "_value": value}


def cmd_disc(args) -> int:
    rows = []
    if args.infile:
        with open(args.infile) as fh:
            pts, _ = read_points_csv(fh)
        rows.append(_disc_fields(pts, args.cap))
    else:
        spec = _build_spec(args)
        nlist = args.nlist or ([args.n] if args.n is not None else None)
        if not nlist:
            raise ValueError("disc needs --in, --n or --nlist")
        for N in nlist:
            if N < 1:
                raise ValueError("N must be >= 1")
            rows.append(_disc_fields(generate(spec, N), args.cap))
    t_halton = len(args.halton or [])
    for r in rows:
        value = r.pop("_value")
        if args.normalize == "sqrtlog":
            N, p = r["N"], int(args.p)
            r["ND"] = str(N * value)
            r["ratio"] = float(N * value) / (N ** 0.5 * th._log_floor(N, p) ** (t_halton + 1))
        _out(th.kv_line(r))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kronhalton",
        description="Kronecker, Halton and hybrid sequences over F_p with exact checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2, help="field characteristic (prime)")
    common.add_argument("--threads", type=int, default=None, help="cap worker threads")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_spec_flags(sp):
        sp.add_argument("--kronecker", action="append", metavar="SERIES",
                        help="gap2 | rational:P/Q | cf:A1,A2[*] | random:SEED (repeatable)")
        sp.add_argument("--halton", action="append", metavar="POLY",
                        help="Halton base polynomial (repeatable)")
        sp.add_argument("--prec", type=int, default=None, help="digits per coordinate")

    g = sub.add_parser("gen", parents=[common], help="write a CSV point dump")
    add_spec_flags(g)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--start", type=int, default=0)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("cf", parents=[common], help="continued fraction of a series")
    c.add_argument("--series", required=True)
    c.add_argument("--terms", type=int, default=None)
    c.add_argument("--max-coeff", dest="max_coeff", type=int, default=None)
    c.set_defaults(func=cmd_cf)

    v = sub.add_parser("verify", parents=[common], help="run an experiment")
    v.add_argument("target", choices=VERIFY_TARGETS)
    v.add_argument("--series", default=None)
    v.add_argument("--halton", action="append", metavar="POLY")
    v.add_argument("--B", default=None, help="multiplier polynomial")
    v.add_argument("--level", type=int, default=1)
    v.add_argument("--mmax", type=int, default=12)
    v.add_argument("--n", type=int, default=None)
    v.add_argument("--nlist", type=_int_list, default=None)
    v.add_argument("--cyl", default=None, help="cylinder quotients, comma separated")
    v.add_argument("--samples", type=int, default=100_000)
    v.add_argument("--r", type=int, default=3)
    v.add_argument("--dmax", type=int, default=4)
    v.add_argument("--lmax", type=int, default=3)
    v.add_argument("--blocks", type=int, default=8)
    v.add_argument("--cap", type=int, default=DEFAULT_DISC_CAP)
    v.add_argument("--csv", default=None, help="also write the report rows as CSV")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("disc", parents=[common], help="exact star discrepancy")
    add_spec_flags(d)
    d.add_argument("--in", dest="infile", default=None)
    d.add_argument("--n", type=int, default=None)
    d.add_argument("--nlist", type=_int_list, default=None)
    d.add_argument("--normalize", choices=["sqrtlog"], default=None)
    d.add_argument("--cap", type=int, default=DEFAULT_DISC_CAP)
    d.set_defaults(func=cmd_disc)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        set_threads(args.threads)
        return args.func(args)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (KronHaltonError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    finally:
        set_threads(None)


if __name__ == "__main__":
    sys.exit(main())
