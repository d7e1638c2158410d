"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 decode or verification failure.
``CODEDCACHE_SEED`` overrides the default payload seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction
from typing import List, Optional

from codedcache import rates, verify
from codedcache.combinatorics import binom
from codedcache.delivery import simulate
from codedcache.model import DEFAULT_SEED, Demand, ProblemInstance

EXIT_USAGE = 1
EXIT_FAILURE = 2

CSV_HEADER = ["M", "M_dec", "R_scheme", "R_mn", "R_hull", "R_lb"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def fmt(x: Fraction) -> str:
    return f"{x} ({float(x)!r})"


def dec(x: Fraction) -> str:
    return f"{float(x):.12g}"


def default_seed() -> int:
    env = os.environ.get("CODEDCACHE_SEED")
    return int(env) if env else DEFAULT_SEED


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload, indent=2) if args.json else text)


def cmd_rate(args) -> int:
    K, m, L, j = args.K, args.m, args.L, args.j
    if not 1 <= m <= K - 1:
        raise UsageError(f"--m must lie in 1..{K - 1}")
    if j is not None and L is None:
        raise UsageError("--j requires --L")
    if L is None:
        value = rates.rate(K, m)
        extra = {"worst_L": rates.worst_splits(K, m)}
    elif L in (0, K):
        value, extra = Fraction(1), {"L": L}
    elif j is None:
        value = rates.rate_L(K, m, L)
        extra = {"L": L, "j": rates.optimal_j(K, m, L)}
    else:
        value, extra = rates.rate_with_j(K, m, L, j), {"L": L, "j": j}
    payload = {"K": K, "m": m, "M": str(Fraction(m, K)), "rate": str(value),
               "rate_dec": float(value), **extra}
    _emit(args, payload, fmt(value))
    return 0


def sweep_rows(K: int) -> List[List[str]]:
    pts = rates.achievable_points(K)
    hull = rates.lower_hull(pts)
    scheme = {p.M: p.R for p in pts if p.source == "scheme"}
    grid = sorted({p.M for p in pts})
    rows = []
    for M in grid:
        try:
            mn = str(rates.mn_rate(K, M))
        except ValueError:
            mn = ""
        rows.append([
            str(M), dec(M),
            str(scheme[M]) if M in scheme else "",
            mn,
            str(rates.hull_value(hull, M)),
            str(rates.cutset_lower_bound(K, M)),
        ])
    return rows


def sweep_csv(K: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(sweep_rows(K))
    return buf.getvalue()


def cmd_sweep(args) -> int:
    text = sweep_csv(args.K)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_simulate(args) -> int:
    inst = ProblemInstance(args.K, args.m, args.subfile_bytes)
    try:
        d = Demand.parse(args.demands)
        d.check(args.K)
    except ValueError as exc:
        raise UsageError(str(exc))
    seed = default_seed() if args.seed is None else args.seed
    rep = simulate(inst, d, seed)
    n_ok = sum(rep.success)
    payload = {
        "K": rep.K, "m": rep.m, "demands": rep.demand, "L": rep.L, "j": rep.j,
        "seed": seed, "step_counts": list(rep.step_counts), "messages": rep.n_messages,
        "transmitted_bytes": rep.transmitted_bytes, "rate": str(rep.rate),
        "rate_dec": float(rep.rate), "success": list(rep.success),
    }
    lines = [
        f"K={rep.K} m={rep.m} demands={rep.demand} L={rep.L} j={rep.j} seed={seed}",
        "steps " + "/".join(map(str, rep.step_counts)) + f"  messages {rep.n_messages}",
        f"transmitted {rep.transmitted_bytes} bytes, rate {fmt(rep.rate)}",
        f"decoded {n_ok}/{rep.K} " + ("OK" if rep.all_ok else "FAILED"),
    ]
    _emit(args, payload, "\n".join(lines))
    return 0 if rep.all_ok else EXIT_FAILURE


def cmd_hull(args) -> int:
    hull = rates.lower_hull(rates.achievable_points(args.K))
    payload = {"K": args.K, "vertices": [
        {"M": str(p.M), "R": str(p.R), "source": p.source} for p in hull]}
    text = "\n".join(f"{p.M}\t{p.R}\t{p.source}" for p in hull)
    _emit(args, payload, text)
    return 0


def cmd_fmin(args) -> int:
    if not 4 <= args.m <= 9:
        raise UsageError("--m must lie in 4..9 (K=10 instance)")
    f = rates.fmin_k10(args.m)
    payload = {"K": 10, "m": args.m, "fmin": f, "direct": binom(10, args.m),
               "ratio": str(Fraction(f, binom(10, args.m)))}
    _emit(args, payload, str(f))
    return 0


def cmd_verify(args) -> int:
    K = args.K_max
    if K < 2 or K > 64:
        raise UsageError("--K-max must lie in 2..64")
    checks = [
        lambda: verify.check_message_families(K),
        lambda: verify.check_prop1(K),
        lambda: verify.check_prop2(K),
        lambda: verify.check_rate_bounds(K),
        lambda: verify.check_hull(K),
        lambda: verify.check_decoding(K, samples=args.samples, oracle_max=args.oracle_K_max),
    ]
    results = []
    for check in checks:
        t0 = time.perf_counter()
        res = check()
        results.append((res, time.perf_counter() - t0))
        if not args.json:
            print(f"{res.line()}  {results[-1][1]:.2f}s", flush=True)
    if args.json:
        print(json.dumps([{"name": r.name, "ok": r.ok, "cases": r.cases,
                           "counterexample": r.counterexample, "seconds": round(s, 3)}
                          for r, s in results], indent=2))
    return 0 if all(r.ok for r, _ in results) else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="codedcache", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("rate", help="worst-case or per-split rate")
    sp.add_argument("--K", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--L", type=int)
    sp.add_argument("--j", type=int)
    common(sp)
    sp.set_defaults(func=cmd_rate)

    sp = sub.add_parser("sweep", help="CSV of scheme, baseline, hull and bound over M")
    sp.add_argument("--K", type=int, required=True)
    sp.add_argument("--out", help="output path (stdout when omitted)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("simulate", help="run placement, delivery and decoding")
    sp.add_argument("--K", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--demands", required=True, help="K characters over {A,B}")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--subfile-bytes", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("hull", help="memory-sharing hull vertices")
    sp.add_argument("--K", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_hull)

    sp = sub.add_parser("fmin", help="minimum file size for memory sharing at K=10")
    sp.add_argument("--m", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_fmin)

    sp = sub.add_parser("verify", help="sweep the scheme's properties")
    sp.add_argument("--K-max", type=int, required=True)
    sp.add_argument("--samples", type=int, default=20,
                    help="random demands per (K, m) above K=7")
    sp.add_argument("--oracle-K-max", type=int, default=9,
                    help="largest K cross-checked by GF(2) elimination")
    common(sp)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"codedcache: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
