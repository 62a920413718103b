"""Batch verification command line.

One subcommand per identity/lemma; flags take single values or inclusive
ranges "lo..hi".  Grids are the Cartesian product of the per-flag ranges,
filtered by the domain rules; filtered-out points are reported as skipped.
Exit codes: 0 all pass, 1 any identity violation, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction

from . import verify
from ._core import backend_name
from .verify import ALT_Q0, DEFAULT_Q0, VerifyReport


class UsageError(Exception):
    pass


def parse_range(text):
    """"lo..hi" -> [lo..hi]; "v" -> [v].  Also flags single-valued-ness."""
    text = str(text)
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise UsageError("empty range %s" % text)
        return list(range(lo, hi + 1)), False
    return [int(text)], True


def parse_q0(text):
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def _add_common(sp, flags):
    for f in flags:
        sp.add_argument("--" + f, default=_DEFAULTS[f], help="value or range lo..hi")
    sp.add_argument("--report", choices=("json", "text"), default="text")
    sp.add_argument("--out", default=None, help="write the report to this path")
    sp.add_argument("--jobs", type=int, default=1)


_DEFAULTS = {"n": "1", "a": "1", "b": "0", "m": "0", "l": "0", "k": "2"}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="qmorris",
        description="exact verification of q-Dyson / q-Morris constant-term identities",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("verify-dyson", help="Dyson kernel at q=1 vs multinomial")
    _add_common(sp, ["n", "a"])

    sp = sub.add_parser("verify-qdyson", help="q-Dyson kernel vs q-multinomial")
    _add_common(sp, ["n", "a"])

    sp = sub.add_parser("verify-hk", help="refined kernel vs closed form")
    _add_common(sp, ["n", "a", "b", "m", "l", "k"])

    for name in ("verify-vanishing", "verify-extra"):
        sp = sub.add_parser(name, help="root/extra-point checks via interpolation")
        _add_common(sp, ["n", "b", "m", "l", "k"])
        sp.add_argument(
            "--q0", default=str(DEFAULT_Q0), help="rational specialization NUM/DEN"
        )
        sp.add_argument(
            "--q0-alt",
            nargs="?",
            const=str(ALT_Q0),
            default=None,
            help="second specialization pass (default %s)" % ALT_Q0,
        )
        sp.add_argument(
            "--certify",
            default=None,
            metavar="DIR",
            help="run the chain recursion too and write certificate trees here",
        )

    sp = sub.add_parser("verify-prop52", help="boundary summation identity")
    _add_common(sp, ["n", "b", "k"])

    sp = sub.add_parser("verify-expansion", help="composition-sum expansion")
    _add_common(sp, ["n", "a", "b", "m", "l", "k"])

    sp = sub.add_parser("verify-lemma42", help="gap classifier, exhaustive per block")
    sp.add_argument("--s", default="1..4", help="chain length or range")
    _add_common(sp, ["b", "k"])

    sp = sub.add_parser("bench", help="compare the compiled and pure backends")
    sp.add_argument("--repeat", type=int, default=3)
    sp.add_argument("--report", choices=("json", "text"), default="text")
    sp.add_argument("--out", default=None)
    return ap


def _skip(command, params):
    return VerifyReport(command, params, "skip")


def _jobs_for(args):
    cmd = args.command
    jobs = []
    if cmd in ("verify-dyson", "verify-qdyson"):
        nvals, n_single = parse_range(args.n)
        avals, a_single = parse_range(args.a)
        if a_single and avals[0] < 0:
            raise UsageError("exponents a must be nonnegative")
        avals = [v for v in avals if v >= 0]
        fn = verify.check_dyson if cmd == "verify-dyson" else verify.check_qdyson
        for n in nvals:
            if n < 1:
                if n_single:
                    raise UsageError("n must be >= 1")
                jobs.append((_skip, (cmd, {"n": n}), {}))
                continue
            for a in itertools.product(avals, repeat=n + 1):
                jobs.append((fn, (a,), {}))
        return jobs

    if cmd == "verify-hk":
        grids = {f: parse_range(getattr(args, f))[0] for f in "nabmlk"}
        for n, a, b, m, l, k in itertools.product(
            grids["n"], grids["a"], grids["b"], grids["m"], grids["l"], grids["k"]
        ):
            params = {"n": n, "a": a, "b": b, "m": m, "l": l, "k": k}
            if n < 1 or not (0 <= m <= n and 0 <= l <= n) or a < (1 if m >= 1 else 0):
                jobs.append((_skip, (cmd, params), {}))
            else:
                jobs.append((verify.check_hk, (n, a, b, m, l, k), {}))
        return jobs

    if cmd in ("verify-vanishing", "verify-extra"):
        q0s = [parse_q0(args.q0)]
        if args.q0_alt is not None:
            q0s.append(parse_q0(args.q0_alt))
        grids = {}
        single = {}
        for f in "nbmlk":
            grids[f], single[f] = parse_range(getattr(args, f))
        fn = verify.check_vanishing if cmd == "verify-vanishing" else verify.check_extra
        for n, b, m, l, k in itertools.product(
            grids["n"], grids["b"], grids["m"], grids["l"], grids["k"]
        ):
            params = {"n": n, "b": b, "m": m, "l": l, "k": k}
            if k <= b + 1:
                if single["k"] and single["b"]:
                    raise UsageError(
                        "%s needs k > b+1 (got k=%d, b=%d)" % (cmd, k, b)
                    )
                jobs.append((_skip, (cmd, params), {}))
                continue
            if n < 1 or not (0 <= m < n and 0 <= l < n):
                jobs.append((_skip, (cmd, params), {}))
                continue
            jobs.append((fn, (n, b, m, l, k), {"q0s": tuple(q0s), "certify_dir": args.certify}))
        return jobs

    if cmd == "verify-prop52":
        for n, b, k in itertools.product(
            parse_range(args.n)[0], parse_range(args.b)[0], parse_range(args.k)[0]
        ):
            params = {"n": n, "b": b, "k": k}
            if not k >= b + 1 >= 1:
                jobs.append((_skip, (cmd, params), {}))
            else:
                jobs.append((verify.check_prop52, (n, b, k), {}))
        return jobs

    if cmd == "verify-expansion":
        grids = {f: parse_range(getattr(args, f))[0] for f in "nabmlk"}
        for n, a, b, m, l, k in itertools.product(
            grids["n"], grids["a"], grids["b"], grids["m"], grids["l"], grids["k"]
        ):
            params = {"n": n, "a": a, "b": b, "m": m, "l": l, "k": k}
            if n < 1 or not (0 <= m <= n and 0 <= l <= n) or a < (1 if m >= 1 else 0):
                jobs.append((_skip, (cmd, params), {}))
            else:
                jobs.append((verify.check_expansion, (n, a, b, m, l, k), {}))
        return jobs

    if cmd == "verify-lemma42":
        for s, k, b in itertools.product(
            parse_range(args.s)[0], parse_range(args.k)[0], parse_range(args.b)[0]
        ):
            if s < 1:
                jobs.append((_skip, (cmd, {"s": s, "k": k, "b": b}), {}))
            else:
                jobs.append((verify.check_lemma42, (s, k, b), {}))
        return jobs

    raise UsageError("unknown command %r" % cmd)


def emit(reports, args):
    if args.report == "json":
        text = json.dumps([r.to_obj() for r in reports], indent=1)
    else:
        text = "\n".join(r.line() for r in reports)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "bench":
        from .bench import run_bench

        results = run_bench(repeat=args.repeat)
        if args.report == "json":
            text = json.dumps(results, indent=1)
        else:
            lines = ["backend comparison (active: %s)" % backend_name()]
            for row in results["workloads"]:
                lines.append(
                    "%-24s pure %8.1f ms   compiled %s   speedup %s"
                    % (
                        row["name"],
                        row["pure_ms"],
                        "%8.1f ms" % row["compiled_ms"] if row["compiled_ms"] else "     n/a",
                        "%.1fx" % row["speedup"] if row["speedup"] else "n/a",
                    )
                )
            text = "\n".join(lines)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
        return 0
    try:
        jobs = _jobs_for(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    reports = verify.run_grid(jobs, nworkers=args.jobs)
    emit(reports, args)
    return verify.exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
