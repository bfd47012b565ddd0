"""Command line: ``ccbp bounds``, ``ccbp simulate`` and ``ccbp sweep``.

Exit codes: 0 ok, 2 bound violated, 3 verification failure, 4 illegal
algorithm move, 5 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import bounds
from .algorithms import BUILTIN_SPECS, parse_algorithm
from .packing import IllegalPlacement
from .procedures import ProcedureError
from .strategies import (
    STRATEGIES,
    InvariantError,
    VerificationError,
    auto_strategy,
    compatible,
    n_min,
    run_strategy,
)

EXIT_OK = 0
EXIT_BOUND = 2
EXIT_VERIFY = 3
EXIT_ILLEGAL = 4
EXIT_USAGE = 5

FORMATS = ("json", "csv", "md")
SWEEP_COLUMNS = ("k", "N", "algorithm", "ratio", "bound", "margin", "status", "chosen")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    k: int
    N: int
    algorithm: str
    strategy: str

    @classmethod
    def build(cls, k: int, N: int | None, algorithm: str, strategy: str | None = None,
              seed: int | None = None) -> "RunConfig":
        if k < 2:
            raise UsageError("k must be at least 2")
        strategy = strategy or auto_strategy(k)
        if strategy not in STRATEGIES:
            raise UsageError(f"unknown strategy {strategy!r}")
        if not compatible(strategy, k):
            raise UsageError(f"strategy {strategy} does not apply to k={k}")
        name = algorithm.strip()
        if name == "random-fit" and seed is not None:
            name = f"random-fit:{seed}"
        try:
            spec = parse_algorithm(name)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        N = default_n(strategy, k) if N is None else N
        if N < n_min(strategy, k):
            raise UsageError(f"N={N} is below the minimum {n_min(strategy, k)} for strategy {strategy}")
        if strategy == "general" and N % k:
            raise UsageError(f"strategy general needs N to be a multiple of k={k}")
        return cls(k, N, str(spec), strategy)


def default_n(strategy: str, k: int) -> int:
    return max(n_min(strategy, k), 30 * k)


def dump_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _md(header, rows) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


# bounds

def cmd_bounds(args) -> int:
    ks = args.k or list(range(2, 11))
    if any(k < 2 for k in ks):
        raise UsageError("k must be at least 2")
    results = []
    for k in ks:
        main = bounds.closed_form(k) if args.closed_form else bounds.bound_for(k)
        results.append((k, main, bounds.closed_form(k)))
    converged = all(r.width <= bounds.DEFAULT_TOL for _, r, _ in results)
    if args.format == "json":
        text = dump_json([{"k": k, "bound": r.to_json(), "closed_form": t.to_json()}
                          for k, r, t in results])
    else:
        header = ("k", "bound", "method", "closed_form")
        rows = [(k, r.decimal(), r.method, t.decimal()) for k, r, t in results]
        text = _csv(header, rows) if args.format == "csv" else _md(header, rows)
    _emit(text, args.out)
    return EXIT_OK if converged else 1


# simulate

def simulate(config: RunConfig):
    """Run one configuration; returns ``(exit code, certificate or None, message)``."""
    alg = parse_algorithm(config.algorithm).build()
    try:
        cert = run_strategy(config.k, config.N, alg, config.strategy)
    except IllegalPlacement as exc:
        return EXIT_ILLEGAL, None, f"illegal algorithm move: {exc}"
    except (VerificationError, InvariantError, ProcedureError, ZeroDivisionError) as exc:
        return EXIT_VERIFY, None, f"verification failure: {exc}"
    if not cert.meets_bound:
        return EXIT_BOUND, cert, (f"certified ratio {cert.ratio} is below the bound "
                                  f"{cert.bound.decimal()}")
    return EXIT_OK, cert, ""


def cmd_simulate(args) -> int:
    config = RunConfig.build(args.k, args.n, args.alg, args.strategy, args.seed)
    code, cert, msg = simulate(config)
    if cert is not None:
        if args.format == "json":
            text = dump_json(cert.to_json())
        else:
            header = ("k", "N", "algorithm", "strategy", "chosen", "ratio", "bound", "meets_bound")
            row = (cert.k, cert.N, cert.algorithm, cert.strategy, cert.chosen.label,
                   f"{cert.ratio.numerator}/{cert.ratio.denominator}", cert.bound.decimal(),
                   cert.meets_bound)
            text = _csv(header, [row]) if args.format == "csv" else _md(header, [row])
        _emit(text, args.out)
    if msg:
        print(f"ccbp: {msg}", file=sys.stderr)
    return code


# sweep

def _parse_n(token: str, strategy: str, k: int) -> int:
    if token == "auto":
        return default_n(strategy, k)
    if token.endswith("min"):
        mult = int(token[:-3] or 1)
        return mult * n_min(strategy, k)
    return int(token)


def _sweep_one(job: tuple[int, int, str, str]) -> tuple[int, list]:
    k, N, alg, strategy = job
    code, cert, msg = simulate(RunConfig(k, N, alg, strategy))
    if cert is None:
        return code, [k, N, alg, "", "", "", msg, ""]
    ratio = cert.ratio
    return code, [k, N, alg, f"{ratio.numerator}/{ratio.denominator}", cert.bound.decimal(),
                  f"{cert.margin:.6f}", "ok" if code == EXIT_OK else msg, cert.chosen.label]


def sweep_jobs(ks, ns, algs, strategy=None, seed=None) -> list[tuple[int, int, str, str]]:
    if not algs:
        raise UsageError("empty algorithm list")
    if not ks:
        raise UsageError("empty k list")
    jobs = []
    for k, n_token, alg in itertools.product(ks, ns, algs):
        strat = strategy or auto_strategy(k)
        try:
            N = _parse_n(n_token, strat, k)
        except ValueError:
            raise UsageError(f"bad N value {n_token!r}") from None
        cfg = RunConfig.build(k, N, alg, strat, seed)
        jobs.append((cfg.k, cfg.N, cfg.algorithm, cfg.strategy))
    return jobs


def run_sweep(jobs, workers: int = 1) -> tuple[int, list[list]]:
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_one, jobs))
    else:
        results = [_sweep_one(j) for j in jobs]
    code = max((c for c, _ in results), default=EXIT_OK)
    return code, [row for _, row in results]


def cmd_sweep(args) -> int:
    jobs = sweep_jobs(args.k or list(range(2, 11)), args.n or ["auto"],
                      args.alg if args.alg is not None else BUILTIN_SPECS,
                      args.strategy, args.seed)
    code, rows = run_sweep(jobs, args.jobs)
    if args.format == "json":
        text = dump_json([dict(zip(SWEEP_COLUMNS, r)) for r in rows])
    elif args.format == "md":
        text = _md(SWEEP_COLUMNS, rows)
    else:
        text = _csv(SWEEP_COLUMNS, rows)
    _emit(text, args.out)
    return code


def _int_list(text: str) -> list[int]:
    """``5``, ``2..10`` or ``2,3,4``."""
    out = []
    for part in text.split(","):
        lo, sep, hi = part.partition("..")
        out.extend(range(int(lo), int(hi) + 1) if sep else [int(lo)])
    return out


def _jobs_default() -> int:
    try:
        return max(1, int(os.environ.get("CCBP_JOBS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ccbp", description="Adaptive adversaries for online bin packing "
                                         "with a cardinality constraint.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bounds", help="lower-bound table")
    b.add_argument("--k", type=_int_list, action="extend", help="k values (default 2..10)")
    b.add_argument("--closed-form", action="store_true", help="use the closed-form root only")
    b.add_argument("--format", choices=FORMATS, default="md")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bounds)

    s = sub.add_parser("simulate", help="play one adversary and write its certificate")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, help="first-phase item count (default max(N_min, 30k))")
    s.add_argument("--alg", required=True, help="e.g. first-fit or random-fit:7")
    s.add_argument("--strategy", choices=sorted(STRATEGIES))
    s.add_argument("--seed", type=int, help="seed for random-fit given without one")
    s.add_argument("--format", choices=FORMATS, default="json")
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    w = sub.add_parser("sweep", help="cartesian product of runs as a table")
    w.add_argument("--k", type=_int_list, action="extend")
    w.add_argument("--n", nargs="+", help="integers, 'auto', or multiples of N_min like '2min'")
    w.add_argument("--alg", nargs="*", help=f"default: {' '.join(BUILTIN_SPECS)}")
    w.add_argument("--strategy", choices=sorted(STRATEGIES))
    w.add_argument("--seed", type=int)
    w.add_argument("--jobs", type=int, default=_jobs_default())
    w.add_argument("--format", choices=FORMATS, default="csv")
    w.add_argument("--out")
    w.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ccbp: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"ccbp: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
