"""Command-line entry point: gen, shortcut, tcspanner, verify, bench.

Exit codes: 0 success, 1 verification failed, 2 bad input or parameters,
3 infeasible (certificate on stderr), 4 retries exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from pathlib import Path

from . import generators as gen
from .errors import (
    BadK,
    GraphInputError,
    Infeasible,
    IterationCapExceeded,
    NotAChain,
    NotADag,
    ParameterError,
    PromiseViolated,
    RetryExhausted,
)
from .graph import DiGraph, graph_diameter, verify_shortcut, verify_tc_spanner
from .io import read_edges, read_graph, write_edges, write_graph, write_names
from .params import theorem_cap
from .pipeline import SolveParams, approx_shortcut, approx_tc_spanner, shortcut_from_tcspanner

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_RETRY = 0, 1, 2, 3, 4

KINDS = ("path", "random", "layered", "cyclic", "labelcover")
CSV_HEADER = "graph,n,m,s,d,alpha_d,size,cap,ok,regime,retries,ms,seed"


@dataclass
class RunRecord:
    graph: str
    n: int
    m: int
    s: float
    d: int
    alpha_d: int
    size: int
    cap: float
    ok: int
    regime: str
    retries: int
    ms: int
    seed: int

    def row(self) -> list[str]:
        return [_fmt(v) for v in astuple(self)]


assert ",".join(f.name for f in fields(RunRecord)) == CSV_HEADER


def _fmt(v) -> str:
    if isinstance(v, float):
        return str(int(v)) if v.is_integer() else repr(v)
    return str(v)


def _csv_line(values: list[str]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerow(values)
    return buf.getvalue()


class _Timer:
    def __init__(self, enabled: bool):
        self.enabled = enabled

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = round((time.perf_counter() - self.t0) * 1000) if self.enabled else 0


def solve_record(
    g: DiGraph, name: str, s: float, d: int, alpha_d: int, seed: int, mode: str, timing: bool = True
):
    """Run one solver call; the ok column is re-derived with the verifier."""
    p = SolveParams(s, d, alpha_d, seed)
    solver = {"shortcut": approx_shortcut, "tcspanner": approx_tc_spanner, "via-spanner": shortcut_from_tcspanner}[mode]
    with _Timer(timing) as t:
        out = solver(g, p)
    bound = out.info.get("bound", alpha_d * d)
    check = verify_tc_spanner if mode == "tcspanner" else verify_shortcut
    ok = check(g, out.edges, bound).valid
    rec = RunRecord(
        graph=name,
        n=g.n,
        m=g.m,
        s=s,
        d=d,
        alpha_d=alpha_d,
        size=len(out),
        cap=theorem_cap(g.n, s, d, alpha_d),
        ok=int(ok),
        regime=str(out.info.get("regime", "")),
        retries=int(out.info.get("retries", 0)),
        ms=t.ms,
        seed=seed,
    )
    return out, rec


def _make_graph(kind: str, a: dict) -> tuple[DiGraph, dict[int, str] | None]:
    seed = a.get("seed", 0)
    if kind == "path":
        return gen.gen_path(a["n"]), None
    if kind == "random":
        return gen.gen_random_dag(a["n"], a.get("p", 0.1), seed), None
    if kind == "layered":
        return gen.gen_layered(a["n"], a.get("layers", 4), a.get("p", 0.3), seed), None
    if kind == "cyclic":
        return gen.gen_planted_cycles(a["n"], a.get("p", 0.1), a.get("cycles", 2), a.get("cycle_len", 3), seed), None
    if kind == "labelcover":
        inst = gen.gen_labelcover_instance(
            a.get("delta", 3),
            a.get("labels", 3),
            a.get("density", 0.5),
            seed,
            satisfiable=a.get("satisfiable", False),
            regular=a.get("regular", False),
        )
        return gen.gen_labelcover_graph(inst, a.get("rho", 4))
    raise ParameterError(f"unknown graph kind {kind!r}")


def cmd_gen(args) -> int:
    params = {k: v for k, v in vars(args).items() if v is not None}
    if args.kind not in KINDS:
        raise ParameterError(f"unknown graph kind {args.kind!r}")
    if args.kind != "labelcover" and args.n is None:
        raise ParameterError(f"--n is required for kind {args.kind}")
    g, names = _make_graph(args.kind, params)
    write_graph(args.out, g)
    if names is not None:
        write_names(f"{args.out}.names", names)
    return EXIT_OK


def _run_solver(args, mode: str) -> int:
    g = read_graph(args.graph)
    s = g.n if args.s is None else args.s
    if mode == "shortcut" and args.via_spanner:
        mode = "via-spanner"
    out, rec = solve_record(g, Path(args.graph).name, s, args.d, args.alpha_d, args.seed, mode, not args.no_timing)
    write_edges(args.out, sorted(out.edges))
    sys.stdout.write(_csv_line(rec.row()))
    return EXIT_OK if rec.ok else EXIT_INVALID


def cmd_shortcut(args) -> int:
    return _run_solver(args, "shortcut")


def cmd_tcspanner(args) -> int:
    return _run_solver(args, "tcspanner")


def cmd_verify(args) -> int:
    g = read_graph(args.graph)
    edges = read_edges(args.edges)
    check = verify_tc_spanner if args.mode == "spanner" else verify_shortcut
    report = check(g, edges, args.D)
    if report.valid:
        print(f"valid: size={report.size} diameter={report.worst_dist}")
        return EXIT_OK
    print(f"invalid: {report.reason}; worst pair {report.worst_pair} at distance {report.worst_dist}")
    return EXIT_INVALID


def _expand(cell: dict) -> list[dict]:
    """Cartesian product over list-valued entries of a suite cell."""
    keys = sorted(cell)
    values = [cell[k] if isinstance(cell[k], list) else [cell[k]] for k in keys]
    return [dict(zip(keys, combo)) for combo in itertools.product(*values)]


def _resolve(value, g: DiGraph):
    if value == "n":
        return g.n
    if value == "m":
        return g.m
    if value in ("diam", "half"):
        diam = graph_diameter(g)
        diam = 1 if not math.isfinite(diam) or diam < 1 else int(diam)
        return diam if value == "diam" else max(1, math.ceil(diam / 2))
    return value


def _bench_cell(job: tuple[int, dict, bool]) -> tuple[int, list[str]]:
    index, cell, timing = job
    kind = cell["kind"]
    gen_args = {k: v for k, v in cell.items() if k not in ("kind", "s", "d", "alpha_d", "mode")}
    g, _ = _make_graph(kind, gen_args)
    name = kind + "".join(f":{k}={gen_args[k]}" for k in sorted(gen_args))
    s = _resolve(cell.get("s", "n"), g)
    d = _resolve(cell.get("d", "diam"), g)
    alpha_d = cell.get("alpha_d", 1)
    seed = cell.get("seed", 0)
    try:
        _, rec = solve_record(g, name, s, d, alpha_d, seed, cell.get("mode", "shortcut"), timing)
        return index, rec.row()
    except (PromiseViolated, RetryExhausted, IterationCapExceeded) as exc:
        rec = RunRecord(name, g.n, g.m, s, d, alpha_d, -1, theorem_cap(g.n, s, d, alpha_d), 0,
                        type(exc).__name__, 0, 0, seed)
        return index, rec.row()


def run_bench(suite: dict, jobs: int = 1, timing: bool = True) -> str:
    cells = []
    for cell in suite["cells"]:
        cells.extend(_expand(cell))
    work = [(i, c, timing) for i, c in enumerate(cells)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_bench_cell, work))
    else:
        rows = [_bench_cell(w) for w in work]
    rows.sort(key=lambda r: r[0])
    return CSV_HEADER + "\n" + "".join(_csv_line(r) for _, r in rows)


def cmd_bench(args) -> int:
    suite = json.loads(Path(args.suite).read_text())
    text = run_bench(suite, args.jobs, not args.no_timing)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shortcut-forge", description="Approximate shortcut sets and TC spanners.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a graph")
    g.add_argument("--kind", required=True, help="path, random, layered, cyclic or labelcover")
    g.add_argument("--n", type=int)
    g.add_argument("--p", type=float)
    g.add_argument("--layers", type=int)
    g.add_argument("--cycles", type=int)
    g.add_argument("--cycle-len", dest="cycle_len", type=int)
    g.add_argument("--delta", type=int)
    g.add_argument("--labels", type=int)
    g.add_argument("--rho", type=int)
    g.add_argument("--density", type=float)
    g.add_argument("--satisfiable", action="store_true", default=None)
    g.add_argument("--regular", action="store_true", default=None)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--out", required=True)
    g.set_defaults(func=cmd_gen)

    for name, func, helptext in (
        ("shortcut", cmd_shortcut, "compute an approximate shortcut set"),
        ("tcspanner", cmd_tcspanner, "compute an approximate TC spanner"),
    ):
        c = sub.add_parser(name, help=helptext)
        c.add_argument("graph")
        c.add_argument("--s", type=float, help="size budget (default n)")
        c.add_argument("--d", type=int, required=True)
        c.add_argument("--alpha-d", dest="alpha_d", type=int, default=1)
        c.add_argument("--seed", type=int, default=0)
        c.add_argument("--no-timing", action="store_true", help="report ms as 0 for reproducible rows")
        c.add_argument("-o", "--out", required=True)
        if name == "shortcut":
            c.add_argument("--via-spanner", action="store_true", help="derive the shortcut from a TC spanner")
        else:
            c.set_defaults(via_spanner=False)
        c.set_defaults(func=func)

    v = sub.add_parser("verify", help="check a shortcut or spanner edge file")
    v.add_argument("graph")
    v.add_argument("edges")
    v.add_argument("--mode", choices=("shortcut", "spanner"), default="shortcut")
    v.add_argument("--D", type=float, required=True)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="run a JSON suite and write CSV")
    b.add_argument("suite")
    b.add_argument("-o", "--out", default="-")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--no-timing", action="store_true")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        if exc.lower_bound is not None:
            print(f"certified lower bound {exc.lower_bound} > s={exc.budget}", file=sys.stderr)
        for c in exc.constraints:
            print(c.line(), file=sys.stderr)
        return EXIT_INFEASIBLE
    except PromiseViolated as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (RetryExhausted, IterationCapExceeded) as exc:
        print(f"retries exhausted: {exc}", file=sys.stderr)
        return EXIT_RETRY
    except (ParameterError, GraphInputError, NotADag, BadK, NotAChain, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
