"""Command-line front end: ``bcol solve|generate|validate|bounds|bench``.

Exit codes:

    0  success
    1  validate: the coloring is not a b-coloring
    2  bad command-line usage
    3  an input file could not be parsed
    4  the fixings of a model are contradictory
    5  the time limit passed without any solution
    6  the run halted (solver or memory failure)
    7  no work: the bench directory holds no instance files
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .coloring import ColoringError, b_vertices, is_proper, read_coloring, write_coloring
from .constructive import RclParams
from .dimacs import DimacsError, read_dimacs, save_dimacs, write_dimacs
from .generators import GENERATORS, generate
from .graph import density, m_bound
from .mip.model import InfeasibleFixingError
from .multistart import default_it_max, default_workers
from .report import (
    CSV_COLUMNS,
    MODES,
    RunConfig,
    bench,
    groups_csv,
    reports_csv,
    run_mode,
    write_bench,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_INFEASIBLE_FIXING = 4
EXIT_NO_SOLUTION = 5
EXIT_HALTED = 6
EXIT_NO_WORK = 7

BACKEND_FLAGS = {"internal": "internal-bb", "lp-export": "lp-export", "highs": "highs"}


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=MODES, default="msbcol")
    p.add_argument("--alpha", type=float, default=0.0, help="interval RCL parameter (default 0.00)")
    p.add_argument("--beta", type=float, default=0.10, help="cardinality RCL fraction (default 0.10)")
    p.add_argument("--iterations", type=int, default=None, help="multi-start iterations (default: size formula)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None, help="worker processes (default: all cores)")
    p.add_argument("--time-limit", type=float, default=3600.0, help="solver limit in seconds (default 3600)")
    p.add_argument("--backend", choices=sorted(BACKEND_FLAGS), default="internal")
    p.add_argument("--workdir", default=".", help="where lp-export writes model files")
    p.add_argument("--solution-file", default=None, help="external solution to import (lp-export)")
    p.add_argument("--no-early-exit", action="store_true", help="run every iteration even after reaching m(G)")


def _config(args) -> RunConfig:
    return RunConfig(
        rcl=RclParams(args.alpha, args.beta),
        it_max=args.iterations,
        seed=args.seed,
        workers=args.threads or default_workers(),
        time_limit=args.time_limit,
        backend=BACKEND_FLAGS[args.backend],
        workdir=args.workdir,
        solution_file=args.solution_file,
        early_exit=not args.no_early_exit,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bcol", description="b-coloring heuristics and exact models")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv step-by-step trace")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one DIMACS instance")
    p.add_argument("instance")
    _add_run_flags(p)
    p.add_argument("--output", choices=("text", "csv", "json"), default="text")
    p.add_argument("--coloring-out", default=None, help="write the best coloring to this file")
    p.add_argument("--progress", action="store_true", help="stream multi-start progress to stderr")
    p.add_argument("--best-known", type=float, default=None, help="reference value for %%best")

    p = sub.add_parser("generate", help="write generated instances in DIMACS format")
    p.add_argument("kind", choices=sorted(GENERATORS))
    p.add_argument("n", type=int)
    p.add_argument("p", type=float, help="edge probability, or distance for geometric graphs")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--count", type=int, default=1, help="consecutive seeds to generate")
    p.add_argument("--out-dir", default=None, help="write <name>.col files here instead of stdout")

    p = sub.add_parser("validate", help="check a coloring file against an instance")
    p.add_argument("instance")
    p.add_argument("coloring")

    p = sub.add_parser("bounds", help="print size, m(G) and the default iteration count")
    p.add_argument("instance")

    p = sub.add_parser("bench", help="run a mode over a directory of instances")
    p.add_argument("directory")
    _add_run_flags(p)
    p.add_argument("--manifest", default=None, help="file of '<instance file> <group>' lines")
    p.add_argument("--out", default="bench", help="output prefix for .csv, _groups.csv and .json")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except (DimacsError, ColoringError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InfeasibleFixingError as exc:
        print(f"error: infeasible fixing: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE_FIXING
    except (FileNotFoundError, NotADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def cmd_solve(args) -> int:
    g, meta = read_dimacs(args.instance)
    progress = (lambda ev: print(ev, file=sys.stderr, flush=True)) if args.progress else None
    report = run_mode(g, args.mode, _config(args), meta, progress, args.best_known)
    if args.output == "csv":
        sys.stdout.write(reports_csv([report]))
    elif args.output == "json":
        doc = report.row()
        doc["pct_best"] = report.pct_best
        print(json.dumps(doc, indent=2))
    else:
        row = report.row()
        for key in CSV_COLUMNS:
            print(f"{key:>8}: {'' if row[key] is None else row[key]}")
        if report.pct_best is not None:
            print(f"{'%best':>8}: {report.pct_best:.2f}")
        if report.note:
            print(f"{'note':>8}: {report.note}")
    if args.coloring_out and report.coloring is not None:
        write_coloring(args.coloring_out, report.coloring.normalized())
    if report.status == "halted":
        return EXIT_HALTED
    if report.z is None:
        return EXIT_NO_SOLUTION
    return EXIT_OK


def cmd_generate(args) -> int:
    for seed in range(args.seed, args.seed + args.count):
        g, meta = generate(args.kind, args.n, args.p, seed)
        if args.out_dir:
            out = Path(args.out_dir)
            out.mkdir(parents=True, exist_ok=True)
            save_dimacs(out / f"{meta.name}.col", g, meta)
        else:
            sys.stdout.write(write_dimacs(g, meta))
    return EXIT_OK


def cmd_validate(args) -> int:
    g, _ = read_dimacs(args.instance)
    c = read_coloring(args.coloring, g.n)
    if len(c) != g.n or not c.is_complete():
        print("invalid: coloring is incomplete")
        return EXIT_INVALID
    if not is_proper(g, c):
        bad = next((u, v) for u, v in g.edges() if c[u] == c[v])
        print(f"invalid: edge {bad[0] + 1}-{bad[1] + 1} has both ends colored {c[bad[0]]}")
        return EXIT_INVALID
    missing = sorted(k for k, vs in b_vertices(g, c).items() if not vs)
    if missing:
        print(f"invalid: color(s) {', '.join(map(str, missing))} have no b-vertex")
        return EXIT_INVALID
    print(f"valid b-coloring with {c.num_colors} colors")
    return EXIT_OK


def cmd_bounds(args) -> int:
    g, meta = read_dimacs(args.instance)
    print(f"instance {meta.name}")
    print(f"vertices {g.n}")
    print(f"edges {g.num_edges}")
    print(f"max_degree {g.max_degree}")
    print(f"m {m_bound(g)}")
    if g.n >= 2:
        print(f"density {density(g):.6f}")
        print(f"it_max {default_it_max(g)}")
    return EXIT_OK


def cmd_bench(args) -> int:
    result = bench(args.directory, args.mode, _config(args), args.manifest)
    for name, err in result.skipped:
        print(f"skipped {name}: {err}", file=sys.stderr)
    if result.empty:
        print("no instances to run", file=sys.stderr)
        return EXIT_NO_WORK
    for path in write_bench(result, args.out):
        print(f"wrote {path}", file=sys.stderr)
    sys.stdout.write(groups_csv(result.groups))
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "generate": cmd_generate,
    "validate": cmd_validate,
    "bounds": cmd_bounds,
    "bench": cmd_bench,
}


if __name__ == "__main__":
    sys.exit(main())
