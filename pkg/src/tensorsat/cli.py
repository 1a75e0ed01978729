"""``tensorsat gen|prove|experiment|oracle``.

Exit codes for ``prove``: 0 if some requested method proves UNSAT, 10 if
none does, 2 on error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .csp import microstructure, parse_csp, serialize_csp
from .generators import CLIQUE_UNION, DISJOINT_CLIQUES, FAMILIES, GNP_NEQ, GenSpec, generate
from .graph import FormatError, parse_graph, underlying_graph
from .harness import (
    WORKERS_ENV,
    GridSpec,
    aggregate,
    emit_plot_data,
    emit_tables,
    format_grouped,
    format_truth_table,
    run_experiment,
)
from .methods import METHODS, TENSOR_FAST, ColoringConfig, InapplicableMethod, prove
from .oracle import BudgetExceeded, OracleBudget, chromatic_exact, solve_exhaustive

EXIT_PROVED = 0
EXIT_NOT_PROVED = 10
EXIT_ERROR = 2


def _default_workers() -> int:
    return int(os.environ.get(WORKERS_ENV, "1"))


def cmd_gen(args) -> int:
    spec = GenSpec(args.family, n=args.n or 0, p=args.p, k=args.k, c=args.c, s=args.s,
                   master_seed=args.seed, replicate=args.replicate)
    csp = generate(spec)
    seed = spec.seed()
    comments = [f"family={spec.family} n={spec.n} p={spec.p:g} k={spec.k} c={spec.c} "
                f"s={spec.s} master_seed={spec.master_seed} replicate={spec.replicate}",
                f"derived_seed={seed}"]
    if spec.family == CLIQUE_UNION:
        comments.append("node v is clique-matrix label v+1")
    text = serialize_csp(csp, tuple(comments))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"seed {seed}", file=sys.stderr if not args.out else sys.stdout)
    return 0


def _report_line(r) -> str:
    factors = ",".join(f"{name}:{v}" for name, v in r.factors)
    return (f"method={r.method} bound={r.bound} n={r.n} "
            f"proved_unsat={'true' if r.proved_unsat else 'false'} "
            f"factors={factors} seed={r.seed} elapsed_ms={r.elapsed * 1000:.3f}")


def cmd_prove(args) -> int:
    csp = parse_csp(Path(args.instance).read_text())
    methods = METHODS if args.method == "all" else (args.method,)
    cfg = ColoringConfig(random_orders=args.random_orders, seed=args.seed, workers=args.workers)
    proved = False
    for method in methods:
        try:
            r = prove(csp, method, cfg)
        except InapplicableMethod as exc:
            print(f"method={TENSOR_FAST} status=inapplicable reason=\"{exc}\"")
            continue
        proved |= r.proved_unsat
        print(_report_line(r))
    return EXIT_PROVED if proved else EXIT_NOT_PROVED


def cmd_experiment(args) -> int:
    if args.grid:
        grid = GridSpec.from_file(args.grid)
    else:
        grid = GridSpec.from_dict({
            "n": args.n or "10:50:10", "p": args.p or "0.1:1.0:0.1",
            **({"k": args.k} if args.k else {}),
        })
    overrides = {}
    if args.replicates is not None:
        overrides["replicates"] = args.replicates
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.method:
        overrides["methods"] = tuple(METHODS if args.method == "all" else args.method.split(","))
    if args.workers is not None:
        overrides["workers"] = args.workers
    if overrides:
        grid = GridSpec(**{**grid.__dict__, **overrides})
    records = list(run_experiment(grid, args.out, resume=not args.fresh))
    agg = aggregate(records)
    print(format_truth_table(agg))
    for by in ("n", "p", "k"):
        print()
        print(format_grouped(agg, by))
    if args.tables:
        emit_tables(agg, args.tables)
        emit_plot_data(agg, args.tables)
    return 0


def cmd_oracle(args) -> int:
    text = Path(args.instance).read_text()
    budget = OracleBudget(max_nodes=args.max_nodes, max_search_space=args.max_search_space,
                          force=args.force)
    header = next((ln.split() for ln in text.splitlines() if ln.startswith("p ")), None)
    if header and header[1] in ("graph", "digraph"):
        g = parse_graph(text)
        print(f"chromatic_number={chromatic_exact(underlying_graph(g), budget)}")
        return 0
    csp = parse_csp(text)
    if args.chromatic:
        chi = chromatic_exact(underlying_graph(microstructure(csp)), budget)
        print(f"microstructure_chromatic_number={chi} n={csp.n}")
    sat, witness = solve_exhaustive(csp, budget)
    if sat:
        print("SAT witness=" + ",".join(map(str, witness)))
    else:
        print("UNSAT")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tensorsat", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("--family", choices=FAMILIES, default=GNP_NEQ)
    g.add_argument("--n", type=int)
    g.add_argument("--p", type=float, default=0.5)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--c", type=int, default=1)
    g.add_argument("--s", type=int, default=2)
    g.add_argument("--seed", type=int, default=0, help="master seed")
    g.add_argument("--replicate", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    p = sub.add_parser("prove", help="run proving methods on an instance")
    p.add_argument("instance")
    p.add_argument("--method", choices=(*METHODS, "auto", "all"), default="all")
    p.add_argument("--seed", type=int, default=0, help="coloring seed")
    p.add_argument("--random-orders", type=int, default=5)
    p.add_argument("--workers", type=int, default=_default_workers())
    p.set_defaults(func=cmd_prove)

    e = sub.add_parser("experiment", help="run a grid of G(n,p) disequality CSPs")
    e.add_argument("--grid", help="JSON grid file")
    e.add_argument("--n", help="'start:stop:step' or comma list")
    e.add_argument("--p", help="'start:stop:step' or comma list")
    e.add_argument("--k", help="k values for every n (default: 2..min(6, ceil(n/8)+2))")
    e.add_argument("--replicates", type=int)
    e.add_argument("--seed", type=int, help="master seed")
    e.add_argument("--method", help="'all' or comma list of methods")
    e.add_argument("--workers", type=int)
    e.add_argument("--out", help="records CSV (appended cell by cell; resumable)")
    e.add_argument("--fresh", action="store_true", help="ignore an existing --out file")
    e.add_argument("--tables", help="directory for aggregate tables and plot data")
    e.set_defaults(func=cmd_experiment)

    o = sub.add_parser("oracle", help="exhaustive ground truth for small instances")
    o.add_argument("instance", help="CSP file, or graph file for its chromatic number")
    o.add_argument("--chromatic", action="store_true",
                   help="also compute the exact chromatic number of the microstructure")
    o.add_argument("--max-nodes", type=int, default=OracleBudget.max_nodes)
    o.add_argument("--max-search-space", type=int, default=OracleBudget.max_search_space)
    o.add_argument("--force", action="store_true")
    o.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, FormatError, BudgetExceeded, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
