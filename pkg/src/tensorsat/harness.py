"""Experiment grid runner, aggregation, and CSV / plot-data output."""

from __future__ import annotations

import csv
import json
import math
import os
import warnings
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .generators import GNP_NEQ, GenSpec, generate
from .methods import METHODS, MU, TENSOR, TENSOR_FAST, ColoringConfig, InapplicableMethod, prove
from .rng import RNG_DESCRIPTION

__all__ = [
    "CSV_COLUMNS",
    "WORKERS_ENV",
    "ExperimentRecord",
    "GridSpec",
    "default_k_values",
    "run_cell",
    "run_experiment",
    "read_records",
    "Aggregate",
    "aggregate",
    "emit_csv",
    "emit_tables",
    "emit_plot_data",
    "format_truth_table",
    "format_grouped",
]

CSV_COLUMNS = ("family", "n", "p", "k", "replicate", "seed", "method",
               "bound", "proved_unsat", "elapsed_ms")
WORKERS_ENV = "TENSORSAT_WORKERS"
RANDOM_ORDERS = 5


@dataclass(frozen=True)
class ExperimentRecord:
    family: str
    n: int
    p: float
    k: int
    replicate: int
    seed: int
    method: str
    bound: int | None  # None when the method does not apply
    proved_unsat: bool
    elapsed_ms: float
    colors_metadata: str = f"degree+{RANDOM_ORDERS}random"

    def row(self) -> list[str]:
        return [self.family, str(self.n), _fmt_p(self.p), str(self.k), str(self.replicate),
                str(self.seed), self.method, "" if self.bound is None else str(self.bound),
                "true" if self.proved_unsat else "false", f"{self.elapsed_ms:.3f}"]

    @property
    def instance(self) -> tuple:
        return (self.family, self.n, _fmt_p(self.p), self.k, self.replicate, self.seed)


def _fmt_p(p: float) -> str:
    return f"{p:g}"


def _parse_range(spec, cast):
    """A list, a scalar, or a ``"start:stop:step"`` string (stop inclusive)."""
    if isinstance(spec, (list, tuple)):
        return [cast(x) for x in spec]
    if isinstance(spec, str) and ":" in spec:
        start, stop, step = (float(x) for x in spec.split(":"))
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [cast(round(start + i * step, 10)) for i in range(count)]
    if isinstance(spec, str) and "," in spec:
        return [cast(x) for x in spec.split(",")]
    return [cast(spec)]


def default_k_values(n: int) -> list[int]:
    """k from 2 to min(6, ceil(n/8) + 2)."""
    return list(range(2, min(6, math.ceil(n / 8) + 2) + 1))


@dataclass(frozen=True)
class GridSpec:
    n_values: tuple[int, ...]
    p_values: tuple[float, ...]
    k_values: dict | None = None  # n -> k list; None means default_k_values
    replicates: int = 5
    master_seed: int = 0
    methods: tuple[str, ...] = METHODS
    workers: int = 1

    def __post_init__(self):
        if not self.n_values or not self.p_values:
            raise ValueError("grid must have at least one n and one p")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}")

    @classmethod
    def from_dict(cls, d: dict) -> "GridSpec":
        k = d.get("k")
        if k is None:
            k_values = None
        elif isinstance(k, dict):
            k_values = {int(n): _parse_range(v, int) for n, v in k.items()}
        else:
            k_values = {None: _parse_range(k, int)}
        workers = d.get("workers")
        if workers is None:
            workers = int(os.environ.get(WORKERS_ENV, "1"))
        return cls(
            n_values=tuple(_parse_range(d["n"], int)),
            p_values=tuple(_parse_range(d["p"], float)),
            k_values=k_values,
            replicates=int(d.get("replicates", 5)),
            master_seed=int(d.get("master_seed", 0)),
            methods=tuple(d.get("methods", METHODS)),
            workers=int(workers),
        )

    @classmethod
    def from_file(cls, path) -> "GridSpec":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.k_values is not None:
            d["k_values"] = {str(n): v for n, v in self.k_values.items()}
        return d

    def ks_for(self, n: int) -> list[int]:
        if self.k_values is None:
            return default_k_values(n)
        if None in self.k_values:
            return list(self.k_values[None])
        return list(self.k_values.get(n, default_k_values(n)))

    def cells(self) -> list[tuple[int, int, float, int]]:
        """Grid cells ``(n, p_index, p, k)`` in canonical order."""
        return [(n, pi, p, k)
                for n in self.n_values
                for pi, p in enumerate(self.p_values)
                for k in self.ks_for(n)]


def run_cell(grid: GridSpec, cell) -> list[ExperimentRecord]:
    """All records of one cell, ordered by (replicate, method)."""
    n, pi, p, k = cell
    out = []
    for rep in range(grid.replicates):
        spec = GenSpec(GNP_NEQ, n=n, p=p, k=k, master_seed=grid.master_seed,
                       replicate=rep, p_index=pi)
        seed = spec.seed()
        csp = generate(spec)
        cfg = ColoringConfig(random_orders=RANDOM_ORDERS, seed=seed)
        for method in grid.methods:
            try:
                r = prove(csp, method, cfg)
                bound, proved, ms = r.bound, r.proved_unsat, r.elapsed * 1000
            except InapplicableMethod:
                bound, proved, ms = None, False, 0.0
            out.append(ExperimentRecord(GNP_NEQ, n, p, k, rep, seed, method, bound, proved, ms))
    return out


def _cell_key(n, p, k) -> tuple:
    return (int(n), _fmt_p(float(p)), int(k))


def _resume(grid: GridSpec, path: Path) -> dict[tuple, list[ExperimentRecord]]:
    """Complete cells already present in ``path``; the file is rewritten without partial cells."""
    done: dict[tuple, list[ExperimentRecord]] = defaultdict(list)
    for rec in read_records(path):
        done[_cell_key(rec.n, rec.p, rec.k)].append(rec)
    per_cell = grid.replicates * len(grid.methods)
    done = {key: recs for key, recs in done.items() if len(recs) == per_cell}
    emit_csv([r for recs in done.values() for r in recs], path)
    return done


def run_experiment(grid: GridSpec, out_path=None, resume: bool = True) -> Iterator[ExperimentRecord]:
    """Run every (cell, replicate, method); yields records in canonical order.

    With ``out_path``, records are appended cell by cell as they finish, so an
    interrupted run restarts from the first incomplete cell.
    """
    cells = grid.cells()
    done: dict[tuple, list[ExperimentRecord]] = {}
    path = Path(out_path) if out_path is not None else None
    if path is not None:
        if resume and path.exists():
            done = _resume(grid, path)
        else:
            emit_csv([], path)
        meta = {"grid": grid.to_dict(), "rng": RNG_DESCRIPTION,
                "coloring": {"orderings": "degree (ties by node id) then random",
                             "random_orders": RANDOM_ORDERS,
                             "seed": "per-instance seed"}}
        Path(str(path) + ".meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    todo = [c for c in cells if _cell_key(c[0], c[2], c[3]) not in done]

    if grid.workers > 1 and len(todo) > 1:
        pool = ProcessPoolExecutor(grid.workers)
        results = pool.map(run_cell, [grid] * len(todo), todo)
    else:
        pool = None
        results = (run_cell(grid, c) for c in todo)
    fresh = iter(results)
    try:
        for c in cells:
            key = _cell_key(c[0], c[2], c[3])
            if key in done:
                recs = done[key]
            else:
                recs = next(fresh)
                if path is not None:
                    with path.open("a", newline="") as fh:
                        csv.writer(fh, lineterminator="\n").writerows(r.row() for r in recs)
            yield from recs
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)


# -- CSV ---------------------------------------------------------------------

def emit_csv(records: Iterable[ExperimentRecord], path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        w.writerows(r.row() for r in records)


def read_records(path) -> list[ExperimentRecord]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [ExperimentRecord(
        family=r["family"], n=int(r["n"]), p=float(r["p"]), k=int(r["k"]),
        replicate=int(r["replicate"]), seed=int(r["seed"]), method=r["method"],
        bound=int(r["bound"]) if r["bound"] else None,
        proved_unsat=r["proved_unsat"] == "true", elapsed_ms=float(r["elapsed_ms"]),
    ) for r in rows]


# -- aggregation -------------------------------------------------------------

@dataclass
class Aggregate:
    # (mu, tensor, tensor-fast) verdicts -> instance count
    truth_table: dict[tuple[bool, bool, bool], int] = field(default_factory=dict)
    # "n" / "p" / "k" -> group value -> {"instances": int, method: count or None}
    grouped: dict[str, dict] = field(default_factory=dict)
    # method -> n -> mean elapsed_ms
    timing: dict[str, dict[int, float]] = field(default_factory=dict)
    instances: int = 0

    def fraction(self, by: str, value, method: str) -> float | None:
        g = self.grouped[by][value]
        count = g.get(method)
        return None if count is None else count / g["instances"]


def aggregate(records: Iterable[ExperimentRecord]) -> Aggregate:
    records = list(records)
    if not records:
        raise ValueError("no records to aggregate")
    by_instance: dict[tuple, dict[str, ExperimentRecord]] = defaultdict(dict)
    for r in records:
        by_instance[r.instance][r.method] = r

    agg = Aggregate(instances=len(by_instance))
    table: Counter = Counter()
    skipped = 0
    for methods in by_instance.values():
        if not all(m in methods for m in METHODS):
            skipped += 1
            continue
        table[tuple(methods[m].proved_unsat for m in METHODS)] += 1
    if skipped:
        warnings.warn(f"{skipped} instances lack one of {METHODS}; left out of the truth table")
    agg.truth_table = dict(sorted(table.items(), reverse=True))

    for by, getter in (("n", lambda r: r.n), ("p", lambda r: _fmt_p(r.p)), ("k", lambda r: r.k)):
        groups: dict = {}
        for inst, methods in by_instance.items():
            value = getter(next(iter(methods.values())))
            g = groups.setdefault(value, {"instances": 0, **{m: None for m in METHODS}})
            g["instances"] += 1
            for m, rec in methods.items():
                if rec.bound is None:
                    continue
                g[m] = (g[m] or 0) + int(rec.proved_unsat)
        key = (lambda v: float(v)) if by == "p" else (lambda v: v)
        agg.grouped[by] = {v: groups[v] for v in sorted(groups, key=key)}

    sums: dict = defaultdict(lambda: defaultdict(list))
    for r in records:
        if r.bound is not None:
            sums[r.method][r.n].append(r.elapsed_ms)
    agg.timing = {m: {n: sum(v) / len(v) for n, v in sorted(sums[m].items())}
                  for m in METHODS if m in sums}
    return agg


def format_truth_table(agg: Aggregate) -> str:
    lines = [f"{'mu':>6} {'tensor':>7} {'t-fast':>7} {'#':>7}"]
    b = lambda x: "true" if x else "false"
    for (mu, t, f), count in agg.truth_table.items():
        lines.append(f"{b(mu):>6} {b(t):>7} {b(f):>7} {count:>7}")
    return "\n".join(lines)


def format_grouped(agg: Aggregate, by: str) -> str:
    lines = [f"{by:>5} {'inst':>6} {'mu':>6} {'tensor':>7} {'t-fast':>7}"]
    cell = lambda v: "X" if v is None else str(v)
    for value, g in agg.grouped[by].items():
        lines.append(f"{value!s:>5} {g['instances']:>6} {cell(g[MU]):>6} "
                     f"{cell(g[TENSOR]):>7} {cell(g[TENSOR_FAST]):>7}")
    return "\n".join(lines)


def _write_rows(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def emit_tables(agg: Aggregate, directory) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    b = lambda x: "true" if x else "false"
    _write_rows(d / "truth_table.csv", ("mu", "tensor", "tensor-fast", "count"),
                [(b(k[0]), b(k[1]), b(k[2]), v) for k, v in agg.truth_table.items()])
    cell = lambda v: "X" if v is None else str(v)
    for by, groups in agg.grouped.items():
        _write_rows(d / f"grouped_by_{by}.csv", (by, "instances", *METHODS),
                    [(v, g["instances"], *(cell(g[m]) for m in METHODS))
                     for v, g in groups.items()])


def emit_plot_data(agg: Aggregate, directory) -> None:
    """Series behind the method-vs-method scatter plots and the runtime plot."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    frac = lambda v: "" if v is None else f"{v:.6f}"
    for x_m, y_m, name in ((MU, TENSOR, "mu_vs_tensor"), (TENSOR, TENSOR_FAST, "tensor_vs_fast")):
        for by, groups in agg.grouped.items():
            _write_rows(d / f"{name}_by_{by}.csv", (by, "x", "y"),
                        [(v, frac(agg.fraction(by, v, x_m)), frac(agg.fraction(by, v, y_m)))
                         for v in groups])
    ns = sorted({n for series in agg.timing.values() for n in series})
    _write_rows(d / "runtime_by_n.csv", ("n", *METHODS),
                [(n, *(f"{agg.timing[m][n]:.6f}" if n in agg.timing.get(m, {}) else ""
                       for m in METHODS)) for n in ns])
