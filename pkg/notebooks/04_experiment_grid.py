"""
Running an experiment grid
==========================

The harness sweeps n, p and k over seeded replicates, runs every method on
each instance and aggregates who proved what.
"""

# %%
import tempfile
from pathlib import Path

from tensorsat.harness import (
    GridSpec,
    aggregate,
    emit_plot_data,
    emit_tables,
    format_grouped,
    format_truth_table,
    read_records,
    run_experiment,
)

grid = GridSpec.from_dict({"n": "10:30:10", "p": "0.2:1.0:0.2", "replicates": 3,
                           "master_seed": 2024})
print(len(grid.cells()), "cells x", grid.replicates, "replicates")

# %%
# Records stream to CSV as each cell finishes, so an interrupted run resumes.
out = Path(tempfile.mkdtemp()) / "records.csv"
records = list(run_experiment(grid, out))
print(out.read_text().splitlines()[:3])

# %%
agg = aggregate(read_records(out))
print(format_truth_table(agg))
print(format_grouped(agg, "n"))

# %%
# Tables and plot-ready series land next to the records.
emit_tables(agg, out.parent)
emit_plot_data(agg, out.parent)
print(sorted(p.name for p in out.parent.iterdir()))
