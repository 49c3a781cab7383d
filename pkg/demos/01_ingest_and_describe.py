"""Load the small tracker fixture, merge daily and weekly files, summarize.

Run from the repository root:  python demos/01_ingest_and_describe.py
"""

from pathlib import Path

from peanut.config import load_config
from peanut.describe import (
    descriptive_stats,
    missingness_summary,
    render_missingness_table,
    render_stats_table,
)

DATA = Path(__file__).resolve().parents[1] / "tests" / "data"

# The config names two CSVs: daily spending and weekly merchant counts.
# Weekly rows land on the daily calendar only where the dates coincide.
frame = load_config(DATA / "fixture.yaml").load_frame()
print(len(frame), "days;", frame.columns)
print("roles:", {c: frame.role(c).value for c in frame.columns})

# %% Summary statistics use observed cells only.
stats = descriptive_stats(frame, ["daily_spend_19_all", "merchants_all"])
print(render_stats_table(stats))
print()

# %% The weekly column is observed about one day in seven.
print(render_missingness_table(missingness_summary(frame)))
