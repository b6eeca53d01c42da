#!/usr/bin/env python3
"""A small Monte Carlo run end to end.

Runs a coarse welfare sweep and the strategic-student study with 200 trials
per point (the full-size experiments use 1000), prints the headline numbers,
and writes the same CSV files `match run` produces -- ready for the plots
package.  Takes a few seconds.
"""

import os
import sys

from recipmatch import GenConfig
from recipmatch.harness import (
    ExperimentKind,
    ExperimentSpec,
    TrialCsvSink,
    run_strategy_count,
    run_welfare_sweep,
    write_aggregate_csv,
)

out_dir = sys.argv[1] if len(sys.argv) > 1 else "demo-out"
os.makedirs(out_dir, exist_ok=True)
print(__doc__)

sweep = ExperimentSpec(
    kind=ExperimentKind.WELFARE_SWEEP, gen=GenConfig(seed=1), trials=200, beta_step=0.1
)
sink = TrialCsvSink(os.path.join(out_dir, "welfare_trials.csv"), sweep.kind)
rows = run_welfare_sweep(sweep, trial_sink=sink)
sink.close()
write_aggregate_csv(os.path.join(out_dir, "welfare.csv"), sweep.kind, rows)

print("welfare sweep (students' aggregate utility, hybrid vs pure GS):")
print("  beta   hybrid    gs")
for beta in (0.0, 0.3, 0.6, 0.9, 1.0):
    h = next(r for r in rows if r["beta"] == beta and r["mechanism"] == "hybrid")
    g = next(r for r in rows if r["beta"] == beta and r["mechanism"] == "gs")
    print(f"  {beta:.1f}   {h['mean_piS']:6.2f}  {g['mean_piS']:6.2f}")

strategy = ExperimentSpec(
    kind=ExperimentKind.STRATEGY_COUNT, gen=GenConfig(seed=1), trials=200
)
sink = TrialCsvSink(os.path.join(out_dir, "strategy_trials.csv"), strategy.kind)
rows = run_strategy_count(strategy, trial_sink=sink)
sink.close()
write_aggregate_csv(os.path.join(out_dir, "strategy.csv"), strategy.kind, rows)

print("\nstrategic students at full correlation (benchmark utility is 4):")
print("  k   strategic  truthful")
for r in rows:
    s = "     -" if r["mean_u_strategic"] is None else f"{r['mean_u_strategic']:6.2f}"
    t = "     -" if r["mean_u_truthful"] is None else f"{r['mean_u_truthful']:6.2f}"
    print(f"  {r['k']:2d}  {s}    {t}")

print(f"\nCSV files written to {out_dir}/ (welfare.csv, strategy.csv, *_trials.csv)")
