"""Command line entry point.

    match run <experiment> [--config FILE] [--out DIR] [--seed N] ...
    match solve  --instance FILE
    match audit  --instance FILE --college ID
    match oracle --instance FILE

The environment variable MATCH_SEED overrides any --seed argument.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import replace

from .core import matching_lines, read_instance
from .harness import (
    ExperimentKind,
    ExperimentSpec,
    MechanismChoice,
    Selection,
    TrialCsvSink,
    replay,
    run_experiment,
    trial_header,
    write_aggregate_csv,
    write_run_metadata,
)
from .mechanism import MechanismConfig, generalized_match
from .simgen import GenConfig, read_gen_config
from .stability import enumerate_stable, is_student_optimal
from .strategy import audit_csv, college_manipulation_audit

_OUTPUT_BASENAMES = {
    ExperimentKind.WELFARE_SWEEP: "welfare",
    ExperimentKind.STRATEGY_COUNT: "strategy",
    ExperimentKind.PER_RANK: "per_rank",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="match", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a Monte Carlo experiment")
    run.add_argument("experiment", choices=[k.value for k in ExperimentKind])
    run.add_argument("--config", help="generator config file (JSON)")
    run.add_argument("--out", default="out", help="output directory for CSV files")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--trials", type=int, default=1000)
    run.add_argument("--beta-step", type=float, default=0.01)
    run.add_argument("--mechanism", choices=["hybrid", "gs", "both"], default="both")
    run.add_argument("--strategic-count", type=int, help="restrict the strategy study to one k")
    run.add_argument("--strategic-selection", choices=[s.value for s in Selection],
                     default=Selection.RANDOM.value)
    run.add_argument("--replay", metavar="SEED:TRIAL",
                     help="recompute one trial's rows and print them instead of running")

    solve = sub.add_parser("solve", help="match a single instance file")
    solve.add_argument("--instance", required=True)
    solve.add_argument("--seed", type=int, default=0, help="lottery seed")

    audit = sub.add_parser("audit", help="dropping-strategy manipulation audit for one college")
    audit.add_argument("--instance", required=True)
    audit.add_argument("--college", required=True)
    audit.add_argument("--seed", type=int, default=0, help="lottery seed")
    audit.add_argument("--max-drop", type=int, help="cap on how many students may be dropped")

    oracle = sub.add_parser("oracle", help="enumerate every stable matching of a small instance")
    oracle.add_argument("--instance", required=True)
    oracle.add_argument("--seed", type=int, default=0, help="lottery seed")
    return parser


def _effective_seed(args_seed: int) -> int:
    env = os.environ.get("MATCH_SEED")
    return int(env) if env else args_seed


def _build_spec(args) -> ExperimentSpec:
    gen = read_gen_config(args.config) if args.config else GenConfig()
    gen = replace(gen, seed=_effective_seed(args.seed))
    mechanisms = {
        "hybrid": (MechanismChoice.HYBRID,),
        "gs": (MechanismChoice.PURE_GS,),
        "both": (MechanismChoice.HYBRID, MechanismChoice.PURE_GS),
    }[args.mechanism]
    counts = tuple(range(gen.n_students + 1))
    if args.strategic_count is not None:
        counts = (args.strategic_count,)
    return ExperimentSpec(
        kind=ExperimentKind(args.experiment),
        gen=gen,
        trials=args.trials,
        beta_step=args.beta_step,
        mechanisms=mechanisms,
        strategic_counts=counts,
        selection=Selection(args.strategic_selection),
    )


def _cmd_run(args) -> int:
    spec = _build_spec(args)
    if args.replay:
        seed_str, _, trial_str = args.replay.partition(":")
        rows = replay(spec, int(seed_str), int(trial_str))
        writer = csv.writer(sys.stdout)
        header = trial_header(spec.kind)
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if row[k] is None else row[k] for k in header])
        return 0
    os.makedirs(args.out, exist_ok=True)
    base = _OUTPUT_BASENAMES[spec.kind]
    sink = TrialCsvSink(os.path.join(args.out, f"{base}_trials.csv"), spec.kind)
    try:
        aggregates = run_experiment(spec, trial_sink=sink)
    finally:
        sink.close()
    write_aggregate_csv(os.path.join(args.out, f"{base}.csv"), spec.kind, aggregates)
    write_run_metadata(os.path.join(args.out, "run.json"), spec)
    print(f"wrote {base}.csv, {base}_trials.csv, run.json to {args.out}", file=sys.stderr)
    return 0


def _cmd_solve(args) -> int:
    instance = read_instance(args.instance)
    config = MechanismConfig(lottery_seed=_effective_seed(args.seed))
    matching = generalized_match(instance, instance.student_prefs, config)
    print("\n".join(matching_lines(matching)))
    return 0


def _cmd_audit(args) -> int:
    instance = read_instance(args.instance)
    seed = _effective_seed(args.seed)
    result = college_manipulation_audit(
        instance,
        instance.student_prefs,
        args.college,
        max_drop=args.max_drop,
        config=MechanismConfig(lottery_seed=seed),
    )
    sys.stdout.write(audit_csv(seed, result))
    verdict = "improvable" if result.improved else "truthful reporting is optimal"
    print(f"{args.college}: {verdict}; assignment {','.join(result.truthful) or '-'}", file=sys.stderr)
    return 0


def _cmd_oracle(args) -> int:
    instance = read_instance(args.instance)
    config = MechanismConfig(lottery_seed=_effective_seed(args.seed))
    stable = enumerate_stable(instance, instance.student_prefs, config)
    print(f"stable matchings: {len(stable)}")
    for i, matching in enumerate(stable):
        optimal = is_student_optimal(matching, stable, instance.student_prefs)
        print(f"-- matching {i}{' (student-optimal)' if optimal else ''}")
        print("\n".join(matching_lines(matching)))
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "run": _cmd_run,
        "solve": _cmd_solve,
        "audit": _cmd_audit,
        "oracle": _cmd_oracle,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    raise SystemExit(main())
