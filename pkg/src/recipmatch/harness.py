"""Monte Carlo experiment harness.

Three studies over randomly generated admission markets:

* welfare sweep -- aggregate utilities and social welfare of the hybrid
  mechanism versus the pure score-ordered (GS) mechanism, across the whole
  preference-correlation range;
* strategy count -- fully correlated preferences with k strategic students
  playing the shielding strategy, tracking who gains and what colleges lose;
* per rank -- one deviating student at each score rank, truthful versus
  strategic, across a small set of correlation levels.

Trials are pure functions of (seed, trial index), so runs parallelize across
a worker pool and still aggregate in fixed trial order; any single trial can
be replayed from its (seed, trial) key alone.
"""

from __future__ import annotations

import csv
import enum
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Iterable, Sequence

from .core import PreferenceList
from .mechanism import MechanismConfig, Mode, deferred_acceptance, reciprocating_profile
from .simgen import AlphaDist, GenConfig, gen_instance, score_ranks, student_ids
from .strategy import strategy_s
from .streams import substream
from .welfare import Side, UtilityFunction, aggregate


class ExperimentKind(enum.Enum):
    WELFARE_SWEEP = "welfare-sweep"
    STRATEGY_COUNT = "strategy-count"
    PER_RANK = "per-rank"


class MechanismChoice(enum.Enum):
    HYBRID = "hybrid"
    PURE_GS = "gs"


class Selection(enum.Enum):
    """How the k strategic students are picked in the strategy-count study."""

    LOWEST = "lowest"
    RANDOM = "random"


@dataclass(frozen=True)
class ExperimentSpec:
    kind: ExperimentKind
    gen: GenConfig = field(default_factory=GenConfig)
    trials: int = 1000
    beta_step: float = 0.01
    mechanisms: tuple[MechanismChoice, ...] = (MechanismChoice.HYBRID, MechanismChoice.PURE_GS)
    strategic_counts: tuple[int, ...] = tuple(range(11))
    selection: Selection = Selection.RANDOM
    per_rank_betas: tuple[float, ...] = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
    jobs: int | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 < self.beta_step <= 1:
            raise ValueError("beta step must lie in (0, 1]")

    @property
    def seed(self) -> int:
        return self.gen.seed


def beta_grid(step: float) -> list[float]:
    """0, step, 2*step, ... up to and including 1."""
    count = int(round(1.0 / step))
    grid = [round(i * step, 10) for i in range(count + 1)]
    if grid[-1] != 1.0:
        grid.append(1.0)
    return grid


def _mean_se(values: Sequence[float]) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    if n < 2:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)


def _trial_config(spec: ExperimentSpec, trial: int) -> MechanismConfig:
    return MechanismConfig(lottery_seed=f"{spec.seed}:{trial}")


# ---------------------------------------------------------------------------
# Welfare sweep
# ---------------------------------------------------------------------------

WELFARE_HEADER = ["beta", "mechanism", "mean_piS", "se_piS", "mean_piC", "se_piC", "mean_Pi", "se_Pi"]
WELFARE_TRIAL_HEADER = ["seed", "trial", "beta", "mechanism", "pi_S", "pi_C", "Pi"]


def _welfare_point(spec: ExperimentSpec, trials: Sequence[int], beta: float):
    cfg = spec.gen.with_beta(beta)
    u_s = UtilityFunction.linear(cfg.n_colleges)
    u_c = UtilityFunction.linear(cfg.n_students)
    samples = {mech: {"pi_S": [], "pi_C": [], "Pi": []} for mech in spec.mechanisms}
    trial_rows = []
    for t in trials:
        instance, prefs = gen_instance(cfg, t)
        quotas = instance.quotas()
        config = _trial_config(spec, t)
        for mech in spec.mechanisms:
            mode = Mode.GENERALIZED if mech is MechanismChoice.HYBRID else Mode.PURE_DA
            profile = reciprocating_profile(instance, prefs, replace(config, mode=mode))
            matching = deferred_acceptance(prefs, profile, quotas)
            pi_s = aggregate(matching, Side.STUDENTS, prefs, u_s)
            pi_c = aggregate(matching, Side.COLLEGES, profile, u_c)
            samples[mech]["pi_S"].append(pi_s)
            samples[mech]["pi_C"].append(pi_c)
            samples[mech]["Pi"].append(pi_s + pi_c)
            trial_rows.append(
                {"seed": spec.seed, "trial": t, "beta": beta, "mechanism": mech.value,
                 "pi_S": pi_s, "pi_C": pi_c, "Pi": pi_s + pi_c}
            )
    agg_rows = []
    for mech in spec.mechanisms:
        row = {"beta": beta, "mechanism": mech.value}
        for key, out in (("pi_S", "piS"), ("pi_C", "piC"), ("Pi", "Pi")):
            mean, se = _mean_se(samples[mech][key])
            row[f"mean_{out}"] = mean
            row[f"se_{out}"] = se
        agg_rows.append(row)
    return agg_rows, trial_rows


def run_welfare_sweep(spec: ExperimentSpec, trial_sink=None) -> list[dict]:
    """Aggregate welfare per (beta, mechanism) over the default beta grid.

    Returns the aggregate rows in grid order; per-trial rows go to
    ``trial_sink`` (a callable) when one is given.
    """
    betas = beta_grid(spec.beta_step)
    worker = partial(_welfare_point, spec, range(spec.trials))
    aggregates = []
    for agg_rows, trial_rows in _map_tasks(worker, betas, spec.jobs):
        aggregates.extend(agg_rows)
        if trial_sink is not None:
            for row in trial_rows:
                trial_sink(row)
    return aggregates


# ---------------------------------------------------------------------------
# Strategy count (fully correlated preferences)
# ---------------------------------------------------------------------------

STRATEGY_HEADER = ["k", "mean_u_strategic", "se", "mean_u_truthful", "se", "piS", "piC_submitted", "piC_true"]
STRATEGY_ROW_KEYS = ["k", "mean_u_strategic", "se_strategic", "mean_u_truthful", "se_truthful", "piS", "piC_submitted", "piC_true"]
STRATEGY_TRIAL_HEADER = ["seed", "trial", "k", "u_strategic", "u_truthful", "pi_S", "piC_submitted", "piC_true"]


def _strategic_set(spec: ExperimentSpec, trial: int, k: int, ranks: dict[str, int]) -> set[str]:
    n = len(ranks)
    if spec.selection is Selection.LOWEST:
        return {sid for sid, r in ranks.items() if r > n - k}
    rng = substream(spec.seed, "strategic-selection", trial, k)
    ordered = sorted(ranks)
    return {ordered[i] for i in rng.permutation(n)[:k]}


def _strategy_count_point(spec: ExperimentSpec, trials: Sequence[int], k: int):
    cfg = spec.gen.with_beta(1.0)
    u_s = UtilityFunction.linear(cfg.n_colleges)
    u_c = UtilityFunction.linear(cfg.n_students)
    per_strategic, per_truthful = [], []
    pis, pic_sub, pic_true = [], [], []
    trial_rows = []
    for t in trials:
        instance, prefs = gen_instance(cfg, t)
        quotas = instance.quotas()
        ranks = score_ranks(instance.scores())
        strategic = _strategic_set(spec, t, k, ranks)
        submitted = {
            sid: strategy_s(prefs[sid], ranks[sid]) if sid in strategic else prefs[sid]
            for sid in prefs
        }
        config = _trial_config(spec, t)
        profile = reciprocating_profile(instance, submitted, config)
        matching = deferred_acceptance(submitted, profile, quotas)
        utilities = {
            sid: u_s(0) if matching[sid] is None else u_s(prefs[sid].index(matching[sid]) + 1)
            for sid in prefs
        }
        u_strat = (
            sum(utilities[s] for s in strategic) / len(strategic) if strategic else None
        )
        truthful = [sid for sid in prefs if sid not in strategic]
        u_truth = sum(utilities[s] for s in truthful) / len(truthful) if truthful else None
        pi_s = sum(utilities.values())
        true_profile = reciprocating_profile(instance, prefs, config)
        pi_c_sub = aggregate(matching, Side.COLLEGES, profile, u_c)
        pi_c_true = aggregate(matching, Side.COLLEGES, true_profile, u_c)
        if u_strat is not None:
            per_strategic.append(u_strat)
        if u_truth is not None:
            per_truthful.append(u_truth)
        pis.append(pi_s)
        pic_sub.append(pi_c_sub)
        pic_true.append(pi_c_true)
        trial_rows.append(
            {"seed": spec.seed, "trial": t, "k": k, "u_strategic": u_strat,
             "u_truthful": u_truth, "pi_S": pi_s, "piC_submitted": pi_c_sub,
             "piC_true": pi_c_true}
        )
    row = {"k": k}
    row["mean_u_strategic"], row["se_strategic"] = (
        _mean_se(per_strategic) if per_strategic else (None, None)
    )
    row["mean_u_truthful"], row["se_truthful"] = (
        _mean_se(per_truthful) if per_truthful else (None, None)
    )
    row["piS"] = _mean_se(pis)[0]
    row["piC_submitted"] = _mean_se(pic_sub)[0]
    row["piC_true"] = _mean_se(pic_true)[0]
    return [row], trial_rows


def run_strategy_count(spec: ExperimentSpec, trial_sink=None) -> list[dict]:
    """Mean utilities per strategic count k, at full preference correlation."""
    worker = partial(_strategy_count_point, spec, range(spec.trials))
    aggregates = []
    for agg_rows, trial_rows in _map_tasks(worker, list(spec.strategic_counts), spec.jobs):
        aggregates.extend(agg_rows)
        if trial_sink is not None:
            for row in trial_rows:
                trial_sink(row)
    return aggregates


# ---------------------------------------------------------------------------
# Per-rank study (one deviator, truthful vs strategic)
# ---------------------------------------------------------------------------

PER_RANK_HEADER = ["beta", "rank", "mode", "mean_u", "se"]
PER_RANK_TRIAL_HEADER = ["seed", "trial", "beta", "rank", "mode", "u"]

MODE_TRUTHFUL = "truthful"
MODE_STRATEGY_S = "strategy_s"


def _per_rank_point(spec: ExperimentSpec, trials: Sequence[int], beta: float):
    cfg = spec.gen.with_beta(beta)
    u_s = UtilityFunction.linear(cfg.n_colleges)
    n = cfg.n_students
    samples = {(rank, mode): [] for rank in range(1, n + 1) for mode in (MODE_TRUTHFUL, MODE_STRATEGY_S)}
    trial_rows = []
    for t in trials:
        instance, prefs = gen_instance(cfg, t)
        quotas = instance.quotas()
        ranks = score_ranks(instance.scores())
        by_rank = {r: sid for sid, r in ranks.items()}
        config = _trial_config(spec, t)
        # All-truthful run is shared by every rank.
        profile = reciprocating_profile(instance, prefs, config)
        truthful_matching = deferred_acceptance(prefs, profile, quotas)
        for rank in range(1, n + 1):
            deviator = by_rank[rank]
            for mode in (MODE_TRUTHFUL, MODE_STRATEGY_S):
                if mode == MODE_TRUTHFUL:
                    matching = truthful_matching
                else:
                    submitted = dict(prefs)
                    submitted[deviator] = strategy_s(prefs[deviator], rank)
                    sub_profile = reciprocating_profile(instance, submitted, config)
                    matching = deferred_acceptance(submitted, sub_profile, quotas)
                seat = matching[deviator]
                u = u_s(0) if seat is None else u_s(prefs[deviator].index(seat) + 1)
                samples[(rank, mode)].append(u)
                trial_rows.append(
                    {"seed": spec.seed, "trial": t, "beta": beta, "rank": rank, "mode": mode, "u": u}
                )
    agg_rows = []
    for rank in range(1, n + 1):
        for mode in (MODE_TRUTHFUL, MODE_STRATEGY_S):
            mean, se = _mean_se(samples[(rank, mode)])
            agg_rows.append({"beta": beta, "rank": rank, "mode": mode, "mean_u": mean, "se": se})
    return agg_rows, trial_rows


def run_per_rank(spec: ExperimentSpec, trial_sink=None) -> list[dict]:
    """Deviator utility by score rank, truthful vs strategic, per beta."""
    worker = partial(_per_rank_point, spec, range(spec.trials))
    aggregates = []
    for agg_rows, trial_rows in _map_tasks(worker, list(spec.per_rank_betas), spec.jobs):
        aggregates.extend(agg_rows)
        if trial_sink is not None:
            for row in trial_rows:
                trial_sink(row)
    return aggregates


# ---------------------------------------------------------------------------
# College-anonymity probe
# ---------------------------------------------------------------------------


def anonymity_counts(
    probe_list: PreferenceList,
    trials: int,
    seed: int = 0,
    tag: str = "",
    n_students: int = 5,
) -> list[int]:
    """How often a probe student lands each choice rank of its submitted list.

    Environment per trial: the other students' lists are uniform over all
    orderings (beta = 0), reciprocating factors are uniform on [0, 1], scores
    are uniform.  Returns counts indexed by choice rank - 1; unmatched trials
    count nowhere.  ``tag`` namespaces the trial streams so different probe
    lists can be compared on independent samples.
    """
    m = len(probe_list)
    config = GenConfig(
        n_students=n_students,
        n_colleges=m,
        quota=1,
        beta=0.0,
        reputations=tuple(100.0 - 10.0 * j for j in range(m)),
        alpha_dist=AlphaDist.uniform(0.0, 1.0),
        seed=seed,
    )
    probe = student_ids(config)[0]
    counts = [0] * m
    for t in range(trials):
        key = f"{tag}{t}"
        instance, prefs = gen_instance(config, key)
        submitted = dict(prefs)
        submitted[probe] = tuple(probe_list)
        mech = MechanismConfig(lottery_seed=f"{seed}:{tag}:{t}")
        profile = reciprocating_profile(instance, submitted, mech)
        matching = deferred_acceptance(submitted, profile, instance.quotas())
        seat = matching[probe]
        if seat is not None:
            counts[probe_list.index(seat)] += 1
    return counts


# ---------------------------------------------------------------------------
# Shared plumbing
# ---------------------------------------------------------------------------


def _map_tasks(worker, tasks: list, jobs: int | None):
    jobs = jobs if jobs is not None else (os.cpu_count() or 1)
    if jobs <= 1 or len(tasks) <= 1:
        for task in tasks:
            yield worker(task)
        return
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        yield from pool.map(worker, tasks)


def run_experiment(spec: ExperimentSpec, trial_sink=None) -> list[dict]:
    runner = {
        ExperimentKind.WELFARE_SWEEP: run_welfare_sweep,
        ExperimentKind.STRATEGY_COUNT: run_strategy_count,
        ExperimentKind.PER_RANK: run_per_rank,
    }[spec.kind]
    return runner(spec, trial_sink)


def replay(spec: ExperimentSpec, seed: int, trial: int) -> list[dict]:
    """Recompute exactly the per-trial rows of one (seed, trial) key."""
    spec = replace(spec, gen=replace(spec.gen, seed=seed))
    rows: list[dict] = []
    if spec.kind is ExperimentKind.WELFARE_SWEEP:
        for beta in beta_grid(spec.beta_step):
            rows.extend(_welfare_point(spec, [trial], beta)[1])
    elif spec.kind is ExperimentKind.STRATEGY_COUNT:
        for k in spec.strategic_counts:
            rows.extend(_strategy_count_point(spec, [trial], k)[1])
    else:
        for beta in spec.per_rank_betas:
            rows.extend(_per_rank_point(spec, [trial], beta)[1])
    return rows


def trial_header(kind: ExperimentKind) -> list[str]:
    return {
        ExperimentKind.WELFARE_SWEEP: WELFARE_TRIAL_HEADER,
        ExperimentKind.STRATEGY_COUNT: STRATEGY_TRIAL_HEADER,
        ExperimentKind.PER_RANK: PER_RANK_TRIAL_HEADER,
    }[kind]


def aggregate_header(kind: ExperimentKind) -> list[str]:
    return {
        ExperimentKind.WELFARE_SWEEP: WELFARE_HEADER,
        ExperimentKind.STRATEGY_COUNT: STRATEGY_HEADER,
        ExperimentKind.PER_RANK: PER_RANK_HEADER,
    }[kind]


def aggregate_row_values(kind: ExperimentKind, row: dict) -> list:
    """Row dict -> CSV cell values in header order (handles the twin 'se')."""
    keys = STRATEGY_ROW_KEYS if kind is ExperimentKind.STRATEGY_COUNT else aggregate_header(kind)
    return [row[k] for k in keys]


def _format_cell(value) -> str:
    if value is None:
        return ""
    return str(value)


def write_aggregate_csv(path: str, kind: ExperimentKind, rows: Iterable[dict]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(aggregate_header(kind))
        for row in rows:
            writer.writerow([_format_cell(v) for v in aggregate_row_values(kind, row)])


class TrialCsvSink:
    """Streams per-trial rows to a CSV file; every row carries (seed, trial)."""

    def __init__(self, path: str, kind: ExperimentKind):
        self._file = open(path, "w", newline="", encoding="utf-8")
        self._writer = csv.writer(self._file)
        self._header = trial_header(kind)
        self._writer.writerow(self._header)

    def __call__(self, row: dict) -> None:
        self._writer.writerow([_format_cell(row[k]) for k in self._header])

    def close(self) -> None:
        self._file.close()


def write_run_metadata(path: str, spec: ExperimentSpec) -> None:
    doc = {
        "kind": spec.kind.value,
        "seed": spec.seed,
        "trials": spec.trials,
        "beta_step": spec.beta_step,
        "mechanisms": [m.value for m in spec.mechanisms],
        "strategic_counts": list(spec.strategic_counts),
        "selection": spec.selection.value,
        "per_rank_betas": list(spec.per_rank_betas),
        "gen": {
            "n_students": spec.gen.n_students,
            "n_colleges": spec.gen.n_colleges,
            "quota": spec.gen.quota,
            "beta": spec.gen.beta,
            "reputations": list(spec.gen.reputations),
            "alpha_dist": {
                "kind": spec.gen.alpha_dist.kind,
                "lo": spec.gen.alpha_dist.lo,
                "hi": spec.gen.alpha_dist.hi,
                "value": spec.gen.alpha_dist.value,
            },
            "f_max": spec.gen.f_max,
            "seed": spec.gen.seed,
        },
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")
