"""Randomized instance generation for the Monte Carlo experiments.

Scores are i.i.d. uniform; each student scores college c as

    beta * reputation(c) + (1 - beta) * personal_draw(c)

so beta interpolates between fully idiosyncratic lists (beta = 0) and one
shared reputation ordering (beta = 1).  Reciprocating factors come from a
configurable distribution.  Every draw uses a stream keyed by
(seed, trial, purpose, entity), which makes trials reproducible and mutually
independent: adding a student never perturbs anyone else's draws.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Mapping

from .core import BonusFunction, College, Instance, PreferenceList, Student
from .streams import unit_uniform, unit_uniforms

DEFAULT_REPUTATIONS = (100.0, 90.0, 80.0, 70.0, 60.0)


@dataclass(frozen=True)
class AlphaDist:
    """Distribution of the per-college reciprocating factor."""

    kind: str  # "bernoulli_half" | "uniform" | "constant"
    lo: float = 0.0
    hi: float = 0.0
    value: float = 0.0

    @classmethod
    def bernoulli_half(cls) -> "AlphaDist":
        """0 or 1, each with probability one half."""
        return cls("bernoulli_half")

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "AlphaDist":
        if lo > hi:
            raise ValueError(f"uniform alpha range [{lo}, {hi}] is empty")
        if not (0 <= lo <= 1 and 0 <= hi <= 1):
            raise ValueError(f"uniform alpha range [{lo}, {hi}] not inside [0, 1]")
        return cls("uniform", lo=lo, hi=hi)

    @classmethod
    def constant(cls, value: float) -> "AlphaDist":
        if not 0 <= value <= 1:
            raise ValueError(f"constant alpha {value} not inside [0, 1]")
        return cls("constant", value=value)

    def draw(self, u: float) -> float:
        if self.kind == "bernoulli_half":
            return 1.0 if u < 0.5 else 0.0
        if self.kind == "uniform":
            return self.lo + (self.hi - self.lo) * u
        if self.kind == "constant":
            return self.value
        raise ValueError(f"unknown alpha distribution {self.kind!r}")


@dataclass(frozen=True)
class GenConfig:
    n_students: int = 10
    n_colleges: int = 5
    quota: int = 1
    beta: float = 0.0
    reputations: tuple[float, ...] = DEFAULT_REPUTATIONS
    alpha_dist: AlphaDist = field(default_factory=AlphaDist.bernoulli_half)
    f_max: float = 100.0
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.beta <= 1:
            raise ValueError(f"beta {self.beta} outside [0, 1]")
        if len(self.reputations) != self.n_colleges:
            raise ValueError(
                f"{len(self.reputations)} reputations for {self.n_colleges} colleges"
            )

    def with_beta(self, beta: float) -> "GenConfig":
        return replace(self, beta=beta)


def student_id(i: int, n: int) -> str:
    return f"s{i:0{len(str(n - 1))}d}"

def college_id(j: int, m: int) -> str:
    return f"c{j:0{len(str(m - 1))}d}"


def college_ids(config: GenConfig) -> list[str]:
    """College ids in reputation order (index 0 = most reputed)."""
    return [college_id(j, config.n_colleges) for j in range(config.n_colleges)]


def student_ids(config: GenConfig) -> list[str]:
    return [student_id(i, config.n_students) for i in range(config.n_students)]


def default_bonus(n_colleges: int) -> BonusFunction:
    """The standard interest bonus 100, 90, ... over ranks 1..m."""
    return BonusFunction.linear(n_colleges)


def gen_scores(config: GenConfig, trial: int | str = 0) -> dict[str, float]:
    """i.i.d. uniform exam scores over [0, f_max], one stream per student."""
    return {
        sid: config.f_max * unit_uniform(config.seed, trial, "score", sid)
        for sid in student_ids(config)
    }


def gen_student_prefs(config: GenConfig, trial: int | str = 0) -> dict[str, PreferenceList]:
    """Each student ranks colleges by reputation blended with personal taste.

    Personal values are uniform on [0, 100]; ties (possible only at the
    extremes of beta) break towards the more reputed college.
    """
    cids = college_ids(config)
    prefs = {}
    for sid in student_ids(config):
        draws = unit_uniforms(config.n_colleges, config.seed, trial, "prefs", sid)
        scored = sorted(
            range(config.n_colleges),
            key=lambda j: (-(config.beta * config.reputations[j] + (1 - config.beta) * 100.0 * draws[j]), j),
        )
        prefs[sid] = tuple(cids[j] for j in scored)
    return prefs


def gen_alphas(config: GenConfig, trial: int | str = 0) -> dict[str, float]:
    return {
        cid: config.alpha_dist.draw(unit_uniform(config.seed, trial, "alpha", cid))
        for cid in college_ids(config)
    }


def gen_instance(config: GenConfig, trial: int | str = 0) -> tuple[Instance, dict[str, PreferenceList]]:
    """Assemble a full instance plus the students' true preference lists."""
    scores = gen_scores(config, trial)
    prefs = gen_student_prefs(config, trial)
    alphas = gen_alphas(config, trial)
    bonus = default_bonus(config.n_colleges)
    students = tuple(Student(sid, scores[sid]) for sid in student_ids(config))
    colleges = tuple(
        College(cid, config.quota, alphas[cid], bonus) for cid in college_ids(config)
    )
    return Instance(students, colleges, prefs, config.f_max), prefs


def score_ranks(scores: Mapping[str, float]) -> dict[str, int]:
    """1-based rank by descending score; ties break by student id."""
    ordered = sorted(scores, key=lambda sid: (-scores[sid], sid))
    return {sid: i + 1 for i, sid in enumerate(ordered)}


# ---------------------------------------------------------------------------
# Config file support (same structured-text format family as instances).
# ---------------------------------------------------------------------------


def load_gen_config(text: str) -> GenConfig:
    doc = json.loads(text)
    kwargs: dict = {}
    for key in ("n_students", "n_colleges", "quota", "beta", "f_max", "seed"):
        if key in doc:
            kwargs[key] = doc[key]
    if "reputations" in doc:
        kwargs["reputations"] = tuple(doc["reputations"])
    elif "n_colleges" in doc and doc["n_colleges"] != 5:
        m = doc["n_colleges"]
        kwargs["reputations"] = tuple(100.0 - 10.0 * j for j in range(m))
    if "alpha_dist" in doc:
        spec = doc["alpha_dist"]
        kind = spec["kind"]
        if kind == "bernoulli_half":
            kwargs["alpha_dist"] = AlphaDist.bernoulli_half()
        elif kind == "uniform":
            kwargs["alpha_dist"] = AlphaDist.uniform(spec["lo"], spec["hi"])
        elif kind == "constant":
            kwargs["alpha_dist"] = AlphaDist.constant(spec["value"])
        else:
            raise ValueError(f"unknown alpha distribution {kind!r}")
    return GenConfig(**kwargs)


def read_gen_config(path: str) -> GenConfig:
    with open(path, encoding="utf-8") as f:
        return load_gen_config(f.read())
