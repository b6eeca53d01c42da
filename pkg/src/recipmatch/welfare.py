"""Rank-based utilities and social welfare accounting.

An agent's utility is additive over its matched partners and depends only on
where each partner sits in the agent's preference list; being unmatched pays
the rank-0 value.  Aggregates simply sum one side; social welfare sums both.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

from .core import Matching, PreferenceList, UNMATCHED, college_assignments


class Side(enum.Enum):
    STUDENTS = "students"
    COLLEGES = "colleges"


@dataclass(frozen=True)
class UtilityFunction:
    """rank -> utility table, non-increasing for rank >= 1; rank 0 = unmatched."""

    table: tuple[float, ...]
    unmatched: float = 0.0

    @classmethod
    def linear(cls, max_rank: int, top: float = 10.0, step: float = 1.0) -> "UtilityFunction":
        """top, top-step, ... over ranks 1..max_rank (unmatched pays 0)."""
        return cls(tuple(top - step * i for i in range(max_rank)))

    def __call__(self, rank: int) -> float:
        if rank == 0:
            return self.unmatched
        if not 1 <= rank <= len(self.table):
            raise ValueError(f"rank {rank} outside utility table 0..{len(self.table)}")
        return self.table[rank - 1]

    def violations(self) -> list[str]:
        return [
            f"utility increases from rank {r} to {r + 1}"
            for r in range(1, len(self.table))
            if self.table[r] > self.table[r - 1]
        ]


def agent_utility(
    agent: str,
    matching: Matching,
    prefs: PreferenceList,
    utility: UtilityFunction,
) -> float:
    """Utility of one agent; ``prefs`` is the list ranks are measured against.

    Students are recognised as keys of the matching; any other agent id is a
    college, whose utility sums over every student assigned to it.  A matched
    partner missing from ``prefs`` is an error: there is no utility for an
    unranked partner.
    """
    if agent in matching:
        college = matching[agent]
        if college is UNMATCHED:
            return utility(0)
        if college not in prefs:
            raise ValueError(f"{agent} matched to {college}, which its list does not rank")
        return utility(prefs.index(college) + 1)
    assigned = college_assignments(matching).get(agent, [])
    if not assigned:
        return utility(0)
    total = 0.0
    for sid in assigned:
        if sid not in prefs:
            raise ValueError(f"{agent} matched to {sid}, which its list does not rank")
        total += utility(prefs.index(sid) + 1)
    return total


def aggregate(
    matching: Matching,
    side: Side,
    prefs: Mapping[str, PreferenceList],
    utility: UtilityFunction,
) -> float:
    """Sum of one side's utilities; ``prefs`` maps each agent to its list."""
    if side is Side.STUDENTS:
        return sum(agent_utility(s, matching, prefs[s], utility) for s in sorted(matching))
    return sum(agent_utility(c, matching, prefs[c], utility) for c in sorted(prefs))


def social_welfare(
    matching: Matching,
    student_prefs: Mapping[str, PreferenceList],
    college_prefs: Mapping[str, PreferenceList],
    student_utility: UtilityFunction,
    college_utility: UtilityFunction,
) -> float:
    return aggregate(matching, Side.STUDENTS, student_prefs, student_utility) + aggregate(
        matching, Side.COLLEGES, college_prefs, college_utility
    )


WELFARE_TRIAL_FIELDS = ["trial", "beta", "mechanism", "pi_S", "pi_C", "Pi"]


def welfare_row(trial: int, beta: float, mechanism: str, pi_s: float, pi_c: float) -> dict:
    """One per-trial welfare record in the standard column order."""
    return {
        "trial": trial,
        "beta": beta,
        "mechanism": mechanism,
        "pi_S": pi_s,
        "pi_C": pi_c,
        "Pi": pi_s + pi_c,
    }
