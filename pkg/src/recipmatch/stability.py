"""Stability verification and brute-force oracles.

A matching is stable (with respect to the reciprocating lists) when no
student and college both strictly prefer each other to what they currently
hold.  ``blocking_pairs`` enumerates every violating pair; the exhaustive
``enumerate_stable`` oracle and ``is_student_optimal`` exist to certify the
matcher's output on instances small enough to enumerate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import Instance, Matching, PreferenceList, UNMATCHED, college_assignments
from .mechanism import MechanismConfig, reciprocating_profile

#: Refuse to enumerate assignment spaces larger than this.
ENUMERATION_LIMIT = 10**7


@dataclass(frozen=True)
class BlockingPair:
    student: str
    college: str
    student_gain: int   # ranks gained by the student (unmatched counts as worst+1)
    college_gain: int   # positions gained by the college (vacancy counts as worst+1)


def blocking_pairs(
    matching: Matching,
    student_prefs: Mapping[str, PreferenceList],
    college_recip_prefs: Mapping[str, PreferenceList],
    quotas: Mapping[str, int],
) -> list[BlockingPair]:
    """All (student, college) pairs that would defect together.

    A pair blocks when the student strictly prefers the college to their
    assignment and the college either has spare quota (and lists the student)
    or strictly prefers the student to someone it currently holds.  An empty
    result certifies stability.
    """
    by_college = college_assignments(matching)
    position = {c: {s: i + 1 for i, s in enumerate(lst)} for c, lst in college_recip_prefs.items()}
    worst_held = {}
    for c, lst in college_recip_prefs.items():
        seats = by_college.get(c, [])
        worst_held[c] = max((position[c][s] for s in seats), default=0)
    pairs = []
    for sid in sorted(matching):
        prefs = student_prefs.get(sid, ())
        current = matching[sid]
        current_rank = len(prefs) + 1 if current is UNMATCHED else prefs.index(current) + 1
        for r, cid in enumerate(prefs, start=1):
            if r >= current_rank:
                break
            pos = position.get(cid, {}).get(sid)
            if pos is None:
                continue  # the college never considers this student
            seats_used = len(by_college.get(cid, []))
            if seats_used < quotas[cid]:
                displaced_pos = len(college_recip_prefs[cid]) + 1
            elif pos < worst_held[cid]:
                displaced_pos = worst_held[cid]
            else:
                continue
            pairs.append(BlockingPair(sid, cid, current_rank - r, displaced_pos - pos))
    return pairs


def blocking_pairs_csv(pairs: Sequence[BlockingPair]) -> str:
    lines = ["student,college,student_gain,college_gain"]
    lines += [f"{p.student},{p.college},{p.student_gain},{p.college_gain}" for p in pairs]
    return "\n".join(lines) + "\n"


def enumerate_stable(
    instance: Instance,
    submitted: Mapping[str, PreferenceList],
    config: MechanismConfig = MechanismConfig(),
) -> list[Matching]:
    """Every stable matching, by exhaustive search.

    Iterates all individually rational assignments (each student gets a
    college from their own list that also lists them, or stays unmatched),
    rejects quota violations, and keeps those with no blocking pair.  Refuses
    instances where (#colleges + 1) ** #students exceeds ENUMERATION_LIMIT.
    """
    n, m = len(instance.students), len(instance.colleges)
    if (m + 1) ** n > ENUMERATION_LIMIT:
        raise ValueError(
            f"assignment space ({m + 1}) ** {n} exceeds enumeration limit {ENUMERATION_LIMIT}"
        )
    profile = reciprocating_profile(instance, submitted, config)
    quotas = instance.quotas()
    acceptable_to = {c: set(lst) for c, lst in profile.items()}
    student_ids = [s.id for s in instance.students]
    options = [
        [UNMATCHED] + [c for c in submitted.get(sid, ()) if sid in acceptable_to.get(c, ())]
        for sid in student_ids
    ]
    stable = []
    for combo in itertools.product(*options):
        used: dict[str, int] = {}
        feasible = True
        for cid in combo:
            if cid is UNMATCHED:
                continue
            used[cid] = used.get(cid, 0) + 1
            if used[cid] > quotas[cid]:
                feasible = False
                break
        if not feasible:
            continue
        matching = dict(zip(student_ids, combo))
        if not blocking_pairs(matching, submitted, profile, quotas):
            stable.append(matching)
    return stable


def is_student_optimal(
    candidate: Matching,
    stable_set: Sequence[Matching],
    student_prefs: Mapping[str, PreferenceList],
) -> bool:
    """True when no student does better in any other stable matching."""
    if candidate not in stable_set:
        raise ValueError("candidate matching is not in the stable set")

    def rank(sid: str, matching: Matching) -> float:
        cid = matching[sid]
        if cid is UNMATCHED:
            return float("inf")
        return student_prefs[sid].index(cid) + 1

    for other in stable_set:
        for sid in candidate:
            if rank(sid, candidate) > rank(sid, other):
                return False
    return True
