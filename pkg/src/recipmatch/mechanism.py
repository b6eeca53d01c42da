"""Matching-phase algorithms.

Student-proposing deferred acceptance runs on whatever lists it is handed;
the generalized pipeline first derives each college's reciprocating
preference from the submitted student lists and then defers to DA, so its
output is stable and student-optimal with respect to those derived lists.
The direct Boston (immediate acceptance) round procedure is kept as an
independent code path; with alpha = 1 the two routes agree.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from typing import Mapping

from .core import BonusFunction, Instance, Matching, PreferenceList, UNMATCHED, validate
from .merit import (
    MeritEntry,
    UnlistedPolicy,
    _order,
    lottery_value,
    reciprocating_preference,
    with_alpha,
)


class Mode(enum.Enum):
    GENERALIZED = "generalized"
    PURE_DA = "pure_da"  # reciprocating factors forced to 0 (plain score order)
    PURE_BM = "pure_bm"  # direct round-by-round immediate acceptance


class Proposer(enum.Enum):
    MEN = "men"
    WOMEN = "women"


@dataclass(frozen=True)
class MechanismConfig:
    mode: Mode = Mode.GENERALIZED
    lottery_seed: object = 0
    unlisted: UnlistedPolicy = UnlistedPolicy.UNACCEPTABLE


@dataclass
class DAState:
    """Internal engine state, exposed so rejection chains can resume it."""

    held: dict[str, list[str]]      # college id -> tentatively held students
    next_choice: dict[str, int]     # student id -> index of next list entry to try
    matching: Matching = field(default_factory=dict)


def da_state(
    student_prefs: Mapping[str, PreferenceList],
    college_prefs: Mapping[str, PreferenceList],
    quotas: Mapping[str, int],
    order: list[str] | None = None,
) -> DAState:
    """Run student-proposing deferred acceptance and keep the engine state.

    Students propose down their lists; colleges hold the best applicants seen
    so far (by position in their list) and release them only for someone
    better.  The outcome does not depend on the proposal order; ``order``
    exists so tests can assert exactly that.
    """
    rank = {c: {s: i for i, s in enumerate(lst)} for c, lst in college_prefs.items()}
    nxt = {s: 0 for s in student_prefs}
    held: dict[str, list[str]] = {c: [] for c in college_prefs}
    free = sorted(student_prefs, reverse=True) if order is None else list(reversed(order))
    while free:
        s = free.pop()
        prefs = student_prefs[s]
        while nxt[s] < len(prefs):
            c = prefs[nxt[s]]
            nxt[s] += 1
            pos = rank.get(c)
            if pos is None or s not in pos:
                continue  # unacceptable to the college
            seats = held[c]
            if len(seats) < quotas[c]:
                seats.append(s)
                break
            worst = max(seats, key=pos.__getitem__)
            if pos[s] < pos[worst]:
                seats.remove(worst)
                seats.append(s)
                free.append(worst)
                break
        # list exhausted: student stays unmatched
    matching: Matching = {s: UNMATCHED for s in student_prefs}
    for c, seats in held.items():
        for s in seats:
            matching[s] = c
    return DAState(held, nxt, matching)


def deferred_acceptance(
    student_prefs: Mapping[str, PreferenceList],
    college_prefs: Mapping[str, PreferenceList],
    quotas: Mapping[str, int],
) -> Matching:
    """Student-optimal matching, stable with respect to the given lists."""
    return da_state(student_prefs, college_prefs, quotas).matching


def boston(
    student_prefs: Mapping[str, PreferenceList],
    college_orderings: Mapping[str, PreferenceList],
    quotas: Mapping[str, int],
) -> Matching:
    """Immediate acceptance: round r assigns r-th choices, offers are final.

    In round r every still-unmatched student applies to the r-th entry of
    their list; a college with remaining quota admits applicants in the order
    of ``college_orderings`` (restricted to this round's applicants) until
    full.  Admissions are committed and never revisited.  A student whose
    r-th choice is already full simply sits the round out and continues with
    choice r+1 next round.
    """
    rank = {c: {s: i for i, s in enumerate(lst)} for c, lst in college_orderings.items()}
    remaining = dict(quotas)
    matching: Matching = {s: UNMATCHED for s in student_prefs}
    unmatched = set(student_prefs)
    rounds = max((len(p) for p in student_prefs.values()), default=0)
    for r in range(rounds):
        applicants: dict[str, list[str]] = {}
        for s in unmatched:
            prefs = student_prefs[s]
            if r < len(prefs):
                applicants.setdefault(prefs[r], []).append(s)
        for c, group in applicants.items():
            if remaining.get(c, 0) <= 0:
                continue
            pos = rank.get(c, {})
            eligible = sorted((s for s in group if s in pos), key=pos.__getitem__)
            for s in eligible[: remaining[c]]:
                matching[s] = c
                unmatched.discard(s)
            remaining[c] -= min(len(eligible), remaining[c])
        if not unmatched:
            break
    return matching


def reciprocating_profile(
    instance: Instance,
    submitted: Mapping[str, PreferenceList],
    config: MechanismConfig = MechanismConfig(),
) -> dict[str, PreferenceList]:
    """Each college's reciprocating preference under the configured mode."""
    profile = {}
    for college in instance.colleges:
        if config.mode is Mode.PURE_DA:
            college = with_alpha(college, 0.0)
        elif config.mode is Mode.PURE_BM:
            college = with_alpha(college, 1.0)
        profile[college.id] = reciprocating_preference(
            college, submitted, instance.students, config.lottery_seed, config.unlisted
        )
    return profile


def score_orderings(
    instance: Instance, lottery_seed: object = 0
) -> dict[str, PreferenceList]:
    """Per-college ordering by raw score (ties by lottery, then id)."""
    out = {}
    for c in instance.colleges:
        ranked = sorted(
            instance.students,
            key=lambda s: (-s.score, lottery_value(lottery_seed, c.id, s.id), s.id),
        )
        out[c.id] = tuple(s.id for s in ranked)
    return out


def generalized_match(
    instance: Instance,
    submitted: Mapping[str, PreferenceList],
    config: MechanismConfig = MechanismConfig(),
) -> Matching:
    """Full pipeline: derive reciprocating preferences, then match.

    Students' own side is used exactly as submitted.  PURE_BM runs the round
    procedure directly (college order = raw score, which is what the alpha=1
    merit ordering reduces to within a round); the other modes run deferred
    acceptance on the derived lists.
    """
    problems = validate(instance)
    if problems:
        raise ValueError("invalid instance: " + "; ".join(problems))
    if config.mode is Mode.PURE_BM:
        return boston(submitted, score_orderings(instance, config.lottery_seed), instance.quotas())
    profile = reciprocating_profile(instance, submitted, config)
    return deferred_acceptance(submitted, profile, instance.quotas())


def marriage_reciprocating_profile(
    own_prefs: Mapping[str, PreferenceList],
    other_prefs: Mapping[str, PreferenceList],
    ratings: Mapping[str, Mapping[str, float]],
    alphas: Mapping[str, float],
    bonuses: Mapping[str, BonusFunction],
    lottery_seed: object = 0,
) -> dict[str, PreferenceList]:
    """One side's reciprocating lists for the one-to-one (marriage) problem.

    Agent a's merit for candidate b blends a's own rating of b with a bonus
    for a's position in b's *initial* list (no declared interest: bonus 0).
    Candidates a did not list at all stay unacceptable.
    """
    profile = {}
    for a, prefs in own_prefs.items():
        entries = []
        for b in prefs:
            r = None
            if b in other_prefs:
                lst = other_prefs[b]
                r = lst.index(a) + 1 if a in lst else None
            rating = ratings[a][b]
            if r is None:
                m = (1.0 - alphas[a]) * rating
            else:
                m = (1.0 - alphas[a]) * rating + alphas[a] * bonuses[a].value(r)
            entries.append(MeritEntry(b, m, rating, lottery_value(lottery_seed, a, b)))
        profile[a] = tuple(e.student for e in _order(entries))
    return profile


def marriage_match(
    men_prefs: Mapping[str, PreferenceList],
    women_prefs: Mapping[str, PreferenceList],
    ratings: Mapping[str, Mapping[str, float]],
    alphas: Mapping[str, float],
    bonuses: Mapping[str, BonusFunction],
    proposer: Proposer = Proposer.MEN,
    lottery_seed: object = 0,
) -> Matching:
    """One-to-one matching on both sides' reciprocating preferences.

    Both sides' lists are rebuilt from the *other* side's initial lists
    (which avoids any circular dependency), then the proposer side runs
    deferred acceptance.  Returns proposer id -> partner id (or UNMATCHED).
    """
    men_recip = marriage_reciprocating_profile(men_prefs, women_prefs, ratings, alphas, bonuses, lottery_seed)
    women_recip = marriage_reciprocating_profile(women_prefs, men_prefs, ratings, alphas, bonuses, lottery_seed)
    if proposer is Proposer.MEN:
        proposing, receiving = men_recip, women_recip
    else:
        proposing, receiving = women_recip, men_recip
    quotas = {a: 1 for a in receiving}
    return deferred_acceptance(proposing, receiving, quotas)
