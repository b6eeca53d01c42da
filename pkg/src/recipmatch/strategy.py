"""Strategic behaviour: student misreports and college manipulation audits.

Students in the fully correlated setting can shield their real first choice
behind a less contested college (``strategy_s``); the minimum score gap that
makes such a deviation unprofitable is ``deviation_threshold``.  On the
college side, any profitable misreport is dominated by simply deleting
students from the true list, so ``college_manipulation_audit`` exhaustively
replays every dropping strategy, and ``rejection_chains`` simulates the
displacement cascade a deliberate rejection sets off.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .core import BonusFunction, Instance, Matching, PreferenceList
from .mechanism import MechanismConfig, da_state, deferred_acceptance, reciprocating_profile


class StrategyKind(enum.Enum):
    TRUTHFUL = "truthful"
    STRATEGY_S = "strategy_s"
    CUSTOM = "custom"


@dataclass(frozen=True)
class StudentStrategy:
    """A student's submission rule plus the knowledge it relies on."""

    kind: StrategyKind
    score_rank: int | None = None       # rank among all students, 1 = best
    custom: PreferenceList | None = None

    def submitted(self, true_pref: PreferenceList) -> PreferenceList:
        if self.kind is StrategyKind.TRUTHFUL:
            return true_pref
        if self.kind is StrategyKind.STRATEGY_S:
            if self.score_rank is None:
                raise ValueError("strategy S needs the student's score rank")
            return strategy_s(true_pref, self.score_rank)
        if self.custom is None:
            raise ValueError("custom strategy without a list")
        return self.custom


def strategy_s(true_pref: PreferenceList, score_rank: int) -> PreferenceList:
    """Score-rank-indexed misreport for five commonly ordered colleges.

    The top student reports truthfully; everyone else promotes the college
    matching their rank (capped at the fifth) and buries the contested first
    choice at the bottom.
    """
    if len(true_pref) != 5:
        raise ValueError(f"strategy S is defined for exactly 5 colleges, got {len(true_pref)}")
    if score_rank < 1:
        raise ValueError(f"score rank must be positive, got {score_rank}")
    c1, c2, c3, c4, c5 = true_pref
    if score_rank == 1:
        return (c1, c2, c3, c4, c5)
    if score_rank == 2:
        return (c2, c3, c4, c5, c1)
    if score_rank == 3:
        return (c3, c2, c4, c5, c1)
    if score_rank == 4:
        return (c4, c2, c3, c5, c1)
    return (c5, c2, c3, c4, c1)


def demote_favorite(true_pref: PreferenceList) -> PreferenceList:
    """The general shielding misreport: move the first choice to the bottom."""
    if len(true_pref) < 2:
        return true_pref
    return true_pref[1:] + true_pref[:1]


def deviation_threshold(epsilon: float, bonus: BonusFunction) -> float:
    """Largest score gap a first-choice bonus can overcome.

    With reciprocating factor epsilon, a student trailing by less than
    delta = epsilon / (1 - epsilon) * (bonus(1) - bonus(2)) overtakes a rival
    who listed the college second, so any smaller gap invites manipulation.
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie strictly inside (0, 1), got {epsilon}")
    return epsilon / (1.0 - epsilon) * (bonus.value(1) - bonus.value(2))


@dataclass(frozen=True)
class DroppingStrategy:
    """A college report obtained by deleting students from the true list."""

    base: PreferenceList
    dropped: frozenset[str]

    @property
    def result(self) -> PreferenceList:
        return tuple(s for s in self.base if s not in self.dropped)


def dropping_strategies(base: PreferenceList, max_drop: int) -> Iterator[DroppingStrategy]:
    """All ways to drop at most max_drop students, keeping relative order."""
    if max_drop > len(base):
        raise ValueError(f"cannot drop {max_drop} from a list of {len(base)}")
    for k in range(max_drop + 1):
        for combo in itertools.combinations(base, k):
            yield DroppingStrategy(base, frozenset(combo))


@dataclass(frozen=True)
class RejectionChainResult:
    returns_to_college: bool
    assignment: frozenset[str]          # the college's tentative set at return
    returning_student: str | None = None  # who re-applied, when the chain came back
    removed_student: str | None = None    # whose removal set off that chain


def rejection_chains(
    instance: Instance,
    submitted: Mapping[str, PreferenceList],
    college_id: str,
    rejected: Iterable[str],
    config: MechanismConfig = MechanismConfig(),
) -> RejectionChainResult:
    """Simulate the cascade after a college rejects part of its assignment.

    Starting from the deferred-acceptance outcome, the college expels the
    given subset of its matched students.  Expelled students are released one
    at a time, least preferred first; each resumes applying down their own
    list, possibly displacing students elsewhere, who continue the cascade.
    The simulation stops the moment any displaced student applies back to the
    rejecting college, or once every chain has died out.

    Termination is guaranteed: each release shrinks the expelled set, and a
    cascade makes each application pointer advance monotonically.
    """
    profile = reciprocating_profile(instance, submitted, config)
    quotas = instance.quotas()
    state = da_state(submitted, profile, quotas)
    assigned = set(state.held[college_id])
    rejected = set(rejected)
    if not rejected:
        raise ValueError("the rejected set must be non-empty")
    if not rejected <= assigned:
        raise ValueError(f"rejected set {sorted(rejected)} is not part of {college_id}'s assignment")

    position = {c: {s: i for i, s in enumerate(lst)} for c, lst in profile.items()}
    held = state.held
    nxt = state.next_choice
    held[college_id] = [s for s in held[college_id] if s not in rejected]

    pending = sorted(rejected, key=lambda s: position[college_id][s])
    while pending:
        removed = pending.pop()  # least preferred remaining
        student = removed
        while True:
            prefs = submitted[student]
            if nxt[student] >= len(prefs):
                break  # applied everywhere: this chain dies, release the next
            target = prefs[nxt[student]]
            nxt[student] += 1
            if target == college_id:
                return RejectionChainResult(
                    True, frozenset(held[college_id]), returning_student=student, removed_student=removed
                )
            pos = position.get(target)
            if pos is None or student not in pos:
                continue
            seats = held[target]
            if len(seats) < quotas[target]:
                seats.append(student)
                break  # absorbed: release the next expelled student
            worst = max(seats, key=pos.__getitem__)
            if pos[student] < pos[worst]:
                seats.remove(worst)
                seats.append(student)
                student = worst  # the displaced student continues the cascade
            # otherwise rejected here; keep applying
    return RejectionChainResult(False, frozenset(held[college_id]))


@dataclass(frozen=True)
class AuditRow:
    strategy_id: int
    dropped_count: int
    improved: bool


@dataclass(frozen=True)
class AuditResult:
    college: str
    truthful: tuple[str, ...]   # assignment under truthful reporting, best first
    best: tuple[str, ...]       # best assignment found over all dropping strategies
    improved: bool              # did any strategy strictly beat truthful?
    rows: tuple[AuditRow, ...]


def _sorted_by_position(students: Iterable[str], position: Mapping[str, int]) -> tuple[str, ...]:
    return tuple(sorted(students, key=position.__getitem__))


def _strictly_prefers(
    new: tuple[str, ...], old: tuple[str, ...], position: Mapping[str, int], quota: int
) -> bool:
    """Responsive set comparison: slotwise at least as good, somewhere better."""
    pad = float("inf")
    new_pos = [position[s] for s in new] + [pad] * (quota - len(new))
    old_pos = [position[s] for s in old] + [pad] * (quota - len(old))
    return all(a <= b for a, b in zip(new_pos, old_pos)) and any(
        a < b for a, b in zip(new_pos, old_pos)
    )


def college_manipulation_audit(
    instance: Instance,
    submitted: Mapping[str, PreferenceList],
    college_id: str,
    max_drop: int | None = None,
    config: MechanismConfig = MechanismConfig(),
) -> AuditResult:
    """Replay the match under every dropping strategy of one college.

    Outcomes are compared by the college's *true* reciprocating preference,
    slot by slot against its quota.  Dropping strategies exhaust everything a
    college can gain by misreporting, so an audit with no improvement
    certifies that truthful reporting was optimal ex post.
    """
    profile = reciprocating_profile(instance, submitted, config)
    quotas = instance.quotas()
    base = profile[college_id]
    position = {s: i for i, s in enumerate(base)}
    quota = quotas[college_id]
    if max_drop is None:
        max_drop = len(base)

    def assigned(matching: Matching) -> tuple[str, ...]:
        return _sorted_by_position(
            (s for s, c in matching.items() if c == college_id), position
        )

    truthful = assigned(deferred_acceptance(submitted, profile, quotas))
    best = truthful
    rows = []
    any_improved = False
    for i, strat in enumerate(dropping_strategies(base, max_drop)):
        trial_profile = dict(profile)
        trial_profile[college_id] = strat.result
        outcome = assigned(deferred_acceptance(submitted, trial_profile, quotas))
        improved = _strictly_prefers(outcome, truthful, position, quota)
        if improved and (not any_improved or _strictly_prefers(outcome, best, position, quota)):
            best = outcome
        any_improved = any_improved or improved
        rows.append(AuditRow(i, len(strat.dropped), improved))
    return AuditResult(college_id, truthful, best, any_improved, tuple(rows))


def audit_csv(seed: object, result: AuditResult) -> str:
    lines = ["seed,college,strategy_id,dropped_count,improved"]
    lines += [
        f"{seed},{result.college},{row.strategy_id},{row.dropped_count},{str(row.improved).lower()}"
        for row in result.rows
    ]
    return "\n".join(lines) + "\n"
