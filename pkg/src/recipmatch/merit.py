"""Merit scoring and construction of colleges' reciprocating preferences.

A college evaluates an applicant by blending the exam score with an interest
bonus for the rank the applicant gave the college:

    merit = (1 - alpha) * score + alpha * bonus(rank)

Sorting applicants by merit (ties: score, then a seeded lottery) yields the
college's reciprocating preference list.  alpha = 0 reproduces a plain
score ordering (the Gale-Shapley college side); alpha = 1 orders by declared
interest first, which is the Boston-style priority.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

from .core import Band, BonusFunction, College, PreferenceList, Student, rank_of
from .streams import unit_uniform

#: Merit differences at or below this are treated as ties.
MERIT_TOL = 1e-9


class UnlistedPolicy(enum.Enum):
    """How a college treats a student who did not list it at all."""

    UNACCEPTABLE = "unacceptable"  # the college never considers the student
    ACCEPTABLE = "acceptable"      # considered with interest bonus 0


@dataclass(frozen=True)
class MeritEntry:
    student: str
    merit: float
    score: float
    lottery: float


def merit_score(alpha: float, score: float, bonus: BonusFunction, rank: int) -> float:
    """(1 - alpha) * score + alpha * bonus(rank).

    Raises ValueError when rank falls outside the bonus table's domain.
    """
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha {alpha} outside [0, 1]")
    return (1.0 - alpha) * score + alpha * bonus.value(rank)


def marriage_merit(
    alpha_w: float, initial_rating: float, bonus_w: BonusFunction, rank_of_w_in_m: int
) -> float:
    """Merit of a suitor: own rating blended with how highly the suitor ranked you.

    Same arithmetic as merit_score; named so the one-to-one pipeline reads
    naturally.  Works symmetrically for either side.
    """
    return merit_score(alpha_w, initial_rating, bonus_w, rank_of_w_in_m)


def lottery_value(seed: object, college_id: str, student_id: str) -> float:
    """Tie-break lottery draw for one (college, student) pair.

    Keyed by ids, so the draw does not depend on the order in which pairs
    are evaluated.
    """
    return unit_uniform(seed, "lottery", college_id, student_id)


def merit_entries(
    college: College,
    submitted: Mapping[str, PreferenceList],
    students: Iterable[Student],
    lottery_seed: object = 0,
    unlisted: UnlistedPolicy = UnlistedPolicy.UNACCEPTABLE,
) -> list[MeritEntry]:
    """Merit table for one college, in reciprocating-preference order."""
    entries = []
    for s in students:
        rank = rank_of(submitted.get(s.id, ()), college.id)
        if rank is None:
            if unlisted is UnlistedPolicy.UNACCEPTABLE:
                continue
            merit = (1.0 - college.alpha) * s.score  # no declared interest: bonus 0
        else:
            merit = merit_score(college.alpha, s.score, college.bonus, rank)
        entries.append(MeritEntry(s.id, merit, s.score, lottery_value(lottery_seed, college.id, s.id)))
    return _order(entries)


def _order(entries: list[MeritEntry]) -> list[MeritEntry]:
    # Sort by merit, then resolve near-ties (within MERIT_TOL, chained through
    # neighbours) by score, lottery, and finally id for full determinism.
    entries.sort(key=lambda e: -e.merit)
    groups: list[list[MeritEntry]] = []
    for e in entries:
        if groups and groups[-1][-1].merit - e.merit <= MERIT_TOL:
            groups[-1].append(e)
        else:
            groups.append([e])
    out: list[MeritEntry] = []
    for g in groups:
        g.sort(key=lambda e: (-e.score, e.lottery, e.student))
        out.extend(g)
    return out


def reciprocating_preference(
    college: College,
    submitted: Mapping[str, PreferenceList],
    students: Iterable[Student],
    lottery_seed: object = 0,
    unlisted: UnlistedPolicy = UnlistedPolicy.UNACCEPTABLE,
) -> PreferenceList:
    """The college's merit-ordered list derived from submitted student lists."""
    return tuple(e.student for e in merit_entries(college, submitted, students, lottery_seed, unlisted))


@dataclass(frozen=True)
class BandTable:
    """Coarse disclosure of choice numbers: programmes see bands, not ranks."""

    bands: tuple[Band, ...]

    @classmethod
    def jupas(cls) -> "BandTable":
        """The five-band A-E disclosure used by Hong Kong's JUPAS system."""
        return cls(
            (
                Band("A", 1, 3),
                Band("B", 4, 6),
                Band("C", 7, 10),
                Band("D", 11, 14),
                Band("E", 15, 25),
            )
        )


def band_bonus(band_table: BandTable, base: BonusFunction) -> BonusFunction:
    """Expand a per-band bonus table to choice numbers.

    ``base`` assigns one strictly decreasing value per band; the result is
    constant inside each band's choice interval and carries the band marker
    (strict decrease is only required across bands).  Choice numbers beyond
    the last band are outside the domain.
    """
    if len(base.table) != len(band_table.bands):
        raise ValueError(
            f"base bonus has {len(base.table)} values for {len(band_table.bands)} bands"
        )
    table: list[float] = []
    for i, band in enumerate(band_table.bands):
        if band.lo != len(table) + 1:
            raise ValueError(f"band {band.label} does not start at choice {len(table) + 1}")
        table.extend(base.value(i + 1) for _ in range(band.lo, band.hi + 1))
    return BonusFunction(tuple(table), bands=band_table.bands)


def with_alpha(college: College, alpha: float) -> College:
    """Copy of the college with its reciprocating factor replaced."""
    return replace(college, alpha=alpha)
