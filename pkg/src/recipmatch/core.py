"""Domain types for two-sided matching markets with reciprocating preferences.

Students carry an exam score, colleges carry a quota, a reciprocating factor
``alpha`` and an interest-bonus table.  Preference lists are ordered tuples of
agent ids; an agent left off a list is unacceptable to the list's owner.
A matching maps every student id to a college id or to ``UNMATCHED``.

All types are immutable values; they can be shared freely across concurrent
trial workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

#: Sentinel for a student without a seat.  Welfare code maps it to rank 0.
UNMATCHED = None

PreferenceList = tuple[str, ...]
#: student id -> college id, or UNMATCHED
Matching = dict


@dataclass(frozen=True)
class Student:
    id: str
    score: float


@dataclass(frozen=True)
class Band:
    """A contiguous run of choice numbers disclosed as a single band."""

    label: str
    lo: int
    hi: int


@dataclass(frozen=True)
class BonusFunction:
    """Interest bonus by the rank a student gave the college.

    ``table[r - 1]`` is the bonus for listing the college as the r-th choice.
    A plain table must be strictly decreasing in r.  When ``bands`` is set the
    table is constant inside each band and strictly decreasing across bands
    (within-band choice order is not disclosed, so it cannot be rewarded).
    """

    table: tuple[float, ...]
    bands: tuple[Band, ...] | None = None

    @classmethod
    def linear(cls, n: int, top: float = 100.0, step: float = 10.0) -> "BonusFunction":
        """Strictly decreasing table top, top-step, ... over ranks 1..n."""
        return cls(tuple(top - step * r for r in range(n)))

    @property
    def domain_size(self) -> int:
        return len(self.table)

    def value(self, rank: int) -> float:
        if not 1 <= rank <= len(self.table):
            raise ValueError(f"rank {rank} outside bonus domain 1..{len(self.table)}")
        return self.table[rank - 1]

    def violations(self) -> list[str]:
        errs = []
        if self.bands is None:
            for r in range(2, len(self.table) + 1):
                if not self.table[r - 2] > self.table[r - 1]:
                    errs.append(f"bonus not strictly decreasing at rank {r}")
        else:
            expect_lo = 1
            prev_value = None
            for b in self.bands:
                if b.lo != expect_lo or b.hi < b.lo:
                    errs.append(f"band {b.label} interval not contiguous/ascending")
                    break
                vals = {self.table[r - 1] for r in range(b.lo, min(b.hi, len(self.table)) + 1)}
                if len(vals) != 1:
                    errs.append(f"band {b.label} bonus not constant inside band")
                value = self.table[b.lo - 1]
                if prev_value is not None and not prev_value > value:
                    errs.append(f"bonus not strictly decreasing across bands at {b.label}")
                prev_value = value
                expect_lo = b.hi + 1
            if expect_lo != len(self.table) + 1:
                errs.append("band intervals do not cover the bonus table")
        return errs


@dataclass(frozen=True)
class College:
    id: str
    quota: int
    alpha: float
    bonus: BonusFunction


@dataclass(frozen=True)
class Instance:
    """A full admissions problem: agents plus the students' preference lists.

    ``student_prefs`` holds the lists as filed (true preferences unless a
    strategy layer substituted them).  Colleges' lists are always derived from
    these via the merit pipeline, so they are not stored.
    """

    students: tuple[Student, ...]
    colleges: tuple[College, ...]
    student_prefs: Mapping[str, PreferenceList]
    f_max: float = 100.0

    def scores(self) -> dict[str, float]:
        return {s.id: s.score for s in self.students}

    def quotas(self) -> dict[str, int]:
        return {c.id: c.quota for c in self.colleges}

    def college(self, college_id: str) -> College:
        for c in self.colleges:
            if c.id == college_id:
                return c
        raise KeyError(college_id)


def rank_of(prefs: PreferenceList, target: str) -> int | None:
    """1-based position of target in the list, or None if unlisted."""
    try:
        return prefs.index(target) + 1
    except ValueError:
        return None


def validate(instance: Instance) -> list[str]:
    """Every invariant violation, each tagged with the offending id.

    An empty list means the instance is well formed.  Violations are data,
    not exceptions: callers that require validity raise on a non-empty result.
    """
    errs: list[str] = []
    student_ids = [s.id for s in instance.students]
    college_ids = [c.id for c in instance.colleges]
    if len(set(student_ids)) != len(student_ids):
        errs.append("duplicate student ids")
    if len(set(college_ids)) != len(college_ids):
        errs.append("duplicate college ids")
    for s in instance.students:
        if not 0 <= s.score <= instance.f_max:
            errs.append(f"student {s.id}: score out of range [0, {instance.f_max}]")
    for c in instance.colleges:
        if c.quota < 1:
            errs.append(f"college {c.id}: quota must be >= 1")
        if not 0 <= c.alpha <= 1:
            errs.append(f"college {c.id}: alpha out of range [0, 1]")
        errs.extend(f"college {c.id}: {e}" for e in c.bonus.violations())
    known_students = set(student_ids)
    known_colleges = set(college_ids)
    for sid, prefs in instance.student_prefs.items():
        if sid not in known_students:
            errs.append(f"prefs for unknown student {sid}")
        if len(set(prefs)) != len(prefs):
            errs.append(f"student {sid}: duplicate entries in preference list")
        for cid in prefs:
            if cid not in known_colleges:
                errs.append(f"student {sid}: unknown college {cid} in preference list")
    return errs


# ---------------------------------------------------------------------------
# Instance file format: a single JSON document with fixed field names
# (f_max, students, colleges, quota, alpha, bonus, prefs).  Dumping is
# canonical, so load -> dump round-trips bit-identically.
# ---------------------------------------------------------------------------


def dump_instance(instance: Instance) -> str:
    colleges = []
    for c in instance.colleges:
        rec: dict = {
            "id": c.id,
            "quota": c.quota,
            "alpha": c.alpha,
            "bonus": {str(r): c.bonus.table[r - 1] for r in range(1, len(c.bonus.table) + 1)},
        }
        if c.bonus.bands is not None:
            rec["bands"] = [
                {"band": b.label, "from": b.lo, "to": b.hi, "value": c.bonus.table[b.lo - 1]}
                for b in c.bonus.bands
            ]
        colleges.append(rec)
    doc = {
        "f_max": instance.f_max,
        "students": [{"id": s.id, "score": s.score} for s in instance.students],
        "colleges": colleges,
        "prefs": {s.id: list(instance.student_prefs.get(s.id, ())) for s in instance.students},
    }
    return json.dumps(doc, indent=2) + "\n"


def load_instance(text: str) -> Instance:
    doc = json.loads(text)
    students = tuple(Student(rec["id"], rec["score"]) for rec in doc["students"])
    colleges = []
    for rec in doc["colleges"]:
        table = tuple(rec["bonus"][str(r)] for r in range(1, len(rec["bonus"]) + 1))
        bands = None
        if "bands" in rec:
            bands = tuple(Band(b["band"], b["from"], b["to"]) for b in rec["bands"])
        colleges.append(College(rec["id"], rec["quota"], rec["alpha"], BonusFunction(table, bands)))
    prefs = {sid: tuple(lst) for sid, lst in doc["prefs"].items()}
    return Instance(students, tuple(colleges), prefs, doc["f_max"])


def read_instance(path: str) -> Instance:
    with open(path, encoding="utf-8") as f:
        return load_instance(f.read())


def write_instance(path: str, instance: Instance) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dump_instance(instance))


def matching_lines(matching: Matching) -> list[str]:
    """Serialize as 'student_id,college_id' lines, '-' when unmatched."""
    return [f"{sid},{matching[sid] if matching[sid] is not None else '-'}" for sid in sorted(matching)]


def college_assignments(matching: Matching) -> dict[str, list[str]]:
    """college id -> matched student ids (sorted), unmatched students skipped."""
    out: dict[str, list[str]] = {}
    for sid in sorted(matching):
        cid = matching[sid]
        if cid is not None:
            out.setdefault(cid, []).append(sid)
    return out
