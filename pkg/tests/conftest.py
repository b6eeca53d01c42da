"""Shared builders for small hand-constructed instances."""

from __future__ import annotations

import itertools

from recipmatch import BonusFunction, College, Instance, Student, UNMATCHED


def make_instance(scores, prefs, alphas=None, quotas=None, f_max=100.0, bonus=None):
    """Instance from plain dicts; defaults: alpha 0, quota 1, linear bonus."""
    college_ids = sorted({c for lst in prefs.values() for c in lst} | set((alphas or {}).keys()))
    bonus = bonus or BonusFunction.linear(len(college_ids))
    students = tuple(Student(sid, float(scores[sid])) for sid in sorted(scores))
    colleges = tuple(
        College(
            cid,
            (quotas or {}).get(cid, 1),
            float((alphas or {}).get(cid, 0.0)),
            bonus,
        )
        for cid in college_ids
    )
    return Instance(students, colleges, {sid: tuple(lst) for sid, lst in prefs.items()}, f_max)


def instance_i1():
    """Three students by descending score, two seats, identical preferences."""
    return make_instance(
        scores={"s1": 90, "s2": 80, "s3": 70},
        prefs={"s1": ("c1", "c2"), "s2": ("c1", "c2"), "s3": ("c1", "c2")},
        alphas={"c1": 0.0, "c2": 0.0},
    )


def reference_blocking_pairs(matching, student_prefs, college_recip_prefs, quotas):
    """Independent double-loop blocking-pair finder used to cross-check.

    Deliberately re-derives everything per pair instead of reusing any of the
    library's bookkeeping.
    """
    found = set()
    for sid, prefs in student_prefs.items():
        for cid in prefs:
            # does the student strictly prefer cid to their assignment?
            assigned = matching.get(sid, UNMATCHED)
            if assigned is not UNMATCHED:
                if prefs.index(cid) >= prefs.index(assigned):
                    continue
            lst = college_recip_prefs[cid]
            if sid not in lst:
                continue
            holders = [s for s, c in matching.items() if c == cid]
            if len(holders) < quotas[cid]:
                found.add((sid, cid))
                continue
            if any(lst.index(sid) < lst.index(h) for h in holders):
                found.add((sid, cid))
    return found


def brute_force_one_to_one_stable(proposer_prefs, receiver_prefs):
    """All stable perfect matchings of a complete one-to-one market."""
    proposers = sorted(proposer_prefs)
    receivers = sorted(receiver_prefs)
    stable = []
    for perm in itertools.permutations(receivers):
        matching = dict(zip(proposers, perm))
        partner_of = {w: m for m, w in matching.items()}
        blocked = False
        for m in proposers:
            for w in receivers:
                if w == matching[m]:
                    continue
                m_prefers = proposer_prefs[m].index(w) < proposer_prefs[m].index(matching[m])
                w_prefers = receiver_prefs[w].index(m) < receiver_prefs[w].index(partner_of[w])
                if m_prefers and w_prefers:
                    blocked = True
                    break
            if blocked:
                break
        if not blocked:
            stable.append(matching)
    return stable
