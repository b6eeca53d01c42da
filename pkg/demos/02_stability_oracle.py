#!/usr/bin/env python3
"""Stability checking and the exhaustive oracle.

First: the matcher's output has no blocking pairs, while a hand-mangled
assignment does.  Second: a market where a score-minded college and an
interest-minded college genuinely disagree, giving two stable matchings --
which the enumeration oracle finds, and the student-optimality check tells
apart.
"""

from recipmatch import (
    BonusFunction,
    College,
    Instance,
    Student,
    blocking_pairs,
    blocking_pairs_csv,
    enumerate_stable,
    generalized_match,
    is_student_optimal,
    matching_lines,
    reciprocating_profile,
)


def show(title, matching):
    print(f"  {title}: " + "  ".join(matching_lines(matching)))


bonus = BonusFunction.linear(4)
students = tuple(
    Student(sid, s) for sid, s in
    [("s1", 50.0), ("s2", 60.0), ("sx", 99.0), ("sy", 98.0)]
)
colleges = (
    College("c_score", 1, 0.0, bonus),    # ranks purely by exam score
    College("c_keen", 1, 0.9, bonus),     # almost entirely interest-driven
    College("cx", 1, 0.0, bonus),
    College("cy", 1, 0.0, bonus),
)
prefs = {
    "s1": ("c_score", "c_keen", "cx", "cy"),
    "s2": ("cx", "cy", "c_keen", "c_score"),
    "sx": ("cx",),
    "sy": ("cy",),
}
instance = Instance(students, colleges, prefs)

print(__doc__)
matching = generalized_match(instance, prefs)
profile = reciprocating_profile(instance, prefs)
quotas = instance.quotas()
show("matcher output", matching)
print(f"  blocking pairs: {blocking_pairs(matching, prefs, profile, quotas)}")

mangled = dict(matching, s1=None, s2="c_score")
show("mangled assignment", mangled)
print("  blocking pairs now:")
print("  " + blocking_pairs_csv(blocking_pairs(mangled, prefs, profile, quotas)).replace("\n", "\n  "))

stable = enumerate_stable(instance, prefs)
print(f"the oracle enumerates {len(stable)} stable matchings:")
for m in stable:
    tag = "student-optimal" if is_student_optimal(m, stable, prefs) else "student-pessimal"
    show(tag, m)
print("\nc_score wants the better-scored s2, c_keen rewards s1's declared interest;")
print("the matcher returns the student-optimal member of that stable set.")
