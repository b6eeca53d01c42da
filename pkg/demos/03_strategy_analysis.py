#!/usr/bin/env python3
"""Strategy machinery: who can game the mechanism, and who cannot.

Students: with a positive reciprocating factor, a student trailing by less
than the deviation threshold steals a seat by promoting the college to first
choice.  Colleges: replaying every dropping strategy shows misreporting
never helps them, and the rejection-chain simulator explains why -- chains
only ever come back with worse students.
"""

from recipmatch import (
    BonusFunction,
    College,
    GenConfig,
    Instance,
    Student,
    college_manipulation_audit,
    demote_favorite,
    deviation_threshold,
    dropping_strategies,
    gen_instance,
    generalized_match,
    rejection_chains,
    strategy_s,
)

print(__doc__)

# --- the student side: a profitable shield -------------------------------
bonus = BonusFunction((100.0, 90.0))
eps = 0.5
delta = deviation_threshold(eps, bonus)
print(f"college c has alpha={eps}, first-vs-second bonus gap 10 -> threshold delta={delta}")

truthful_prefs = {"top": ("c_elite", "c"), "alice": ("c_elite", "c"), "bob": ("c", "c_elite")}
market = Instance(
    students=(Student("top", 100.0), Student("alice", 95.0), Student("bob", 90.0)),
    colleges=(College("c_elite", 1, 0.0, bonus), College("c", 1, eps, bonus)),
    student_prefs=truthful_prefs,
)
outcome = generalized_match(market, truthful_prefs)
print(f"alice truthful (score lead 5 < delta): seat -> {outcome['alice'] or 'nothing'}")

swapped = dict(truthful_prefs, alice=("c", "c_elite"))
outcome = generalized_match(market, swapped)
print(f"alice promotes c to first choice:      seat -> {outcome['alice']}")

# --- the canned misreport table for five commonly ranked colleges --------
pref = ("c1", "c2", "c3", "c4", "c5")
print("\nshielding table by score rank (five colleges, shared ranking):")
for rank in (1, 2, 3, 4, 7):
    print(f"  rank {rank}: {' > '.join(strategy_s(pref, rank))}")
print(f"  general form for m colleges: {' > '.join(demote_favorite(pref))}")

# --- the college side: dropping never pays -------------------------------
config = GenConfig(n_students=5, n_colleges=3, reputations=(100.0, 90.0, 80.0),
                   beta=0.4, seed=7)
instance, prefs = gen_instance(config)
n_strategies = sum(1 for _ in dropping_strategies(tuple(prefs), 5))
print(f"\nauditing college c0 over all {n_strategies} dropping strategies of its true list:")
result = college_manipulation_audit(instance, prefs, "c0")
print(f"  truthful assignment: {result.truthful}, strategies tried: {len(result.rows)},"
      f" any improvement: {result.improved}")

# --- why: rejection chains only come back downhill ------------------------
matching = generalized_match(instance, prefs)
held = [s for s, c in matching.items() if c == "c0"]
chain = rejection_chains(instance, prefs, "c0", set(held[:1]))
if chain.returns_to_college:
    print(f"  expelling {chain.removed_student} brings back {chain.returning_student},"
          f" a lower-scoring applicant -- no gain")
else:
    print(f"  expelling {held[0]} sets off a chain that never returns to c0 -- pure loss")
