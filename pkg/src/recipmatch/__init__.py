"""Generalized two-sided matching with reciprocating preferences.

A one-parameter family of admission mechanisms: each college blends an
applicant's exam score with a bonus for how highly the applicant ranked it,
then student-proposing deferred acceptance runs on the resulting lists.
Setting every reciprocating factor to 0 recovers the classic Gale-Shapley
student-optimal mechanism; setting every factor to 1 recovers the Boston
(immediate acceptance) mechanism.
"""

from .core import (
    UNMATCHED,
    Band,
    BonusFunction,
    College,
    Instance,
    Matching,
    PreferenceList,
    Student,
    college_assignments,
    dump_instance,
    load_instance,
    matching_lines,
    rank_of,
    read_instance,
    validate,
    write_instance,
)
from .merit import (
    BandTable,
    MeritEntry,
    UnlistedPolicy,
    band_bonus,
    lottery_value,
    marriage_merit,
    merit_entries,
    merit_score,
    reciprocating_preference,
)
from .mechanism import (
    MechanismConfig,
    Mode,
    Proposer,
    boston,
    deferred_acceptance,
    generalized_match,
    marriage_match,
    reciprocating_profile,
    score_orderings,
)
from .stability import (
    BlockingPair,
    blocking_pairs,
    blocking_pairs_csv,
    enumerate_stable,
    is_student_optimal,
)
from .strategy import (
    AuditResult,
    DroppingStrategy,
    RejectionChainResult,
    StrategyKind,
    StudentStrategy,
    college_manipulation_audit,
    demote_favorite,
    deviation_threshold,
    dropping_strategies,
    rejection_chains,
    strategy_s,
)
from .welfare import Side, UtilityFunction, agent_utility, aggregate, social_welfare
from .simgen import AlphaDist, GenConfig, gen_alphas, gen_instance, gen_scores, gen_student_prefs

__version__ = "0.1.0"
