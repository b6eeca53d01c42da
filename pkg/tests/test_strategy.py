import itertools
import random

import pytest

from recipmatch import (
    AlphaDist,
    BonusFunction,
    MechanismConfig,
    UNMATCHED,
    college_manipulation_audit,
    demote_favorite,
    deviation_threshold,
    dropping_strategies,
    generalized_match,
    rejection_chains,
    strategy_s,
)
from recipmatch.simgen import GenConfig, gen_instance
from recipmatch.strategy import StrategyKind, StudentStrategy, audit_csv

from conftest import make_instance

PREF = ("c1", "c2", "c3", "c4", "c5")


class TestStrategyS:
    def test_top_student_stays_truthful(self):
        assert strategy_s(PREF, 1) == ("c1", "c2", "c3", "c4", "c5")

    def test_second(self):
        assert strategy_s(PREF, 2) == ("c2", "c3", "c4", "c5", "c1")

    def test_third(self):
        assert strategy_s(PREF, 3) == ("c3", "c2", "c4", "c5", "c1")

    def test_fourth(self):
        assert strategy_s(PREF, 4) == ("c4", "c2", "c3", "c5", "c1")

    def test_everyone_else_hides_behind_the_fifth(self):
        assert strategy_s(PREF, 5) == ("c5", "c2", "c3", "c4", "c1")
        assert strategy_s(PREF, 9) == ("c5", "c2", "c3", "c4", "c1")

    def test_wrong_college_count_rejected(self):
        with pytest.raises(ValueError, match="5 colleges"):
            strategy_s(("c1", "c2"), 2)

    def test_strategy_objects_dispatch(self):
        assert StudentStrategy(StrategyKind.TRUTHFUL).submitted(PREF) == PREF
        assert StudentStrategy(StrategyKind.STRATEGY_S, score_rank=3).submitted(PREF) == strategy_s(PREF, 3)
        custom = StudentStrategy(StrategyKind.CUSTOM, custom=demote_favorite(PREF))
        assert custom.submitted(PREF) == ("c2", "c3", "c4", "c5", "c1")


class TestDeviationThreshold:
    BONUS = BonusFunction((100.0, 90.0))

    def test_even_blend(self):
        assert deviation_threshold(0.5, self.BONUS) == pytest.approx(10.0)

    def test_vanishes_with_epsilon(self):
        assert deviation_threshold(1e-6, self.BONUS) == pytest.approx(0.0, abs=1e-4)

    def test_large_epsilon(self):
        assert deviation_threshold(0.9, self.BONUS) == pytest.approx(90.0)

    def test_domain(self):
        for bad in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(ValueError):
                deviation_threshold(bad, self.BONUS)


class TestDroppingStrategies:
    def test_powerset_of_two(self):
        strategies = list(dropping_strategies(("s1", "s2"), 2))
        assert {s.dropped for s in strategies} == {
            frozenset(), frozenset({"s1"}), frozenset({"s2"}), frozenset({"s1", "s2"})
        }

    def test_order_preserved_and_no_resurrection(self):
        base = ("s1", "s2", "s3")
        for strat in dropping_strategies(base, 3):
            result = strat.result
            kept = [s for s in base if s in result]
            assert list(result) == kept  # relative order intact
            assert set(result) <= set(base)  # nobody new appears

    def test_counts(self):
        base = tuple(f"s{i}" for i in range(5))
        assert sum(1 for _ in dropping_strategies(base, 5)) == 32
        assert sum(1 for _ in dropping_strategies(base, 2)) == 1 + 5 + 10

    def test_max_drop_bound(self):
        with pytest.raises(ValueError):
            list(dropping_strategies(("s1",), 2))


def chain_instance(s2_lists_c1):
    """Three seats, three students, everyone holds their first choice.

    Expelling s1 from c1 pushes it into c2, displacing s2.  When s2 lists
    c1 the chain returns there; otherwise it peters out at c3 / exhausts.
    """
    prefs = {
        "s1": ("c1", "c2", "c3"),
        "s2": ("c2", "c1", "c3") if s2_lists_c1 else ("c2", "c3"),
        "s3": ("c3", "c2", "c1") if s2_lists_c1 else ("c3",),
    }
    return make_instance(
        scores={"s1": 90, "s2": 80, "s3": 70},
        prefs=prefs,
        alphas={"c1": 0.0, "c2": 0.0, "c3": 0.0},
    )


class TestRejectionChains:
    def test_chain_returns_to_rejecting_college(self):
        inst = chain_instance(s2_lists_c1=True)
        result = rejection_chains(inst, inst.student_prefs, "c1", {"s1"})
        assert result.returns_to_college
        assert result.returning_student == "s2"
        assert result.removed_student == "s1"

    def test_chain_dies_out_when_nobody_lists_the_college(self):
        inst = chain_instance(s2_lists_c1=False)
        result = rejection_chains(inst, inst.student_prefs, "c1", {"s1"})
        assert not result.returns_to_college
        assert result.assignment == frozenset()

    def test_rejected_set_must_come_from_assignment(self):
        inst = chain_instance(s2_lists_c1=True)
        with pytest.raises(ValueError, match="not part of"):
            rejection_chains(inst, inst.student_prefs, "c1", {"s2"})
        with pytest.raises(ValueError, match="non-empty"):
            rejection_chains(inst, inst.student_prefs, "c1", set())

    def test_returning_student_scores_below_removed_at_alpha_zero(self):
        # Score-ordered colleges can only pass rejections downhill, so any
        # student the chain brings back is worse than the one pushed out.
        returned = 0
        for trial in range(1000):
            config = GenConfig(
                n_students=5, n_colleges=3, reputations=(100.0, 90.0, 80.0),
                beta=0.4, seed=trial, alpha_dist=AlphaDist.constant(0.0),
            )
            inst, prefs = gen_instance(config)
            scores = inst.scores()
            matching = generalized_match(inst, prefs)
            for cid in ("c0", "c1", "c2"):
                held = [s for s, c in matching.items() if c == cid]
                if not held:
                    continue
                for r in range(1, len(held) + 1):
                    for subset in itertools.combinations(held, r):
                        result = rejection_chains(inst, prefs, cid, set(subset))
                        if result.returns_to_college:
                            returned += 1
                            assert scores[result.returning_student] < scores[result.removed_student]
        assert returned > 50  # the scenario actually occurs


class TestCollegeManipulationAudit:
    def test_truthful_weakly_best_on_random_instances(self):
        for trial in range(100):
            config = GenConfig(n_students=5, n_colleges=3,
                               reputations=(100.0, 90.0, 80.0), beta=0.4,
                               seed=5000 + trial)
            inst, prefs = gen_instance(config)
            for college in ("c0", "c1", "c2"):
                result = college_manipulation_audit(inst, prefs, college)
                assert not result.improved
                assert result.best == result.truthful

    def test_dropping_everything_never_helps(self):
        config = GenConfig(n_students=5, n_colleges=3,
                           reputations=(100.0, 90.0, 80.0), beta=0.4, seed=77)
        inst, prefs = gen_instance(config)
        result = college_manipulation_audit(inst, prefs, "c0")
        full_drop = [r for r in result.rows if r.dropped_count == len(prefs)]
        assert full_drop and not any(r.improved for r in full_drop)

    def test_quota_one_college_rows_cover_all_strategies(self):
        config = GenConfig(n_students=4, n_colleges=3,
                           reputations=(100.0, 90.0, 80.0), beta=0.4, seed=9)
        inst, prefs = gen_instance(config)
        result = college_manipulation_audit(inst, prefs, "c1")
        assert len(result.rows) == 2 ** 4
        assert not result.improved

    def test_csv_format(self):
        config = GenConfig(n_students=3, n_colleges=3,
                           reputations=(100.0, 90.0, 80.0), seed=2)
        inst, prefs = gen_instance(config)
        result = college_manipulation_audit(inst, prefs, "c0", max_drop=1)
        text = audit_csv(42, result)
        lines = text.splitlines()
        assert lines[0] == "seed,college,strategy_id,dropped_count,improved"
        assert lines[1].startswith("42,c0,0,0,")
        assert len(lines) == 1 + len(result.rows)

    def test_max_drop_limits_enumeration(self):
        config = GenConfig(n_students=5, n_colleges=3,
                           reputations=(100.0, 90.0, 80.0), seed=3)
        inst, prefs = gen_instance(config)
        result = college_manipulation_audit(inst, prefs, "c0", max_drop=1)
        assert len(result.rows) == 1 + 5


class TestCollegeAnonymity:
    def test_match_rank_distribution_invariant_to_submitted_list(self):
        # Uniform rival lists and uniform reciprocating factors make the
        # probe's chance of landing its i-th listed college independent of
        # which list it submits (quick version; the full-size study runs in
        # the acceptance suite).
        from recipmatch.harness import anonymity_counts

        trials = 4000
        counts_a = anonymity_counts(("c0", "c1", "c2", "c3"), trials, seed=0, tag="a")
        counts_b = anonymity_counts(("c3", "c2", "c1", "c0"), trials, seed=0, tag="b")
        for i in range(4):
            pa, pb = counts_a[i] / trials, counts_b[i] / trials
            se = (pa * (1 - pa) / trials + pb * (1 - pb) / trials) ** 0.5
            assert abs(pa - pb) <= 4 * se + 1e-12
