from __future__ import annotations

import numpy as np
import pytest

from krnn import (
    MODE_PATH,
    Instance,
    KrnnConfig,
    PreconditionError,
    TrialPlan,
    check_lemma1,
    check_lemma2,
    check_mst_bound,
    check_ratio_bound,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    krnn,
    merge_verdicts,
    random_instance,
    shortest_ham_path,
)
from krnn.claims import (
    COUNTEREXAMPLE_CAP,
    ClaimVerdict,
    check_mst_bound_batch,
    check_ratio_bound_batch,
    check_theorem1_batch,
    check_theorem2_batch,
    metric_guard,
)


class TestVerdictInvariants:
    def test_unknown_claim_rejected(self):
        with pytest.raises(ValueError):
            ClaimVerdict("lemma99", 1, 0, None, ())

    def test_violations_bounded_by_trials(self):
        with pytest.raises(ValueError):
            ClaimVerdict("lemma1", 2, 3, None, ({"n": 4},) * 3)

    def test_counterexamples_iff_violations(self):
        with pytest.raises(ValueError):
            ClaimVerdict("lemma1", 5, 1, 1.1, ())
        with pytest.raises(ValueError):
            ClaimVerdict("lemma1", 5, 0, 1.0, ({"n": 4},))

    def test_to_dict_shape(self):
        plan = TrialPlan("euclidean-uniform", 4, 10, 0)
        v = ClaimVerdict("lemma1", 10, 0, 1.0, (), {"note": "x"}, plan)
        doc = v.to_dict()
        assert doc["claim_id"] == "lemma1"
        assert doc["plan"]["instance_kind"] == "euclidean-uniform"
        assert doc["plan"]["trials"] == 10
        assert doc["details"] == {"note": "x"}

    def test_plan_rejects_zero_trials(self):
        with pytest.raises(ValueError):
            TrialPlan("euclidean-uniform", 4, 0, 0)


class TestMergePolicy:
    def test_sums_counts_and_maxes_degrees(self):
        a = ClaimVerdict("theorem1", 4, 1, 1.0, ({"n": 4, "seed": 1},),
                         {"strict_held": 3, "mst_max_degree": 2, "regime": "euclidean"})
        b = ClaimVerdict("theorem1", 4, 0, 0.9, (),
                         {"strict_held": 4, "mst_max_degree": 3, "regime": "euclidean"})
        merged = merge_verdicts([a, b])
        assert merged.trials == 8
        assert merged.violations == 1
        assert merged.worst_ratio == 1.0
        assert merged.details["strict_held"] == 7
        assert merged.details["mst_max_degree"] == 3
        assert merged.details["regime"] == "euclidean"
        assert merged.details["instances"] == 2

    def test_claim_mismatch_rejected(self):
        a = ClaimVerdict("lemma1", 1, 0, None, ())
        b = ClaimVerdict("lemma2", 1, 0, None, ())
        with pytest.raises(ValueError):
            merge_verdicts([a, b])

    def test_counterexamples_capped_and_sorted(self):
        parts = [
            ClaimVerdict("lemma1", 1, 1, 1.5, ({"n": 4, "seed": s},))
            for s in range(COUNTEREXAMPLE_CAP + 8, 0, -1)
        ]
        merged = merge_verdicts(parts)
        assert merged.violations == COUNTEREXAMPLE_CAP + 8
        assert len(merged.counterexamples) == COUNTEREXAMPLE_CAP
        seeds = [c["seed"] for c in merged.counterexamples]
        assert seeds == sorted(seeds)
        assert seeds[0] == 1


class TestPreconditions:
    def test_lemma1_needs_four_vertices(self):
        with pytest.raises(PreconditionError):
            check_lemma1(TrialPlan("euclidean-uniform", 5, 1, 0))

    def test_lemma2_needs_five_vertices(self):
        with pytest.raises(PreconditionError):
            check_lemma2(TrialPlan("euclidean-uniform", 6, 1, 0, metric_required=True))

    def test_lemma2_needs_metric_flag(self):
        with pytest.raises(PreconditionError):
            check_lemma2(TrialPlan("euclidean-uniform", 5, 1, 0))

    def test_lemma2_rejects_nonmetric_generator(self):
        with pytest.raises(PreconditionError):
            check_lemma2(TrialPlan("arbitrary-nonnegative", 5, 1, 0, metric_required=True))

    def test_metric_guard(self, square):
        metric_guard(square)
        bad = Instance.from_matrix("bad", [[0, 1, 1], [1, 0, 5], [1, 5, 0]])
        with pytest.raises(PreconditionError):
            metric_guard(bad)


class TestLemmas:
    def test_lemma1_clean_on_arbitrary_weights(self):
        v = check_lemma1(TrialPlan("arbitrary-nonnegative", 4, 300, 0), workers=2)
        assert v.trials == 300
        assert v.violations == 0
        assert v.counterexamples == ()

    def test_lemma2_finds_violations(self):
        # metric 5-vertex instances where the best 2-prefix greedy path
        # misses the optimum; a known deterministic window
        v = check_lemma2(
            TrialPlan("euclidean-uniform", 5, 150, 0, metric_required=True), workers=2
        )
        assert v.trials == 150
        assert v.violations == 5
        assert v.worst_ratio > 1.0
        assert v.counterexamples[0]["seed"] == 6

    def test_lemma2_counterexamples_replay(self):
        v = check_lemma2(
            TrialPlan("metric-shortest-path-closure", 5, 1, 129, metric_required=True)
        )
        assert v.violations == 1
        ce = v.counterexamples[0]
        inst = random_instance("metric-shortest-path-closure", 5, ce["seed"])
        heur = krnn(inst, KrnnConfig(k=2, mode=MODE_PATH)).best
        exact = shortest_ham_path(inst, method="brute-force")
        assert heur.cost == ce["observed"]["heuristic_cost"]
        assert exact.optimum_cost == ce["observed"]["exact_cost"]
        assert heur.cost > exact.optimum_cost


class TestWorkedExamples:
    """The unit square pins every check's arithmetic: tour 4, best
    deletion tree 3, MST 3, degree-4 tree 3."""

    def test_theorem1_all_ties(self, square):
        v = check_theorem1(square)
        assert v.trials == 4  # one per deleted tour edge
        assert v.violations == 4  # 3 < 3 fails strictly on every edge
        assert v.details["nonstrict_held"] == 4
        assert v.details["weaker_min_strict_held"] == 0
        assert v.details["weaker_min_nonstrict_held"] == 1
        assert v.worst_ratio == 1.0
        assert v.details["mst_max_degree"] == 2

    def test_theorem2_exact_tie(self, square):
        v = check_theorem2(square)
        assert v.trials == 1
        assert v.violations == 1  # 4 < (4/3)*3 fails at equality
        assert v.details["strict_held"] == 0
        assert v.details["nonstrict_held"] == 1
        assert v.worst_ratio == pytest.approx(4 / 3)

    def test_theorem3_holds(self, square):
        v = check_theorem3(square)
        assert v.violations == 0
        assert v.worst_ratio == 1.0
        assert v.details["proven_bound"] is True

    def test_mst_bound_holds(self, square):
        v = check_mst_bound(square, 4.0)
        assert v.violations == 0
        assert v.worst_ratio == 1.0

    def test_ratio_bound_square(self, square):
        v = check_ratio_bound(square, 4.0, k=2)
        assert v.claim_id == "theorem4_ratio"
        assert v.violations == 0
        assert v.worst_ratio == 1.0
        v3 = check_ratio_bound(square, 4.0, k=3)
        assert v3.claim_id == "conjecture_k"
        assert v3.details["claimed_bound"] == pytest.approx(10 / 9)


class TestIntegerTieScoring:
    def test_uniform_weights_score_ties_exactly(self):
        n = 4
        W = np.ones((n, n), dtype=np.int64)
        np.fill_diagonal(W, 0)
        inst = Instance.from_matrix("uniform", W)
        t1 = check_theorem1(inst)
        assert t1.violations == 4 and t1.details["nonstrict_held"] == 4
        t2 = check_theorem2(inst)
        assert t2.violations == 1 and t2.details["nonstrict_held"] == 1


class TestBatches:
    def test_theorem1_batch_counts_edges(self):
        plan = TrialPlan("metric-shortest-path-closure", 6, 5, 0)
        v = check_theorem1_batch(plan, workers=2)
        assert v.trials == 30  # 5 instances x 6 edge deletions
        assert v.details["instances"] == 5
        assert v.plan is plan

    def test_theorem2_batch(self):
        v = check_theorem2_batch(TrialPlan("euclidean-uniform", 8, 10, 3))
        assert v.trials == 10
        assert 0 <= v.violations <= 10

    def test_mst_bound_batch_clean(self):
        v = check_mst_bound_batch(TrialPlan("arbitrary-nonnegative", 7, 20, 0), workers=2)
        assert v.trials == 20
        assert v.violations == 0

    def test_ratio_batch_records_k(self):
        v = check_ratio_bound_batch(TrialPlan("euclidean-uniform", 8, 10, 0), k=2)
        assert v.claim_id == "theorem4_ratio"
        assert v.trials == 10
        assert v.details["k"] == 2
        assert v.worst_ratio >= 1.0

    def test_batch_verdicts_are_deterministic(self):
        plan = TrialPlan("euclidean-uniform", 5, 40, 7, metric_required=True)
        a = check_lemma2(plan, workers=1)
        b = check_lemma2(plan, workers=4)
        assert a.to_dict() == b.to_dict()
