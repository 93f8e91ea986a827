"""Unit tests for the verification harness itself: reproducibility, report
structure, probe fixtures, and exit-code semantics."""

import json
import math

import pytest

from renyikit.measures import Atom, DensityPair
from renyikit.properties import (
    CheckReport,
    PROBE,
    THEOREM,
    check_joint_convexity,
    check_monotone_alpha,
    check_sandwich,
    exit_code,
    probe_hellinger_relation_as_printed,
    probe_joint_convexity_above_one,
    probe_ranking_monotonicity_as_printed,
    probe_semicontinuity,
    probe_superadditivity_as_printed,
    reports_to_json,
    run_all,
)
from renyikit.renyi import renyi_divergence


class TestReports:
    def test_bit_reproducible(self):
        a = check_monotone_alpha(seed=5, instances=50)
        b = check_monotone_alpha(seed=5, instances=50)
        assert a == b

    def test_seed_changes_instances(self):
        a = check_sandwich(seed=5, instances=50)
        b = check_sandwich(seed=6, instances=50)
        assert a.worst_margin != b.worst_margin

    def test_json_serializable(self):
        reports = [check_monotone_alpha(seed=1, instances=10)]
        doc = json.loads(reports_to_json(reports, seed=1))
        assert doc["seed"] == 1
        assert doc["checks"][0]["name"] == "monotone_alpha"
        assert doc["checks"][0]["passed"] is True

    def test_exit_codes(self):
        green = CheckReport("t", THEOREM, 1, 0, 0.0, 1)
        bad_theorem = CheckReport("t", THEOREM, 1, 2, -1.0, 1)
        good_probe = CheckReport("p", PROBE, 1, 3, -1.0, 1)
        dud_probe = CheckReport("p", PROBE, 1, 0, 0.0, 1)
        assert exit_code([green, good_probe]) == 0
        assert exit_code([bad_theorem, good_probe]) == 2
        assert exit_code([green, dud_probe]) == 3
        assert exit_code([bad_theorem, dud_probe]) == 2


class TestTheoremChecks:
    def test_monotone_zero_violations(self):
        report = check_monotone_alpha(seed=1, instances=200)
        assert report.passed and report.violations == 0

    def test_joint_convexity_zero_violations(self):
        report = check_joint_convexity(seed=1, instances=200)
        assert report.passed and report.violations == 0

    def test_semicontinuity_witnesses(self):
        report = probe_semicontinuity(seed=1, instances=30)
        assert report.passed and report.violations == 0


class TestProbes:
    def test_joint_convexity_above_one_finds_violation(self):
        report = probe_joint_convexity_above_one(seed=1, instances=200)
        assert report.kind == PROBE
        assert report.violations >= 1
        assert report.payloads

    def test_pinned_convexity_counterexample(self):
        # P1=(0.1,0.9), P2=(0.7,0.3), shared Q=(0.9,0.1), lambda=1/2, order 2:
        # the mix has power sum 34/9 but sqrt(73/9 * 13/9) = sqrt(949)/9 < 34/9
        def pw(p):
            return DensityPair((Atom("a", p[0], 0.9), Atom("b", p[1], 0.1)))

        d1 = renyi_divergence(pw([0.1, 0.9]), 2.0).value
        d2 = renyi_divergence(pw([0.7, 0.3]), 2.0).value
        mix = renyi_divergence(pw([0.4, 0.6]), 2.0).value
        assert d1 == pytest.approx(math.log(73 / 9), abs=1e-12)
        assert d2 == pytest.approx(math.log(13 / 9), abs=1e-12)
        assert mix == pytest.approx(math.log(34 / 9), abs=1e-12)
        assert mix > 0.5 * d1 + 0.5 * d2 + 0.09  # violated by a wide margin
        assert 73 * 13 < 34**2  # the same fact in exact integers

    def test_superadditivity_probe_confirms_counterexample(self):
        report = probe_superadditivity_as_printed(seed=1, instances=5)
        assert report.violations >= 1
        first = report.payloads[0]
        assert first["p1"] == [0.75, 0.25]
        # printed display says d1 + d2 <= d_meet; with P1 = P2 that is 2d <= d
        assert first["d1"] + first["d2"] > first["d_meet"]

    def test_ranking_probe_confirms_counterexample(self):
        report = probe_ranking_monotonicity_as_printed(seed=1, instances=5)
        assert report.violations >= 1
        first = report.payloads[0]
        assert first["moment1"] == pytest.approx(1.0, abs=1e-12)
        assert first["moment2"] == pytest.approx(0.5, abs=1e-12)

    def test_hellinger_probe_reports_both_evaluations(self):
        report = probe_hellinger_relation_as_printed(seed=1, instances=20)
        assert report.violations >= 1
        first = report.payloads[0]
        # the internally consistent identity H^2 = d_1/2 holds tightly
        assert first["consistent_gap"] < 1e-12
        # while the printed form misses by a visible amount
        assert abs(first["h2"] - first["h2_as_printed"]) > 1e-6
        assert first["chi2_as_printed"] == pytest.approx(first["chi2"] - 1.0, abs=1e-12)


class TestRunAll:
    def test_all_green_and_reproducible(self):
        a = run_all(seed=1, instances=25)
        b = run_all(seed=1, instances=25)
        assert exit_code(a) == 0
        assert reports_to_json(a, 1) == reports_to_json(b, 1)
        assert {r.kind for r in a} == {THEOREM, PROBE}
