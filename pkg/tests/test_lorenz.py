"""Unit tests for curve construction, geometry, ordering, and the divergence
round trip."""

import math
import random

import pytest

from renyikit.lorenz import (
    OrderingRelation,
    Segment,
    build_curve,
    compare,
    curve_csv,
    divergence_from_curve,
    is_rearrangement,
    upper_curve_slopes,
)
from renyikit.measures import FiniteDistribution, ValidationError, make_pair
from renyikit.renyi import renyi_divergence
from conftest import mixed_pair, pair_of

GRID = (0.0, 0.25, 0.5, 1.0, 2.0, 4.0, math.inf)


def uniform_curve(weights):
    n = len(weights)
    labels = [f"a{i}" for i in range(n)]
    return build_curve(
        make_pair(
            FiniteDistribution(tuple(labels), tuple(weights)),
            FiniteDistribution.uniform(labels),
        )
    )


class TestBuildCurve:
    def test_worked_pair(self, worked_pair):
        curve = build_curve(worked_pair)
        assert curve.segments == (Segment(0.75, 2 / 3), Segment(0.25, 2.0))
        assert curve.singular_p == 0.0

    def test_identity_is_diagonal(self):
        curve = build_curve(pair_of([0.4, 0.6], [0.4, 0.6]))
        assert curve.segments == (Segment(1.0, 1.0),)

    def test_null_p_atom_gives_zero_slope(self):
        curve = build_curve(pair_of([1.0, 0.0], [0.5, 0.5]))
        assert curve.segments == (Segment(0.5, 0.0), Segment(0.5, 2.0))

    def test_singular_mass_recorded(self):
        curve = build_curve(pair_of([0.5, 0.5], [1.0, 0.0]))
        assert curve.segments == (Segment(1.0, 0.5),)
        assert curve.singular_p == 0.5

    def test_equal_slopes_merged(self):
        curve = uniform_curve([0.35, 0.35, 0.15, 0.15])
        assert len(curve.segments) == 2
        assert curve.segments[0] == pytest.approx((0.5, 0.6))
        assert curve.segments[1] == pytest.approx((0.5, 1.4))

    def test_invariants_on_random_pairs(self):
        rng = random.Random(21)
        for _ in range(200):
            curve = build_curve(mixed_pair(rng, rng.randint(2, 7)))
            widths = [w for w, _ in curve.segments]
            slopes = [s for _, s in curve.segments]
            assert all(w > 0 for w in widths)
            assert all(b - a >= 1e-12 for a, b in zip(slopes, slopes[1:]))
            assert sum(widths) == pytest.approx(1.0, abs=1e-9)
            mass = sum(w * s for w, s in curve.segments) + curve.singular_p
            assert mass == pytest.approx(1.0, abs=1e-9)


class TestEvaluate:
    def test_diagonal(self):
        curve = build_curve(pair_of([0.5, 0.5], [0.5, 0.5]))
        assert curve.evaluate(0.3) == pytest.approx(0.3, abs=1e-15)

    def test_worked_pair_vertex(self, worked_pair):
        curve = build_curve(worked_pair)
        assert curve.evaluate(0.75) == pytest.approx(0.5, abs=1e-15)

    def test_worked_pair_interior(self, worked_pair):
        curve = build_curve(worked_pair)
        assert curve.evaluate(7 / 8) == pytest.approx(0.75, abs=1e-15)

    def test_endpoints(self):
        curve = build_curve(pair_of([0.5, 0.5], [1.0, 0.0]))
        assert curve.evaluate(0.0) == 0.0
        assert curve.evaluate(1.0) == pytest.approx(0.5, abs=1e-15)

    def test_outside_domain_rejected(self, worked_pair):
        curve = build_curve(worked_pair)
        with pytest.raises(ValidationError):
            curve.evaluate(1.5)
        with pytest.raises(ValidationError):
            curve.evaluate(-0.1)


class TestUpperCurve:
    def test_reversal(self, worked_pair):
        curve = build_curve(worked_pair)
        assert upper_curve_slopes(curve) == tuple(reversed(curve.segments))

    def test_diagonal_fixed_point(self):
        curve = build_curve(pair_of([0.5, 0.5], [0.5, 0.5]))
        assert upper_curve_slopes(curve) == curve.segments

    def test_symmetry_relation(self):
        # walking the reversed segments from 0 realizes F(u) = 1 - L(1 - u),
        # up to the constant F(0) = singular_p
        pair = pair_of([0.5, 0.3, 0.2], [0.2, 0.3, 0.5])
        curve = build_curve(pair)

        def upper(u):
            value = curve.singular_p
            pos = 0.0
            for w, s in upper_curve_slopes(curve):
                step = min(w, max(u - pos, 0.0))
                value += s * step
                pos += w
            return value

        for u in (0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0):
            assert upper(u) == pytest.approx(1.0 - curve.evaluate(1.0 - u), abs=1e-12)


class TestCompare:
    def test_majorized_is_less(self):
        a = uniform_curve([0.35, 0.35, 0.15, 0.15])
        b = uniform_curve([0.4, 0.3, 0.2, 0.1])
        assert compare(a, b) == OrderingRelation.LESS
        assert compare(b, a) == OrderingRelation.GREATER

    def test_self_equal(self, worked_pair):
        curve = build_curve(worked_pair)
        assert compare(curve, curve) == OrderingRelation.EQUAL

    def test_crossing_curves_incomparable(self):
        a = uniform_curve([0.4, 0.3, 0.2, 0.1])
        b = uniform_curve([0.45, 0.15, 0.25, 0.15])
        assert compare(a, b) == OrderingRelation.INCOMPARABLE

    def test_breakpoint_check_matches_dense_sampling(self):
        # piecewise linearity makes the breakpoint test exact; cross-check on
        # 1000 interior points
        rng = random.Random(13)
        for _ in range(25):
            n = rng.randint(2, 6)
            x = mixed_pair(rng, n)
            y = mixed_pair(rng, n)
            a, b = build_curve(x), build_curve(y)
            rel = compare(a, b)
            diffs = [
                a.evaluate(u) - b.evaluate(u)
                for u in (i / 1000.0 for i in range(1001))
            ]
            above = all(d >= -1e-9 for d in diffs)
            below = all(d <= 1e-9 for d in diffs)
            if rel == OrderingRelation.LESS:
                assert above
            elif rel == OrderingRelation.GREATER:
                assert below
            elif rel == OrderingRelation.EQUAL:
                assert above and below

    def test_transitive_on_chain(self):
        a = uniform_curve([0.25, 0.25, 0.25, 0.25])
        b = uniform_curve([0.35, 0.35, 0.15, 0.15])
        c = uniform_curve([0.4, 0.3, 0.2, 0.1])
        assert compare(a, b) == OrderingRelation.LESS
        assert compare(b, c) == OrderingRelation.LESS
        assert compare(a, c) == OrderingRelation.LESS

    def test_partial_order_on_seeded_triples(self):
        rng = random.Random(19)
        L, G, E = OrderingRelation.LESS, OrderingRelation.GREATER, OrderingRelation.EQUAL
        flipped = {L: G, G: L, E: E, OrderingRelation.INCOMPARABLE: OrderingRelation.INCOMPARABLE}
        for _ in range(100):
            n = rng.randint(2, 6)
            curves = [build_curve(mixed_pair(rng, n)) for _ in range(3)]
            for x in curves:
                assert compare(x, x) == E  # reflexive
            for x in curves:
                for y in curves:
                    assert compare(y, x) == flipped[compare(x, y)]  # antisymmetric
            a, b, c = curves
            if compare(a, b) in (L, E) and compare(b, c) in (L, E):
                assert compare(a, c) in (L, E)  # transitive


class TestRearrangement:
    def test_permuted_masses(self):
        x = pair_of([0.75, 0.25], [0.5, 0.5])
        y = pair_of([0.25, 0.75], [0.5, 0.5])
        assert is_rearrangement(x, y)

    def test_self(self, worked_pair):
        assert is_rearrangement(worked_pair, worked_pair)

    def test_different_curves(self):
        assert not is_rearrangement(
            pair_of([0.5, 0.5], [0.5, 0.5]), pair_of([1.0, 0.0], [0.5, 0.5])
        )

    def test_rearranged_divergences_match(self):
        rng = random.Random(17)
        for _ in range(50):
            n = rng.randint(2, 6)
            x = mixed_pair(rng, n)
            perm = list(range(len(x.atoms)))
            rng.shuffle(perm)
            y = pair_of(
                [x.atoms[i].p for i in perm], [x.atoms[i].q for i in perm]
            )
            assert is_rearrangement(x, y)
            for alpha in GRID:
                va = renyi_divergence(x, alpha).value
                vb = renyi_divergence(y, alpha).value
                if math.isinf(va) or math.isinf(vb):
                    assert va == vb
                else:
                    assert va == pytest.approx(vb, abs=1e-12)


class TestDivergenceFromCurve:
    def test_diagonal_zero(self):
        curve = build_curve(pair_of([0.5, 0.5], [0.5, 0.5]))
        for alpha in GRID:
            assert divergence_from_curve(curve, alpha).value == 0.0

    def test_worked_pair_order_two(self, worked_pair):
        curve = build_curve(worked_pair)
        assert divergence_from_curve(curve, 2.0).value == pytest.approx(
            math.log(4 / 3), abs=1e-12
        )

    def test_singular_curve_fractional_order(self):
        # generating pair P = (1/2, 1/2), Q = point mass
        pair = pair_of([0.5, 0.5], [1.0, 0.0])
        curve = build_curve(pair)
        want = renyi_divergence(pair, 0.75).value
        assert divergence_from_curve(curve, 0.75).value == pytest.approx(want, abs=1e-12)
        assert want == pytest.approx(3 * math.log(2), abs=1e-12)

    def test_round_trip_identity(self):
        rng = random.Random(29)
        for _ in range(300):
            pair = mixed_pair(rng, rng.randint(2, 7))
            curve = build_curve(pair)
            for alpha in GRID:
                direct = renyi_divergence(pair, alpha).value
                geometric = divergence_from_curve(curve, alpha).value
                if math.isinf(direct) or math.isinf(geometric):
                    assert direct == geometric
                else:
                    assert direct == pytest.approx(geometric, abs=1e-10)


class TestCurveCsv:
    def test_header_and_vertices(self, worked_pair):
        text = curve_csv(build_curve(worked_pair))
        lines = text.strip().splitlines()
        assert lines[0] == "u,L(u)"
        assert lines[1] == "0,0"
        assert lines[2] == "0.75,0.5"
        assert lines[3] == "1,1"
