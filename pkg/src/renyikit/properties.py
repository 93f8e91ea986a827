"""Seeded verification harness for every inequality and limit claim.

Theorem-backed checks must come back with zero violations; falsification
probes must find at least one violation of a printed-but-broken statement.
Margins follow one convention throughout: a check of "lhs <= rhs + tol"
records margin = rhs - lhs and counts a violation when margin < -tol, and an
identity |a - b| <= tol records margin = -|a - b|.  Worst margins are kept
even for passing instances so tolerance drift stays observable.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

import numpy as np

from ._numeric import clamp_nonneg
from .guessing import guessing_bound, moment, ranking_function
from .lattice import construct_markov_operator, join, meet
from .lorenz import (
    LorenzCurve,
    OrderingRelation,
    build_curve,
    compare,
    divergence_from_curve,
)
from .measures import Atom, DensityPair, FiniteDistribution, make_pair
from .renyi import (
    alpha_sweep,
    chi_sq,
    hellinger_sq,
    kl,
    power_divergence,
    renyi_divergence,
)
from .transforms import additivity_check, apply, random_channel

DEFAULT_SEED = 1
THEOREM = "theorem"
PROBE = "probe"

ALPHA_GRID = (0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0, 10.0, math.inf)
IDENTITY_TOL = 1e-10
INEQUALITY_TOL = 1e-9

_PAYLOAD_CAP = 5


@dataclass(frozen=True)
class CheckReport:
    name: str
    kind: str
    instances: int
    violations: int
    worst_margin: float
    seed: int
    payloads: tuple[dict, ...] = ()

    @property
    def passed(self) -> bool:
        if self.kind == PROBE:
            return self.violations >= 1
        return self.violations == 0

    def to_dict(self) -> dict:
        return _json_safe(
            {
                "name": self.name,
                "kind": self.kind,
                "instances": self.instances,
                "violations": self.violations,
                "worst_margin": self.worst_margin,
                "seed": self.seed,
                "passed": self.passed,
                "payloads": list(self.payloads),
            }
        )


def _json_safe(value):
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
    return value


class _Collector:
    """Accumulates margins, violation counts, and capped violation payloads."""

    def __init__(self, tol: float):
        self.tol = tol
        self.worst = math.inf
        self.violations = 0
        self.payloads: list[dict] = []

    def record(self, margin: float, payload: dict | None = None) -> None:
        self.worst = min(self.worst, margin)
        if margin < -self.tol:
            self.violations += 1
            if payload is not None and len(self.payloads) < _PAYLOAD_CAP:
                self.payloads.append(dict(payload, margin=margin))

    def report(self, name: str, kind: str, instances: int, seed: int) -> CheckReport:
        worst = self.worst if self.worst != math.inf else 0.0
        return CheckReport(name, kind, instances, self.violations, worst, seed, tuple(self.payloads))


def _margin(lhs: float, rhs: float) -> float:
    """rhs - lhs with extended-real semantics (both infinite counts as slack 0)."""
    if math.isinf(rhs):
        return 0.0 if math.isinf(lhs) else math.inf
    if math.isinf(lhs):
        return -math.inf
    return rhs - lhs


def _identity_margin(a: float, b: float) -> float:
    if math.isinf(a) or math.isinf(b):
        return 0.0 if a == b else -math.inf
    return -abs(a - b)


def _rng(seed: int, salt: int) -> random.Random:
    return random.Random(seed * 1_000_003 + salt)


def _random_weights(rng: random.Random, n: int) -> list[float]:
    draws = [rng.expovariate(1.0) for _ in range(n)]
    total = sum(draws)
    return [d / total for d in draws]


def _pair_from_weights(p, q) -> DensityPair:
    return DensityPair(
        tuple(Atom(f"x{i:02d}", pi, qi) for i, (pi, qi) in enumerate(zip(p, q)))
    )


def _full_pair(rng: random.Random, n: int) -> DensityPair:
    return _pair_from_weights(_random_weights(rng, n), _random_weights(rng, n))


def _zero_one(rng: random.Random, weights: list[float]) -> list[float]:
    i = rng.randrange(len(weights))
    weights = list(weights)
    weights[i] = 0.0
    total = sum(weights)
    return [w / total for w in weights]


def _mixed_pair(rng: random.Random, n: int) -> DensityPair:
    """Random pair that may carry zero atoms on either side."""
    p = _random_weights(rng, n)
    q = _random_weights(rng, n)
    if n >= 2 and rng.random() < 0.3:
        p = _zero_one(rng, p)
    if n >= 2 and rng.random() < 0.3:
        q = _zero_one(rng, q)
    return _pair_from_weights(p, q)


def _uniform_pair(rng: random.Random, n: int) -> tuple[DensityPair, list[float]]:
    p = _random_weights(rng, n)
    return _pair_from_weights(p, [1.0 / n] * n), p


def _random_t_product(rng: random.Random, weights: list[float], steps: int) -> list[float]:
    """Apply a product of random T-transforms (doubly stochastic mixing)."""
    out = list(weights)
    n = len(out)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        lam = rng.random()
        vi, vj = out[i], out[j]
        out[i] = lam * vi + (1.0 - lam) * vj
        out[j] = lam * vj + (1.0 - lam) * vi
    return out


def _curve_power_divergence(curve: LorenzCurve, alpha: float) -> float:
    """Power divergence of a curve class; alpha = 1 means information divergence."""
    if alpha == 1.0:
        return divergence_from_curve(curve, 1.0).value
    if alpha > 1.0 and curve.singular_p > 0.0:
        return math.inf
    total = sum(w * s**alpha for w, s in curve.segments if s > 0.0)
    if total == 0.0:
        return math.inf if alpha < 1.0 else 0.0
    return clamp_nonneg((total - 1.0) / (alpha - 1.0))


def check_monotone_alpha(seed: int = DEFAULT_SEED, instances: int = 1000) -> CheckReport:
    """Divergence is nondecreasing along the order grid."""
    rng = _rng(seed, 1)
    col = _Collector(IDENTITY_TOL)
    for _ in range(instances):
        pair = _mixed_pair(rng, rng.randint(2, 6))
        values = [r.value for r in alpha_sweep(pair, ALPHA_GRID)]
        for a1, a2, v1, v2 in zip(ALPHA_GRID, ALPHA_GRID[1:], values, values[1:]):
            col.record(
                _margin(v1, v2),
                {"alphas": [a1, a2], "values": [v1, v2], "pair": pair.atoms},
            )
    return col.report("monotone_alpha", THEOREM, instances, seed)


def check_sandwich(seed: int = DEFAULT_SEED, instances: int = 1000) -> CheckReport:
    """H^2 <= D_1/2 <= D_1 <= D_2 <= chi^2 plus the two closed relations."""
    rng = _rng(seed, 2)
    col = _Collector(IDENTITY_TOL)
    for _ in range(instances):
        pair = _mixed_pair(rng, rng.randint(2, 6))
        h2 = hellinger_sq(pair)
        d_half = renyi_divergence(pair, 0.5).value
        d_one = kl(pair)
        d_two = renyi_divergence(pair, 2.0).value
        x2 = chi_sq(pair)
        payload = {"pair": pair.atoms, "chain": [h2, d_half, d_one, d_two, x2]}
        for lo, hi in ((h2, d_half), (d_half, d_one), (d_one, d_two), (d_two, x2)):
            col.record(_margin(lo, hi), payload)
        col.record(_identity_margin(d_half, -2.0 * math.log1p(-h2 / 2.0) if h2 < 2.0 else math.inf), payload)
        col.record(_identity_margin(d_two, math.log1p(x2) if math.isfinite(x2) else math.inf), payload)
    return col.report("sandwich_chain", THEOREM, instances, seed)


def check_joint_convexity(seed: int = DEFAULT_SEED, instances: int = 1000) -> CheckReport:
    """Joint convexity of the divergence in (P, Q) for orders in [0, 1]."""
    rng = _rng(seed, 3)
    col = _Collector(INEQUALITY_TOL)
    for _ in range(instances):
        n = rng.randint(2, 5)
        p1, q1 = _random_weights(rng, n), _random_weights(rng, n)
        p2, q2 = _random_weights(rng, n), _random_weights(rng, n)
        d1 = {a: renyi_divergence(_pair_from_weights(p1, q1), a).value for a in (0.0, 0.3, 0.7, 1.0)}
        d2 = {a: renyi_divergence(_pair_from_weights(p2, q2), a).value for a in (0.0, 0.3, 0.7, 1.0)}
        for lam in (0.25, 0.5, 0.75):
            mix = _pair_from_weights(
                [lam * a + (1 - lam) * b for a, b in zip(p1, p2)],
                [lam * a + (1 - lam) * b for a, b in zip(q1, q2)],
            )
            for alpha in (0.0, 0.3, 0.7, 1.0):
                lhs = renyi_divergence(mix, alpha).value
                rhs = lam * d1[alpha] + (1 - lam) * d2[alpha]
                col.record(
                    _margin(lhs, rhs),
                    {"alpha": alpha, "lambda": lam, "p1": p1, "q1": q1, "p2": p2, "q2": q2},
                )
    return col.report("joint_convexity_alpha_le_1", THEOREM, instances, seed)


def probe_joint_convexity_above_one(seed: int = DEFAULT_SEED, instances: int = 500) -> CheckReport:
    """Falsification probe: joint convexity breaks somewhere above order 1.

    Success means at least one seeded mix violates the convexity inequality
    at an order in {1.5, 2, 4}.  The order-1 boundary control is covered by
    check_joint_convexity.
    """
    rng = _rng(seed, 5)
    col = _Collector(INEQUALITY_TOL)
    for _ in range(instances):
        n = rng.randint(2, 4)
        p1, q1 = _random_weights(rng, n), _random_weights(rng, n)
        p2, q2 = _random_weights(rng, n), _random_weights(rng, n)
        for lam in (0.25, 0.5, 0.75):
            mix = _pair_from_weights(
                [lam * a + (1 - lam) * b for a, b in zip(p1, p2)],
                [lam * a + (1 - lam) * b for a, b in zip(q1, q2)],
            )
            for alpha in (1.5, 2.0, 4.0):
                lhs = renyi_divergence(mix, alpha).value
                rhs = (
                    lam * renyi_divergence(_pair_from_weights(p1, q1), alpha).value
                    + (1 - lam) * renyi_divergence(_pair_from_weights(p2, q2), alpha).value
                )
                col.record(
                    _margin(lhs, rhs),
                    {"alpha": alpha, "lambda": lam, "p1": p1, "q1": q1, "p2": p2, "q2": q2},
                )
    return col.report("joint_convexity_above_one_breaks", PROBE, instances, seed)


def check_convexity_in_q(seed: int = DEFAULT_SEED, instances: int = 1000) -> CheckReport:
    """Convexity in the second argument at every order."""
    rng = _rng(seed, 4)
    col = _Collector(INEQUALITY_TOL)
    for _ in range(instances):
        n = rng.randint(2, 5)
        p = _random_weights(rng, n)
        qa, qb = _random_weights(rng, n), _random_weights(rng, n)
        da = {a: renyi_divergence(_pair_from_weights(p, qa), a).value for a in ALPHA_GRID}
        db = {a: renyi_divergence(_pair_from_weights(p, qb), a).value for a in ALPHA_GRID}
        for lam in (0.25, 0.5, 0.75):
            mix = _pair_from_weights(p, [lam * a + (1 - lam) * b for a, b in zip(qa, qb)])
            for alpha in ALPHA_GRID:
                lhs = renyi_divergence(mix, alpha).value
                col.record(
                    _margin(lhs, lam * da[alpha] + (1 - lam) * db[alpha]),
                    {"alpha": alpha, "lambda": lam, "p": p, "qa": qa, "qb": qb},
                )
    return col.report("convexity_in_q", THEOREM, instances, seed)


def check_submodularity(seed: int = DEFAULT_SEED, instances: int = 1000) -> CheckReport:
    """d(P1) + d(P2) >= d(P1 meet P2) + d(P1 join P2) under a uniform reference."""
    rng = _rng(seed, 6)
    col = _Collector(INEQUALITY_TOL)
    for _ in range(instances):
        n = rng.randint(3, 6)
        pair1, w1 = _uniform_pair(rng, n)
        pair2, w2 = _uniform_pair(rng, n)
        c1, c2 = build_curve(pair1), build_curve(pair2)
        cm, cj = meet(c1, c2), join(c1, c2)
        for alpha in (0.5, 1.0, 2.0):
            lhs = _curve_power_divergence(cm, alpha) + _curve_power_divergence(cj, alpha)
            rhs = _curve_power_divergence(c1, alpha) + _curve_power_divergence(c2, alpha)
            col.record(_margin(lhs, rhs), {"alpha": alpha, "p1": w1, "p2": w2, "n": n})
    return col.report("power_divergence_submodular", THEOREM, instances, seed)


def probe_superadditivity_as_printed(seed: int = DEFAULT_SEED, instances: int = 500) -> CheckReport:
    """Falsification probe for the printed super-additivity display.

    As printed, d(P1) + d(P2) <= d(P1 meet P2); taking P1 = P2 = P != Q gives
    2 d <= d with d > 0, so the first instance is that fixed counterexample
    and the remaining ones evaluate all four lattice quantities on seeded
    uniform-reference pairs.
    """
    rng = _rng(seed, 7)
    col = _Collector(INEQUALITY_TOL)

    def eval_instance(w1, w2, n):
        pair1 = _pair_from_weights(w1, [1.0 / n] * n)
        pair2 = _pair_from_weights(w2, [1.0 / n] * n)
        c1, c2 = build_curve(pair1), build_curve(pair2)
        cm, cj = meet(c1, c2), join(c1, c2)
        for alpha in (0.5, 1.0, 2.0):
            d1 = _curve_power_divergence(c1, alpha)
            d2 = _curve_power_divergence(c2, alpha)
            dm = _curve_power_divergence(cm, alpha)
            dj = _curve_power_divergence(cj, alpha)
            # printed claim: d1 + d2 <= dm
            col.record(
                _margin(d1 + d2, dm),
                {"alpha": alpha, "p1": w1, "p2": w2, "d1": d1, "d2": d2, "d_meet": dm, "d_join": dj},
            )

    eval_instance([0.75, 0.25], [0.75, 0.25], 2)
    for _ in range(max(instances - 1, 0)):
        n = rng.randint(2, 5)
        eval_instance(_random_weights(rng, n), _random_weights(rng, n), n)
    return col.report("superadditivity_as_printed_breaks", PROBE, instances, seed)


def probe_ranking_monotonicity_as_printed(seed: int = DEFAULT_SEED, instances: int = 200) -> CheckReport:
    """Falsification probe for the printed ranking-moment direction.

    Printed: P1 below P2 in the ordering implies |r1|_rho <= |r2|_rho for
    rho > 0.  The fixed counterexample P1 = Q = uniform on two atoms and
    P2 = a point mass gives |r1| = 1 > 1/2 = |r2|; seeded ordered pairs are
    evaluated on both sides as well.
    """
    rng = _rng(seed, 8)
    col = _Collector(INEQUALITY_TOL)

    def eval_instance(w1, w2, n, rho):
        pair1 = _pair_from_weights(w1, [1.0 / n] * n)
        pair2 = _pair_from_weights(w2, [1.0 / n] * n)
        rel = compare(build_curve(pair1), build_curve(pair2))
        if rel not in (OrderingRelation.LESS, OrderingRelation.EQUAL):
            return
        m1 = moment(ranking_function(pair1).as_guess_values(), pair1, rho)
        m2 = moment(ranking_function(pair2).as_guess_values(), pair2, rho)
        # printed claim: m1 <= m2
        col.record(
            _margin(m1, m2),
            {"rho": rho, "p1": w1, "p2": w2, "moment1": m1, "moment2": m2},
        )

    eval_instance([0.5, 0.5], [1.0, 0.0], 2, 1.0)
    rhos = (0.5, 1.0, 2.0)
    for i in range(max(instances - 1, 0)):
        n = rng.randint(2, 5)
        w2 = _random_weights(rng, n)
        w1 = _random_t_product(rng, w2, rng.randint(1, n))
        eval_instance(w1, w2, n, rhos[i % len(rhos)])
    return col.report("ranking_moment_direction_as_printed_breaks", PROBE, instances, seed)


def probe_hellinger_relation_as_printed(seed: int = DEFAULT_SEED, instances: int = 200) -> CheckReport:
    """Falsification probe for the printed H^2 = 2 - 2 d_1/2 identity.

    Direct evaluation gives H^2 = d_1/2 (both equal 2 - 2 sum sqrt(pq)); the
    printed form would force the Bhattacharyya sum to equal 2/3.  Each
    instance reports both evaluations; the analogous printed chi^2 = d_2 - 1
    is evaluated alongside (the consistent identity being chi^2 = d_2).
    """
    rng = _rng(seed, 9)
    col = _Collector(IDENTITY_TOL)
    for _ in range(instances):
        pair = _full_pair(rng, rng.randint(2, 5))
        h2 = hellinger_sq(pair)
        d_half = power_divergence(pair, 0.5)
        d_two = power_divergence(pair, 2.0)
        x2 = chi_sq(pair)
        payload = {
            "pair": pair.atoms,
            "h2": h2,
            "d_half": d_half,
            "h2_as_printed": 2.0 - 2.0 * d_half,
            "consistent_gap": abs(h2 - d_half),
            "chi2": x2,
            "chi2_as_printed": d_two - 1.0,
        }
        col.record(_identity_margin(h2, 2.0 - 2.0 * d_half), payload)
        col.record(_identity_margin(x2, d_two - 1.0), payload)
    return col.report("hellinger_identity_as_printed_breaks", PROBE, instances, seed)


def probe_semicontinuity(seed: int = DEFAULT_SEED, instances: int = 100) -> CheckReport:
    """Targeted continuity probes.

    Fixed witnesses: order 0 is upper- but not fully continuous, and order
    inf is lower semicontinuous.  Seeded sequences check total-variation
    continuity for orders in (0, 1) and continuity on dominated sets for
    orders >= 1.
    """
    rng = _rng(seed, 10)
    col = _Collector(INEQUALITY_TOL)

    # order-0 witness: P_n -> (1, 0) against Q = (1/2, 1/2)
    for n in (2, 10, 100, 1000):
        pair_n = _pair_from_weights([1.0 - 1.0 / n, 1.0 / n], [0.5, 0.5])
        col.record(_identity_margin(renyi_divergence(pair_n, 0.0).value, 0.0), {"witness": "order0", "n": n})
    limit0 = renyi_divergence(_pair_from_weights([1.0, 0.0], [0.5, 0.5]), 0.0).value
    col.record(_identity_margin(limit0, math.log(2.0)), {"witness": "order0-limit"})
    col.record(_margin(0.0, limit0), {"witness": "order0-usc"})  # limsup 0 <= limit value

    # order-inf witness: Q = (1, 0), P_n -> (1, 0)
    for n in (2, 10, 100, 1000):
        pair_n = _pair_from_weights([1.0 - 1.0 / n, 1.0 / n], [1.0, 0.0])
        value = renyi_divergence(pair_n, math.inf).value
        col.record(0.0 if value == math.inf else -1.0, {"witness": "order-inf", "n": n})
    limit_pair = make_pair(
        FiniteDistribution(("a", "b"), (1.0, 0.0)), FiniteDistribution(("a", "b"), (1.0, 0.0))
    )
    col.record(_identity_margin(renyi_divergence(limit_pair, math.inf).value, 0.0), {"witness": "order-inf-limit"})

    for _ in range(instances):
        n = rng.randint(2, 5)
        p = _random_weights(rng, n)
        p_other = _random_weights(rng, n)
        q = _random_weights(rng, n)
        for alpha in (0.3, 0.7):
            # f(t) = D(P + t (P' - P) || Q) is convex for orders in [0, 1], so
            # the difference quotients (f(t) - f(0))/t are nondecreasing in t;
            # that forces |f(t) - f(0)| <= t * C with C the largest observed
            # quotient magnitude, i.e. convergence at an explicit linear rate.
            base = renyi_divergence(_pair_from_weights(p, q), alpha).value
            quotients = []
            devs = []
            for t in (1e-3, 1e-2, 1e-1):
                mixed = [(1.0 - t) * a + t * b for a, b in zip(p, p_other)]
                dev = renyi_divergence(_pair_from_weights(mixed, q), alpha).value - base
                devs.append(dev)
                quotients.append(dev / t)
            col.record(_margin(quotients[0], quotients[1]), {"witness": "tv-continuity", "alpha": alpha})
            col.record(_margin(quotients[1], quotients[2]), {"witness": "tv-continuity", "alpha": alpha})
            rate = max(abs(quotients[0]), abs(quotients[2]))
            col.record(_margin(abs(devs[0]), 1e-3 * rate), {"witness": "tv-continuity-rate", "alpha": alpha})

        # dominated-set continuity: P_m below a fixed majorant, orders >= 1
        top = _random_weights(rng, n)
        mixed_target = _random_t_product(rng, top, n)
        for alpha in (1.0, 2.0, math.inf):
            base = renyi_divergence(_pair_from_weights(mixed_target, [1.0 / n] * n), alpha).value
            devs = []
            for m in (10, 100, 1000):
                p_m = [(1.0 - 1.0 / m) * a + (1.0 / m) * b for a, b in zip(mixed_target, top)]
                devs.append(abs(renyi_divergence(_pair_from_weights(p_m, [1.0 / n] * n), alpha).value - base))
            col.record(
                _margin(devs[2], max(devs[0], devs[1], 1e-6)),
                {"witness": "dominated-continuity", "alpha": alpha},
            )
            col.record(_margin(devs[2], 1e-2), {"witness": "dominated-continuity-rate", "alpha": alpha})
    return col.report("semicontinuity_probes", THEOREM, instances, seed)


def check_data_processing(seed: int = DEFAULT_SEED, instances: int = 1000) -> CheckReport:
    """Channels can only decrease the divergence, at every order."""
    rng = _rng(seed, 11)
    col = _Collector(INEQUALITY_TOL)
    for i in range(instances):
        n = rng.randint(2, 6)
        pair = _mixed_pair(rng, n)
        channel = random_channel(pair.labels(), rng.randint(1, n + 1), rng.randrange(2**31))
        alpha = ALPHA_GRID[i % len(ALPHA_GRID)]
        before = renyi_divergence(pair, alpha).value
        after = renyi_divergence(apply(channel, pair), alpha).value
        col.record(
            _margin(after, before),
            {"alpha": alpha, "pair": pair.atoms, "before": before, "after": after},
        )
    return col.report("data_processing", THEOREM, instances, seed)


def check_curve_roundtrip(seed: int = DEFAULT_SEED, instances: int = 1000) -> CheckReport:
    """Divergence read from the curve equals divergence computed on the pair."""
    rng = _rng(seed, 12)
    col = _Collector(IDENTITY_TOL)
    orders = (0.0, 0.5, 0.9, 1.0, 2.0, 4.0, 10.0, math.inf)
    for _ in range(instances):
        pair = _mixed_pair(rng, rng.randint(2, 6))
        curve = build_curve(pair)
        for alpha in orders:
            direct = renyi_divergence(pair, alpha).value
            geometric = divergence_from_curve(curve, alpha).value
            col.record(
                _identity_margin(direct, geometric),
                {"alpha": alpha, "pair": pair.atoms, "direct": direct, "geometric": geometric},
            )
    return col.report("curve_roundtrip", THEOREM, instances, seed)


def check_additivity(seed: int = DEFAULT_SEED, instances: int = 200) -> CheckReport:
    """Divergence of a finite product equals the sum of the divergences."""
    rng = _rng(seed, 13)
    col = _Collector(IDENTITY_TOL)
    for i in range(instances):
        pairs = [_mixed_pair(rng, rng.randint(2, 4)) for _ in range(1 + i % 4)]
        for alpha in (0.0, 0.5, 1.0, 2.0, math.inf):
            total, joint = additivity_check(pairs, alpha)
            col.record(
                _identity_margin(total, joint),
                {"alpha": alpha, "n_pairs": len(pairs), "sum": total, "product": joint},
            )
    return col.report("finite_additivity", THEOREM, instances, seed)


def check_lattice_laws(seed: int = DEFAULT_SEED, instances: int = 500) -> CheckReport:
    """Idempotence, commutativity, associativity, absorption, bound consistency."""
    rng = _rng(seed, 14)
    col = _Collector(0.0)

    def law(name: str, ok: bool, extra: dict) -> None:
        col.record(0.0 if ok else -1.0, dict(extra, law=name))

    def equal(a: LorenzCurve, b: LorenzCurve) -> bool:
        return compare(a, b) == OrderingRelation.EQUAL

    for _ in range(instances):
        n = rng.randint(3, 6)
        q = _random_weights(rng, n)
        curves = [build_curve(_pair_from_weights(_random_weights(rng, n), q)) for _ in range(3)]
        c1, c2, c3 = curves
        info = {"n": n}
        law("meet_idempotent", equal(meet(c1, c1), c1), info)
        law("join_idempotent", equal(join(c1, c1), c1), info)
        law("meet_commutative", equal(meet(c1, c2), meet(c2, c1)), info)
        law("join_commutative", equal(join(c1, c2), join(c2, c1)), info)
        law("meet_associative", equal(meet(meet(c1, c2), c3), meet(c1, meet(c2, c3))), info)
        law("join_associative", equal(join(join(c1, c2), c3), join(c1, join(c2, c3))), info)
        law("absorb_meet", equal(meet(c1, join(c1, c2)), c1), info)
        law("absorb_join", equal(join(c1, meet(c1, c2)), c1), info)
        cm, cj = meet(c1, c2), join(c1, c2)
        law("meet_below", compare(cm, c1) in (OrderingRelation.LESS, OrderingRelation.EQUAL), info)
        law("join_above", compare(c1, cj) in (OrderingRelation.LESS, OrderingRelation.EQUAL), info)
        if compare(c3, c1) in (OrderingRelation.LESS, OrderingRelation.EQUAL) and compare(
            c3, c2
        ) in (OrderingRelation.LESS, OrderingRelation.EQUAL):
            law("meet_is_greatest_lower", compare(c3, cm) in (OrderingRelation.LESS, OrderingRelation.EQUAL), info)
        if compare(c1, c3) in (OrderingRelation.LESS, OrderingRelation.EQUAL) and compare(
            c2, c3
        ) in (OrderingRelation.LESS, OrderingRelation.EQUAL):
            law("join_is_least_upper", compare(cj, c3) in (OrderingRelation.LESS, OrderingRelation.EQUAL), info)
    return col.report("lattice_laws", THEOREM, instances, seed)


def check_ordering_monotonicity(seed: int = DEFAULT_SEED, instances: int = 500) -> CheckReport:
    """Mixing down the lattice can only decrease the divergence."""
    rng = _rng(seed, 15)
    col = _Collector(IDENTITY_TOL)
    for _ in range(instances):
        n = rng.randint(3, 6)
        w2 = _random_weights(rng, n)
        w1 = _random_t_product(rng, w2, rng.randint(1, n))
        c1 = build_curve(_pair_from_weights(w1, [1.0 / n] * n))
        c2 = build_curve(_pair_from_weights(w2, [1.0 / n] * n))
        rel = compare(c1, c2)
        ok = rel in (OrderingRelation.LESS, OrderingRelation.EQUAL)
        col.record(0.0 if ok else -1.0, {"relation": rel.value, "p1": w1, "p2": w2})
        for alpha in (0.5, 1.0, 2.0):
            col.record(
                _margin(divergence_from_curve(c1, alpha).value, divergence_from_curve(c2, alpha).value),
                {"alpha": alpha, "p1": w1, "p2": w2},
            )
    return col.report("ordering_monotonicity", THEOREM, instances, seed)


def check_guessing_bound(seed: int = DEFAULT_SEED, instances: int = 1000) -> CheckReport:
    """-log ||r||_rho dominates the order-1/(1+rho) divergence."""
    rng = _rng(seed, 16)
    col = _Collector(IDENTITY_TOL)
    rhos = (-0.5, 0.5, 1.0, 2.0)
    for i in range(instances):
        pair = _full_pair(rng, rng.randint(2, 6))
        rho = rhos[i % len(rhos)]
        neg_log_moment, divergence, gap = guessing_bound(pair, rho)
        col.record(
            gap,
            {"rho": rho, "pair": pair.atoms, "neg_log_moment": neg_log_moment, "divergence": divergence},
        )
    return col.report("guessing_bound", THEOREM, instances, seed)


def check_markov_synthesis(seed: int = DEFAULT_SEED, instances: int = 500) -> CheckReport:
    """Synthesized operators are doubly stochastic and map p2 to p1."""
    rng = _rng(seed, 17)
    col = _Collector(INEQUALITY_TOL)
    for _ in range(instances):
        n = rng.randint(2, 6)
        labels = tuple(f"x{i:02d}" for i in range(n))
        w2 = _random_weights(rng, n)
        w1 = _random_t_product(rng, w2, rng.randint(1, n))
        channel = construct_markov_operator(
            FiniteDistribution(labels, tuple(w2)), FiniteDistribution(labels, tuple(w1))
        )
        m = channel.as_array()
        stochastic_dev = max(
            float(np.max(np.abs(m.sum(axis=0) - 1.0))),
            float(np.max(np.abs(m.sum(axis=1) - 1.0))),
        )
        mapping_dev = float(np.max(np.abs(np.array(w2) @ m - np.array(w1))))
        payload = {"p2": w2, "p1": w1, "stochastic_dev": stochastic_dev, "mapping_dev": mapping_dev}
        col.record(-stochastic_dev, payload)
        col.record(-mapping_dev, payload)
    return col.report("markov_operator_synthesis", THEOREM, instances, seed)


ALL_CHECKS = (
    check_monotone_alpha,
    check_sandwich,
    check_joint_convexity,
    check_convexity_in_q,
    probe_joint_convexity_above_one,
    check_submodularity,
    probe_superadditivity_as_printed,
    probe_ranking_monotonicity_as_printed,
    probe_hellinger_relation_as_printed,
    probe_semicontinuity,
    check_data_processing,
    check_curve_roundtrip,
    check_additivity,
    check_lattice_laws,
    check_ordering_monotonicity,
    check_guessing_bound,
    check_markov_synthesis,
)


def run_all(seed: int = DEFAULT_SEED, instances: int | None = None) -> list[CheckReport]:
    """Run every check; ``instances`` overrides each check's default count."""
    reports = []
    for check in ALL_CHECKS:
        if instances is None:
            reports.append(check(seed=seed))
        else:
            reports.append(check(seed=seed, instances=instances))
    return reports


def exit_code(reports) -> int:
    """0 all green, 2 theorem violation, 3 probe failed to falsify."""
    if any(r.kind == THEOREM and not r.passed for r in reports):
        return 2
    if any(r.kind == PROBE and not r.passed for r in reports):
        return 3
    return 0


def reports_to_json(reports, seed: int) -> str:
    doc = {
        "seed": seed,
        "exit_code": exit_code(reports),
        "checks": [r.to_dict() for r in reports],
    }
    return json.dumps(doc, indent=2, sort_keys=True)
