"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import math
import random

import mpmath
import pytest

from renyikit.measures import Atom, DensityPair, FiniteDistribution, make_pair


def random_weights(rng: random.Random, n: int) -> list[float]:
    draws = [rng.expovariate(1.0) for _ in range(n)]
    total = sum(draws)
    return [d / total for d in draws]


def pair_from_weights(p, q) -> DensityPair:
    return DensityPair(
        tuple(Atom(f"x{i:02d}", pi, qi) for i, (pi, qi) in enumerate(zip(p, q)))
    )


def full_pair(rng: random.Random, n: int) -> DensityPair:
    return pair_from_weights(random_weights(rng, n), random_weights(rng, n))


def mixed_pair(rng: random.Random, n: int) -> DensityPair:
    """May carry zero atoms on either side (Q-singular parts, null P-atoms)."""
    p = random_weights(rng, n)
    q = random_weights(rng, n)
    if n >= 2 and rng.random() < 0.3:
        i = rng.randrange(n)
        p[i] = 0.0
        total = sum(p)
        p = [v / total for v in p]
    if n >= 2 and rng.random() < 0.3:
        i = rng.randrange(n)
        q[i] = 0.0
        total = sum(q)
        q = [v / total for v in q]
    return pair_from_weights(p, q)


def dist(*weights: float) -> FiniteDistribution:
    labels = tuple(f"a{i}" for i in range(len(weights)))
    return FiniteDistribution(labels, tuple(weights))


def pair_of(p_weights, q_weights) -> DensityPair:
    return make_pair(dist(*p_weights), dist(*q_weights))


def oracle_divergence(pair: DensityPair, alpha: float) -> float:
    """High-precision direct evaluation of the defining formulas (50 digits)."""
    with mpmath.workdps(50):
        if alpha == 0.0:
            mass = sum(mpmath.mpf(a.q) for a in pair.atoms if a.p > 0.0)
            return math.inf if mass == 0 else float(-mpmath.log(mass))
        if alpha == math.inf:
            worst = mpmath.mpf(0)
            for a in pair.atoms:
                if a.q == 0.0:
                    if a.p > 0.0:
                        return math.inf
                else:
                    worst = max(worst, mpmath.mpf(a.p) / mpmath.mpf(a.q))
            return float(mpmath.log(worst))
        if alpha == 1.0:
            total = mpmath.mpf(0)
            for a in pair.atoms:
                if a.p > 0.0:
                    if a.q == 0.0:
                        return math.inf
                    total += mpmath.mpf(a.p) * mpmath.log(mpmath.mpf(a.p) / mpmath.mpf(a.q))
            return float(total)
        if alpha > 1.0 and any(a.q == 0.0 and a.p > 0.0 for a in pair.atoms):
            return math.inf
        total = mpmath.mpf(0)
        for a in pair.atoms:
            if a.p > 0.0 and a.q > 0.0:
                total += mpmath.mpf(a.p) ** alpha * mpmath.mpf(a.q) ** (1.0 - alpha)
        if total == 0:
            return math.inf
        return float(mpmath.log(total) / (alpha - 1.0))


@pytest.fixture
def worked_pair() -> DensityPair:
    """P = (1/2, 1/2) against Q = (1/4, 3/4), the hand-derived fixture."""
    return pair_of([0.5, 0.5], [0.25, 0.75])
