"""Ranking and guessing functions, rho-moments, and i.i.d. guessing experiments.

Everything here presupposes that Q dominates P on the pair's support: the
ranking function is defined through the ratio p/q, and a Q-singular atom
would receive rank 0, which no valid ranking admits.  Pairs with a nonempty
Q-singular part are therefore rejected.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from math import comb
from typing import Mapping, NamedTuple

from .measures import DensityPair, FiniteDistribution, ValidationError
from .renyi import renyi_divergence

# Ratios this close (relative) are treated as one tie level.
RATIO_GROUP_REL_TOL = 1e-9
RATIO_GROUP_ABS_TOL = 1e-12

DEFAULT_TYPE_CLASS_BUDGET = 2_000_000
PERMUTATION_ATOM_LIMIT = 7


class BudgetExceededError(ValueError):
    """An enumeration would exceed its configured size budget."""


class Level(NamedTuple):
    ratio: float
    q_mass: float
    cum_q: float


@dataclass(frozen=True)
class RankingProfile:
    """Ratio levels in descending order plus the per-atom rank values.

    An atom's rank is the Q-mass of all atoms whose ratio weakly exceeds its
    own, so tied atoms share the cumulative mass of their whole level.
    """

    levels: tuple[Level, ...]
    ranks: tuple[tuple[str, float], ...]

    def rank_of(self, label: str) -> float:
        for l, r in self.ranks:
            if l == label:
                return r
        raise KeyError(label)

    def as_guess_values(self) -> dict[str, float]:
        return dict(self.ranks)


def _validate_rho(rho: float) -> float:
    rho = float(rho)
    if not math.isfinite(rho) or rho <= -1.0 or rho == 0.0:
        raise ValidationError(f"rho must lie in (-1, 0) or (0, inf), got {rho!r}")
    return rho


def _require_dominated(pair: DensityPair) -> None:
    if pair.singular_mass() > 0.0:
        raise ValidationError(
            f"ranking requires q > 0 on every atom; singular atoms: {pair.singular_labels()}"
        )


def _same_level(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=RATIO_GROUP_REL_TOL, abs_tol=RATIO_GROUP_ABS_TOL)


def ranking_function(pair: DensityPair) -> RankingProfile:
    """Rank r(x) = Q-mass of atoms with ratio >= that of x, levels descending."""
    _require_dominated(pair)
    rated = sorted(((a.p / a.q, a.q, a.label) for a in pair.atoms), reverse=True)
    levels: list[Level] = []
    level_members: list[list[str]] = []
    cum = 0.0
    i = 0
    while i < len(rated):
        j = i
        q_mass = 0.0
        members = []
        while j < len(rated) and _same_level(rated[j][0], rated[i][0]):
            q_mass += rated[j][1]
            members.append(rated[j][2])
            j += 1
        cum += q_mass
        levels.append(Level(rated[i][0], q_mass, cum))
        level_members.append(members)
        i = j
    ranks = {}
    for level, members in zip(levels, level_members):
        for label in members:
            ranks[label] = level.cum_q
    return RankingProfile(tuple(levels), tuple(sorted(ranks.items())))


def is_guessing_function(g: Mapping[str, float], q: FiniteDistribution) -> bool:
    """Check Q({x : g(x) <= t}) <= t for t in [0, 1].

    Q({g <= t}) is a right-continuous step function jumping only at values of
    g, so checking t at 0, 1, and every distinct g value inside [0, 1]
    decides the inequality everywhere.
    """
    thresholds = {0.0, 1.0}
    thresholds.update(v for v in g.values() if 0.0 <= v <= 1.0)
    for t in thresholds:
        mass = sum(w for l, w in zip(q.labels, q.weights) if g.get(l, math.inf) <= t)
        if mass > t + 1e-12:
            return False
    return True


def moment(g: Mapping[str, float], pair: DensityPair, rho: float) -> float:
    """The rho-moment (sum p(x) g(x)^rho)^(1/rho) of guess values under P."""
    rho = _validate_rho(rho)
    total = 0.0
    for label, p, _ in pair.atoms:
        if p == 0.0:
            continue
        try:
            value = g[label]
        except KeyError:
            raise ValidationError(f"guess values missing atom {label!r}") from None
        if value < 0.0:
            raise ValidationError(f"guess value for {label!r} is negative")
        if value == 0.0 and rho < 0.0:
            raise ValidationError(f"zero guess value with positive p-mass at {label!r}")
        total += p * value**rho
    return total ** (1.0 / rho)


def guessing_bound(pair: DensityPair, rho: float) -> tuple[float, float, float]:
    """(-log ||r||_rho, D_alpha with alpha = 1/(1+rho), gap between them)."""
    rho = _validate_rho(rho)
    ranking = ranking_function(pair)
    neg_log_moment = -math.log(moment(ranking.as_guess_values(), pair, rho))
    divergence = renyi_divergence(pair, 1.0 / (1.0 + rho)).value
    return neg_log_moment, divergence, neg_log_moment - divergence


def _compositions(n: int, k: int):
    """Count vectors of length k summing to n, in lexicographic order."""
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, k - 1):
            yield (first, *rest)


def iid_experiment(
    pair: DensityPair,
    rho: float,
    n_max: int,
    max_type_classes: int = DEFAULT_TYPE_CLASS_BUDGET,
) -> list[float]:
    """Per-n values a_n/n with a_n = -log ||ranking of the n-fold product||_rho.

    The n-fold product is aggregated into type classes: sequences with the
    same per-symbol count vector share masses and ratio, so class masses are
    multinomial coefficients times mass powers, accumulated in log space with
    a cumulative log-factorial table.
    """
    rho = _validate_rho(rho)
    _require_dominated(pair)
    if n_max < 1:
        raise ValidationError("n_max must be >= 1")
    k = len(pair.atoms)
    log_p = [math.log(a.p) if a.p > 0.0 else -math.inf for a in pair.atoms]
    log_q = [math.log(a.q) for a in pair.atoms]
    log_fact = [0.0]
    for i in range(1, n_max + 1):
        log_fact.append(log_fact[-1] + math.log(i))
    values = []
    for n in range(1, n_max + 1):
        n_classes = comb(n + k - 1, k - 1)
        if n_classes > max_type_classes:
            raise BudgetExceededError(
                f"{n_classes} type classes at n={n} exceed budget {max_type_classes}"
            )
        classes = []  # (log ratio, log class q-mass, log class p-mass)
        for counts in _compositions(n, k):
            log_mult = log_fact[n] - sum(log_fact[c] for c in counts)
            lp = 0.0
            lq = 0.0
            for c, lpi, lqi in zip(counts, log_p, log_q):
                if c == 0:
                    continue
                lp += c * lpi
                lq += c * lqi
            classes.append((lp - lq, log_mult + lq, log_mult + lp))
        classes.sort(key=lambda t: t[0], reverse=True)
        cum_q = 0.0
        total = 0.0  # sum over levels of P(level) * rank^rho
        i = 0
        while i < len(classes):
            j = i
            q_level = 0.0
            p_level = 0.0
            while j < len(classes) and (
                classes[j][0] == classes[i][0]
                or abs(classes[j][0] - classes[i][0]) <= 1e-9
            ):
                q_level += math.exp(classes[j][1])
                if classes[j][2] != -math.inf:
                    p_level += math.exp(classes[j][2])
                j += 1
            cum_q += q_level
            if p_level > 0.0:
                total += p_level * cum_q**rho
            i = j
        values.append(-math.log(total) / rho / n)
    return values


def experiment_csv(
    pair: DensityPair,
    rho: float,
    n_max: int,
    max_type_classes: int = DEFAULT_TYPE_CLASS_BUDGET,
    precision: int = 12,
) -> str:
    """CSV rows "n,a_n_over_n,first_difference,divergence,gap" for the experiment."""
    rho = _validate_rho(rho)
    per_n = iid_experiment(pair, rho, n_max, max_type_classes)
    divergence = renyi_divergence(pair, 1.0 / (1.0 + rho)).value
    lines = ["n,a_n_over_n,first_difference,divergence,gap"]
    prev_a = 0.0
    for n, value in enumerate(per_n, start=1):
        a_n = value * n
        diff = a_n - prev_a
        prev_a = a_n
        fields = (value, diff, divergence, value - divergence)
        lines.append(f"{n}," + ",".join(f"{x:.{precision}g}" for x in fields))
    return "\n".join(lines) + "\n"


def compare_ranking_vs_permutations(
    pair: DensityPair, rho: float, max_atoms: int = PERMUTATION_ATOM_LIMIT
) -> tuple[float, float, float]:
    """(ranking norm, min, max) of ||g||_rho over all assignments of
    {1/n, ..., 1} to atoms.

    Restricted to a uniform reference on at most ``max_atoms`` atoms.  With
    distinct ratio levels the ranking attains the minimum norm for every
    valid rho: for rho > 0 that is also the minimum raw moment E[g^rho],
    while for rho < 0 it corresponds to the maximum raw moment (the power
    1/rho < 0 reverses the order).
    """
    rho = _validate_rho(rho)
    _require_dominated(pair)
    n = len(pair.atoms)
    if n > max_atoms:
        raise ValidationError(f"permutation comparison limited to {max_atoms} atoms")
    if any(abs(a.q - 1.0 / n) > 1e-9 for a in pair.atoms):
        raise ValidationError("permutation comparison requires a uniform reference")
    ranking = ranking_function(pair)
    rank_moment = moment(ranking.as_guess_values(), pair, rho)
    p = pair.p_weights()
    best = math.inf
    worst = -math.inf
    for perm in itertools.permutations(range(1, n + 1)):
        total = sum(pi * (v / n) ** rho for pi, v in zip(p, perm))
        value = total ** (1.0 / rho)
        best = min(best, value)
        worst = max(worst, value)
    return rank_moment, best, worst
