"""The Renyi divergence family and related distances on density pairs.

All values are natural-log (nats).  +inf is a first-class result and no NaN
ever escapes an operation; base conversion is presentation-layer only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._numeric import LOG_SHIFT_THRESHOLD, clamp_nonneg, log_sum_exp
from .measures import DensityPair, ValidationError

# Orders closer to 1 than this are computed by the dedicated KL formula to
# avoid cancellation in the 1/(alpha-1) factor.
ALPHA_ONE_WINDOW = 1e-9


@dataclass(frozen=True)
class DivergenceResult:
    """An extended nonnegative real in nats, tagged with its order."""

    order: float
    value: float

    def is_finite(self) -> bool:
        return math.isfinite(self.value)


def _check_order(alpha: float) -> float:
    alpha = float(alpha)
    if math.isnan(alpha) or alpha < 0.0:
        raise ValidationError(f"order must be in [0, inf], got {alpha!r}")
    return alpha


def _log_power_sum(pair: DensityPair, alpha: float) -> float:
    """log sum of p^alpha * q^(1-alpha) over atoms with p > 0 and q > 0.

    Returns -inf when no atom has both masses positive (mutually singular
    measures).  Falls back to max-shifted log-space accumulation when any
    term's log magnitude exceeds the double-safe threshold.
    """
    logs = [
        alpha * math.log(p) + (1.0 - alpha) * math.log(q)
        for _, p, q in pair.atoms
        if p > 0.0 and q > 0.0
    ]
    if not logs:
        return -math.inf
    if max(abs(l) for l in logs) <= LOG_SHIFT_THRESHOLD:
        total = sum(
            p**alpha * q ** (1.0 - alpha)
            for _, p, q in pair.atoms
            if p > 0.0 and q > 0.0
        )
        return math.log(total)
    return log_sum_exp(logs)


def _order_zero(pair: DensityPair) -> float:
    q_on_support = sum(a.q for a in pair.atoms if a.p > 0.0)
    if q_on_support <= 0.0:
        return math.inf
    return clamp_nonneg(-math.log(q_on_support))


def _order_infinity(pair: DensityPair) -> float:
    worst = 0.0
    for _, p, q in pair.atoms:
        if q == 0.0:
            if p > 0.0:
                return math.inf
        else:
            worst = max(worst, p / q)
    return clamp_nonneg(math.log(worst))


def kl(pair: DensityPair) -> float:
    """Information divergence sum p*log(p/q), with 0*log(0/x)=0 and x*log(x/0)=inf."""
    total = 0.0
    for _, p, q in pair.atoms:
        if p > 0.0:
            if q == 0.0:
                return math.inf
            total += p * math.log(p / q)
    return clamp_nonneg(total)


def renyi_divergence(pair: DensityPair, alpha: float) -> DivergenceResult:
    """Order-alpha divergence of P from Q for alpha in [0, inf].

    Finite orders other than 1 use log(sum p^a q^(1-a)) / (a-1); the orders
    0, 1, and inf use their closed forms rather than numerical limits.
    """
    alpha = _check_order(alpha)
    if alpha == math.inf:
        return DivergenceResult(alpha, _order_infinity(pair))
    if alpha == 0.0:
        return DivergenceResult(alpha, _order_zero(pair))
    if abs(alpha - 1.0) < ALPHA_ONE_WINDOW:
        return DivergenceResult(alpha, kl(pair))
    if alpha > 1.0 and pair.singular_mass() > 0.0:
        return DivergenceResult(alpha, math.inf)
    log_sum = _log_power_sum(pair, alpha)
    if log_sum == -math.inf:
        # mutually singular pair at 0 < alpha < 1
        return DivergenceResult(alpha, math.inf)
    return DivergenceResult(alpha, clamp_nonneg(log_sum / (alpha - 1.0)))


def power_divergence(pair: DensityPair, alpha: float) -> float:
    """(sum p^a q^(1-a) - 1) / (a - 1) for finite a in (0,1) or (1,inf)."""
    alpha = _check_order(alpha)
    if alpha == 0.0 or alpha == 1.0 or alpha == math.inf:
        raise ValidationError(f"power divergence is undefined at order {alpha!r}")
    if alpha > 1.0 and pair.singular_mass() > 0.0:
        return math.inf
    log_sum = _log_power_sum(pair, alpha)
    if log_sum == -math.inf:
        return math.inf if alpha < 1.0 else 0.0
    if log_sum > LOG_SHIFT_THRESHOLD:
        return math.inf
    return clamp_nonneg((math.exp(log_sum) - 1.0) / (alpha - 1.0))


def hellinger_sq(pair: DensityPair) -> float:
    """Squared Hellinger distance sum (sqrt(p) - sqrt(q))^2, in [0, 2]."""
    return sum((math.sqrt(p) - math.sqrt(q)) ** 2 for _, p, q in pair.atoms)


def chi_sq(pair: DensityPair) -> float:
    """Chi-square distance sum (p-q)^2/q over q > 0; +inf on a Q-singular part."""
    if pair.singular_mass() > 0.0:
        return math.inf
    return sum((p - q) ** 2 / q for _, p, q in pair.atoms if q > 0.0)


def total_variation(pair: DensityPair) -> float:
    """Total variation distance (1/2) sum |p - q|, in [0, 1]."""
    return 0.5 * sum(abs(p - q) for _, p, q in pair.atoms)


def separation_distance(pair: DensityPair) -> float:
    """max over atoms of (1 - p/q); requires Q to dominate the pair's support.

    Pairs with a nonempty Q-singular part are rejected: the quantity is
    defined through the ratio p/q, which does not exist there.
    """
    if pair.singular_mass() > 0.0:
        raise ValidationError(
            f"separation distance needs q > 0 on every atom; singular atoms: {pair.singular_labels()}"
        )
    return max(1.0 - p / q for _, p, q in pair.atoms)


def alpha_sweep(pair: DensityPair, grid) -> list[DivergenceResult]:
    """Divergences along an ascending grid of orders."""
    grid = [_check_order(a) for a in grid]
    for lo, hi in zip(grid, grid[1:]):
        if hi < lo:
            raise ValidationError("order grid must be sorted ascending")
    return [renyi_divergence(pair, a) for a in grid]
