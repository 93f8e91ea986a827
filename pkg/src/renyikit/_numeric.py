"""Shared numeric helpers for extended-real computations."""

from __future__ import annotations

import math

# Direct power sums are safe while every term's log magnitude stays below this
# threshold; beyond it, accumulate with a max-shifted exponential sum instead.
LOG_SHIFT_THRESHOLD = 500.0


def log_sum_exp(logs) -> float:
    """log(sum(exp(l))) with max-shift stabilization.

    Accepts -inf entries (zero terms); returns -inf for an empty or
    all--inf input and +inf if any entry is +inf.
    """
    m = max(logs, default=-math.inf)
    if m == -math.inf:
        return -math.inf
    if math.isinf(m):
        return math.inf
    return m + math.log(sum(math.exp(l - m) for l in logs))


def clamp_nonneg(value: float) -> float:
    """Round tiny negative float noise up to exactly 0.0.

    Only values above -1e-9 are clamped: quantities known to be nonnegative
    can only dip below zero by accumulated rounding, and anything more
    negative would indicate a real bug that should stay visible.
    """
    if -1e-9 < value <= 0.0:  # also normalizes -0.0
        return 0.0
    return value
