"""Lorenz curves of density pairs and the induced partial order.

A curve is the canonical piecewise-linear convex function L on [0, 1] whose
horizontal axis is cumulative Q-mass and vertical axis is cumulative P-mass:
segment widths are Q-masses and slopes are the sorted likelihood ratios p/q.
P-mass sitting where Q vanishes is kept as a scalar ``singular_p`` instead of
an infinite-slope segment, so L(1) = 1 - singular_p and all arithmetic stays
total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from ._numeric import LOG_SHIFT_THRESHOLD, clamp_nonneg, log_sum_exp
from .measures import DensityPair, ValidationError
from .renyi import ALPHA_ONE_WINDOW, DivergenceResult, _check_order

# Adjacent segments whose slopes differ by less than this are merged, which
# makes curve equality a finite exact check.
SLOPE_MERGE_TOL = 1e-12
MASS_TOL = 1e-9
_POINTWISE_EPS = 1e-12


class Segment(NamedTuple):
    width: float
    slope: float


class OrderingRelation(Enum):
    EQUAL = "equal"
    LESS = "less"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


def _canonical_segments(segments) -> tuple[Segment, ...]:
    items = sorted(
        (Segment(float(w), float(s)) for w, s in segments if float(w) > 0.0),
        key=lambda seg: seg.slope,
    )
    merged: list[Segment] = []
    for seg in items:
        if merged and seg.slope - merged[-1].slope < SLOPE_MERGE_TOL:
            w0, s0 = merged[-1]
            w = w0 + seg.width
            merged[-1] = Segment(w, (w0 * s0 + seg.width * seg.slope) / w)
        else:
            merged.append(seg)
    return tuple(merged)


@dataclass(frozen=True)
class LorenzCurve:
    """Canonical convex curve: positive widths, strictly increasing slopes."""

    segments: tuple[Segment, ...]
    singular_p: float = 0.0

    def __post_init__(self):
        segments = _canonical_segments(self.segments)
        singular = float(self.singular_p)
        if not segments:
            raise ValidationError("curve needs at least one segment")
        if not -MASS_TOL <= singular <= 1.0 + MASS_TOL:
            raise ValidationError(f"singular mass {singular!r} outside [0, 1]")
        singular = min(max(singular, 0.0), 1.0)
        for w, s in segments:
            if not (math.isfinite(w) and math.isfinite(s)) or s < 0.0:
                raise ValidationError(f"invalid segment ({w!r}, {s!r})")
        width_sum = sum(w for w, _ in segments)
        if abs(width_sum - 1.0) > MASS_TOL:
            raise ValidationError(f"segment widths sum to {width_sum!r}, not 1")
        mass = sum(w * s for w, s in segments) + singular
        if abs(mass - 1.0) > MASS_TOL:
            raise ValidationError(f"curve carries P-mass {mass!r}, not 1")
        object.__setattr__(self, "segments", segments)
        object.__setattr__(self, "singular_p", singular)

    def breakpoints(self) -> tuple[float, ...]:
        us = [0.0]
        for w, _ in self.segments:
            us.append(us[-1] + w)
        us[-1] = 1.0
        return tuple(us)

    def vertices(self) -> tuple[tuple[float, float], ...]:
        """(u, L(u)) at every breakpoint, from (0, 0) to (1, 1 - singular_p)."""
        pts = [(0.0, 0.0)]
        u = y = 0.0
        for w, s in self.segments:
            u += w
            y += w * s
            pts.append((u, y))
        pts[-1] = (1.0, y)
        return tuple(pts)

    def evaluate(self, u: float) -> float:
        """L(u) by segment accumulation; u must lie in [0, 1]."""
        if not 0.0 <= u <= 1.0:
            raise ValidationError(f"u={u!r} outside [0, 1]")
        pos = y = 0.0
        for w, s in self.segments:
            if u <= pos + w:
                return y + s * (u - pos)
            pos += w
            y += w * s
        return y

    def total_height(self) -> float:
        return 1.0 - self.singular_p


def build_curve(pair: DensityPair) -> LorenzCurve:
    """Curve of a pair: q-widths with slopes p/q sorted ascending.

    Atoms with q = 0 contribute their p-mass to ``singular_p``; atoms with
    p = 0 become slope-0 segments.
    """
    singular = 0.0
    segments = []
    for _, p, q in pair.atoms:
        if q == 0.0:
            singular += p
        else:
            segments.append(Segment(q, p / q))
    return LorenzCurve(tuple(segments), singular)


def upper_curve_slopes(curve: LorenzCurve) -> tuple[Segment, ...]:
    """Segments of the concave upper bounding curve F(u) = 1 - L(1 - u)."""
    return tuple(reversed(curve.segments))


def _canonically_equal(a: LorenzCurve, b: LorenzCurve, tol: float = SLOPE_MERGE_TOL) -> bool:
    if len(a.segments) != len(b.segments):
        return False
    if abs(a.singular_p - b.singular_p) > tol:
        return False
    return all(
        abs(wa - wb) <= tol and abs(sa - sb) <= tol
        for (wa, sa), (wb, sb) in zip(a.segments, b.segments)
    )


def compare(a: LorenzCurve, b: LorenzCurve) -> OrderingRelation:
    """Pointwise order of two curves sharing a reference measure.

    LESS means a's curve lies (weakly) above b's everywhere, i.e. a precedes
    b in the Markov ordering.  Both functions are piecewise linear, so their
    difference is piecewise linear with breakpoints in the union of the two
    breakpoint sets; checking the sign there decides the order everywhere.
    """
    if _canonically_equal(a, b):
        return OrderingRelation.EQUAL
    above = below = True
    for u in sorted({*a.breakpoints(), *b.breakpoints()}):
        d = a.evaluate(u) - b.evaluate(u)
        if d < -_POINTWISE_EPS:
            above = False
        if d > _POINTWISE_EPS:
            below = False
    if above and below:
        return OrderingRelation.EQUAL
    if above:
        return OrderingRelation.LESS
    if below:
        return OrderingRelation.GREATER
    return OrderingRelation.INCOMPARABLE


def is_rearrangement(x: DensityPair, y: DensityPair) -> bool:
    """True iff the pairs induce identical canonical curves."""
    return compare(build_curve(x), build_curve(y)) == OrderingRelation.EQUAL


def divergence_from_curve(curve: LorenzCurve, alpha: float) -> DivergenceResult:
    """Order-alpha divergence read off the curve geometry.

    For finite alpha not equal to 1 the value is log(sum w * s^alpha)/(alpha-1)
    over the segments; the singular mass contributes nothing below order 1 and
    forces +inf above it.
    """
    alpha = _check_order(alpha)
    singular = curve.singular_p
    if alpha == 0.0:
        covered = sum(w for w, s in curve.segments if s > 0.0)
        if covered <= 0.0:
            return DivergenceResult(alpha, math.inf)
        return DivergenceResult(alpha, clamp_nonneg(-math.log(covered)))
    if alpha == math.inf:
        if singular > 0.0:
            return DivergenceResult(alpha, math.inf)
        return DivergenceResult(alpha, clamp_nonneg(math.log(curve.segments[-1].slope)))
    if abs(alpha - 1.0) < ALPHA_ONE_WINDOW:
        if singular > 0.0:
            return DivergenceResult(alpha, math.inf)
        total = sum(w * s * math.log(s) for w, s in curve.segments if s > 0.0)
        return DivergenceResult(alpha, clamp_nonneg(total))
    if alpha > 1.0 and singular > 0.0:
        return DivergenceResult(alpha, math.inf)
    logs = [math.log(w) + alpha * math.log(s) for w, s in curve.segments if s > 0.0]
    if not logs:
        return DivergenceResult(alpha, math.inf)
    if max(abs(l) for l in logs) <= LOG_SHIFT_THRESHOLD:
        log_sum = math.log(sum(w * s**alpha for w, s in curve.segments if s > 0.0))
    else:
        log_sum = log_sum_exp(logs)
    return DivergenceResult(alpha, clamp_nonneg(log_sum / (alpha - 1.0)))


def curve_csv(curve: LorenzCurve, precision: int = 12) -> str:
    """CSV of the curve's breakpoints, one "u,L(u)" row per vertex."""
    lines = ["u,L(u)"]
    for u, y in curve.vertices():
        lines.append(f"{u:.{precision}g},{y:.{precision}g}")
    return "\n".join(lines) + "\n"
