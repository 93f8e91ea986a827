"""Meet and join on Lorenz curves, class representatives, and T-transform synthesis.

Lattice elements are curves (classes of distributions sharing a curve);
distributions enter through ``build_curve`` and exit through
``representative``.  Envelope geometry runs in exact rational arithmetic on
the float vertex coordinates, so convexity of the results is exact and the
only rounding happens in the final conversion back to float segments.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .lorenz import LorenzCurve, OrderingRelation, Segment, build_curve, compare
from .measures import Atom, DensityPair, FiniteDistribution, ValidationError, make_pair
from .transforms import Channel

_FracPoint = tuple[Fraction, Fraction]


class NotMajorizedError(ValueError):
    """The source distribution does not majorize the target."""


def _frac_vertices(curve: LorenzCurve) -> list[_FracPoint]:
    """Exact vertex chain of the curve, with the final u pinned to exactly 1.

    Widths are floats summing to 1 only within tolerance; the last vertex is
    snapped so both curves share the domain [0, 1] exactly.
    """
    pts: list[_FracPoint] = [(Fraction(0), Fraction(0))]
    u = y = Fraction(0)
    for i, (w, s) in enumerate(curve.segments):
        u = Fraction(1) if i == len(curve.segments) - 1 else u + Fraction(w)
        y += Fraction(w) * Fraction(s)
        pts.append((u, y))
    return pts


def _frac_eval(pts: list[_FracPoint], u: Fraction) -> Fraction:
    for (u0, y0), (u1, y1) in zip(pts, pts[1:]):
        if u0 <= u <= u1:
            if u1 == u0:
                return y0
            return y0 + (y1 - y0) * (u - u0) / (u1 - u0)
    return pts[-1][1]


def _crossings(pa: list[_FracPoint], pb: list[_FracPoint]) -> set[Fraction]:
    """u-coordinates where segments of the two chains cross transversally."""
    out: set[Fraction] = set()
    for (ua0, ya0), (ua1, ya1) in zip(pa, pa[1:]):
        sa = (ya1 - ya0) / (ua1 - ua0)
        for (ub0, yb0), (ub1, yb1) in zip(pb, pb[1:]):
            lo = max(ua0, ub0)
            hi = min(ua1, ub1)
            if lo >= hi:
                continue
            sb = (yb1 - yb0) / (ub1 - ub0)
            if sa == sb:
                continue
            # solve ya0 + sa (u - ua0) = yb0 + sb (u - ub0)
            u = (yb0 - sb * ub0 - ya0 + sa * ua0) / (sa - sb)
            if lo < u < hi:
                out.add(u)
    return out


def _curve_from_points(pts: list[_FracPoint]) -> LorenzCurve:
    """Convert an exact vertex chain back to a canonical float curve."""
    kept: list[_FracPoint] = []
    for pt in pts:
        while len(kept) >= 2:
            (u0, y0), (u1, y1) = kept[-2], kept[-1]
            cross = (u1 - u0) * (pt[1] - y0) - (y1 - y0) * (pt[0] - u0)
            if cross == 0:  # collinear middle vertex
                kept.pop()
            else:
                break
        kept.append(pt)
    segments = []
    for (u0, y0), (u1, y1) in zip(kept, kept[1:]):
        segments.append(Segment(float(u1 - u0), float((y1 - y0) / (u1 - u0))))
    singular = 1.0 - float(kept[-1][1])
    if singular < 1e-12:  # float-conversion wobble, not a real singular part
        singular = 0.0
    return LorenzCurve(tuple(segments), singular)


_SNAP = Fraction(1, 10**12)


def _envelope_points(a: LorenzCurve, b: LorenzCurve, pick) -> list[_FracPoint]:
    pa = _frac_vertices(a)
    pb = _frac_vertices(b)
    us = {u for u, _ in pa} | {u for u, _ in pb} | _crossings(pa, pb)
    # snap candidates closer than 1e-12 onto one point so float crossings of
    # nominally-coincident breakpoints cannot create sliver segments
    kept = [Fraction(0)]
    for u in sorted(us):
        if u - kept[-1] >= _SNAP and Fraction(1) - u >= _SNAP:
            kept.append(u)
    kept.append(Fraction(1))
    return [(u, pick(_frac_eval(pa, u), _frac_eval(pb, u))) for u in kept]


def meet(a: LorenzCurve, b: LorenzCurve) -> LorenzCurve:
    """Greatest lower bound: the pointwise max of the two convex curves."""
    return _curve_from_points(_envelope_points(a, b, max))


def join(a: LorenzCurve, b: LorenzCurve) -> LorenzCurve:
    """Least upper bound: the lower convex envelope of the pointwise min."""
    pts = _envelope_points(a, b, min)
    hull: list[_FracPoint] = []
    for pt in pts:
        while len(hull) >= 2:
            (u0, y0), (u1, y1) = hull[-2], hull[-1]
            cross = (u1 - u0) * (pt[1] - y0) - (y1 - y0) * (pt[0] - u0)
            if cross <= 0:  # reflex or collinear middle vertex
                hull.pop()
            else:
                break
        hull.append(pt)
    return _curve_from_points(hull)


def representative(curve: LorenzCurve) -> DensityPair:
    """A pair realizing the curve class: one atom per segment, q = width."""
    atoms = [
        Atom(f"s{i:04d}", w * s, w) for i, (w, s) in enumerate(curve.segments)
    ]
    if curve.singular_p > 0.0:
        atoms.append(Atom("sing", curve.singular_p, 0.0))
    return DensityPair(tuple(atoms))


def _t_transform_chain(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Doubly stochastic D with D @ xs = ys for descending-sorted xs majorizing ys.

    Classical constructive rule: pick the largest index j with z_j > y_j and
    the smallest k > j with z_k < y_k; mix the two coordinates just enough to
    pin one of them.  Each step equalizes at least one coordinate and keeps
    the working vector sorted, so at most n - 1 transforms are needed.
    """
    n = len(xs)
    d = np.eye(n)
    z = xs.astype(float).copy()
    for _ in range(max(n - 1, 1)):
        diffs = z - ys
        pos = np.nonzero(diffs > 1e-12)[0]
        neg = np.nonzero(diffs < -1e-12)[0]
        if len(pos) == 0 or len(neg) == 0:
            break
        j = int(pos[-1])
        after = neg[neg > j]
        if len(after) == 0:
            break
        k = int(after[0])
        delta = min(diffs[j], -diffs[k])
        lam = 1.0 - delta / (z[j] - z[k])
        t = np.eye(n)
        t[j, j] = t[k, k] = lam
        t[j, k] = t[k, j] = 1.0 - lam
        if diffs[j] <= -diffs[k]:
            z[k] += diffs[j]
            z[j] = ys[j]
        else:
            z[j] += diffs[k]
            z[k] = ys[k]
        d = t @ d
    return d


def construct_markov_operator(
    p2: FiniteDistribution, p1: FiniteDistribution, tol: float = 1e-9
) -> Channel:
    """Doubly stochastic channel mapping p2 to p1, for a uniform reference.

    Requires p1 to be majorized by p2 (curves w.r.t. the uniform measure
    compare LESS or EQUAL); raises NotMajorizedError otherwise.  The result is
    a product of at most n - 1 T-transforms composed with permutations.
    """
    if p1.labels != p2.labels:
        raise ValidationError("distributions must share the same support")
    labels = p1.labels
    uniform = FiniteDistribution.uniform(labels)
    rel = compare(build_curve(make_pair(p1, uniform)), build_curve(make_pair(p2, uniform)))
    if rel not in (OrderingRelation.LESS, OrderingRelation.EQUAL):
        raise NotMajorizedError("NOT_MAJORIZED: p1 is not majorized by p2")
    x = np.array(p2.weights, dtype=float)
    y = np.array(p1.weights, dtype=float)
    n = len(labels)
    order_x = np.argsort(-x, kind="stable")
    order_y = np.argsort(-y, kind="stable")
    d = _t_transform_chain(x[order_x], y[order_y])
    r = np.zeros((n, n))
    r[np.arange(n), order_x] = 1.0
    s = np.zeros((n, n))
    s[np.arange(n), order_y] = 1.0
    m = s.T @ d @ r
    if not np.allclose(m @ x, y, atol=tol):
        raise NotMajorizedError("NOT_MAJORIZED: T-transform chain could not reach p1")
    # m acts on column vectors; a Channel acts by p' = p^T K, so store the transpose
    return Channel(labels, labels, tuple(map(tuple, m.T)))
