"""Finite distributions and density pairs on a shared labeled support.

The dominating measure is the counting measure on the union support, so the
stored masses are the densities themselves.  All values are immutable after
construction and every operation is a pure function.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

NORMALIZATION_TOL = 1e-9


class ValidationError(ValueError):
    """A distribution, pair, or operation input failed its invariants."""


class Atom(NamedTuple):
    label: str
    p: float
    q: float


def _check_weight(label: str, w: float) -> float:
    w = float(w)
    if math.isnan(w) or math.isinf(w) or w < 0.0:
        raise ValidationError(f"atom {label!r}: invalid mass {w!r}")
    return w


@dataclass(frozen=True)
class FiniteDistribution:
    """Probability masses on a finite labeled support.

    Atoms are stored sorted by label so all downstream results are
    deterministic.  Weights must be nonnegative and sum to 1 within 1e-9;
    nothing is ever renormalized silently.
    """

    labels: tuple[str, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        labels = tuple(str(l) for l in self.labels)
        weights = tuple(_check_weight(l, w) for l, w in zip(labels, self.weights))
        if len(labels) != len(self.weights):
            raise ValidationError("labels and weights must have equal length")
        if len(set(labels)) != len(labels):
            raise ValidationError("duplicate labels in distribution")
        if not labels:
            raise ValidationError("distribution needs at least one atom")
        order = sorted(range(len(labels)), key=lambda i: labels[i])
        labels = tuple(labels[i] for i in order)
        weights = tuple(weights[i] for i in order)
        total = sum(weights)
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValidationError(f"weights sum to {total!r}, not 1 within {NORMALIZATION_TOL}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_mapping(cls, masses: Mapping[str, float]) -> "FiniteDistribution":
        items = sorted(masses.items())
        return cls(tuple(k for k, _ in items), tuple(v for _, v in items))

    @classmethod
    def uniform(cls, labels: Iterable[str]) -> "FiniteDistribution":
        labels = tuple(labels)
        return cls(labels, (1.0 / len(labels),) * len(labels))

    def as_mapping(self) -> dict[str, float]:
        return dict(zip(self.labels, self.weights))

    def weight(self, label: str) -> float:
        try:
            return self.weights[self.labels.index(label)]
        except ValueError:
            return 0.0

    def support(self) -> tuple[str, ...]:
        return tuple(l for l, w in zip(self.labels, self.weights) if w > 0.0)


@dataclass(frozen=True)
class DensityPair:
    """A (P, Q) pair of densities on a shared finite support.

    Atoms with p = q = 0 are pruned at construction; the Q-singular part is
    exactly the set of atoms with q = 0 and p > 0.
    """

    atoms: tuple[Atom, ...]

    def __post_init__(self):
        atoms = []
        for a in self.atoms:
            label, p, q = a
            p = _check_weight(label, p)
            q = _check_weight(label, q)
            if p == 0.0 and q == 0.0:
                continue
            atoms.append(Atom(str(label), p, q))
        atoms.sort(key=lambda a: a.label)
        if not atoms:
            raise ValidationError("pair needs at least one atom with positive mass")
        if len(set(a.label for a in atoms)) != len(atoms):
            raise ValidationError("duplicate labels in pair")
        for total, name in ((sum(a.p for a in atoms), "p"), (sum(a.q for a in atoms), "q")):
            if abs(total - 1.0) > NORMALIZATION_TOL:
                raise ValidationError(f"{name} masses sum to {total!r}, not 1 within {NORMALIZATION_TOL}")
        object.__setattr__(self, "atoms", tuple(atoms))

    def labels(self) -> tuple[str, ...]:
        return tuple(a.label for a in self.atoms)

    def p_weights(self) -> tuple[float, ...]:
        return tuple(a.p for a in self.atoms)

    def q_weights(self) -> tuple[float, ...]:
        return tuple(a.q for a in self.atoms)

    def singular_labels(self) -> tuple[str, ...]:
        """Labels of the Q-singular part (q = 0, p > 0)."""
        return tuple(a.label for a in self.atoms if a.q == 0.0)

    def singular_mass(self) -> float:
        """Total P-mass sitting where Q vanishes."""
        return sum(a.p for a in self.atoms if a.q == 0.0)

    def swap(self) -> "DensityPair":
        """The pair with the roles of P and Q exchanged."""
        return DensityPair(tuple(Atom(a.label, a.q, a.p) for a in self.atoms))


def make_pair(p: FiniteDistribution, q: FiniteDistribution) -> DensityPair:
    """Assemble a DensityPair on the union support, zero-filling missing atoms.

    Both marginals are preserved exactly; atoms carrying no mass on either
    side are pruned.
    """
    pm = p.as_mapping()
    qm = q.as_mapping()
    labels = sorted(set(pm) | set(qm))
    return DensityPair(tuple(Atom(l, pm.get(l, 0.0), qm.get(l, 0.0)) for l in labels))


def product(x: DensityPair, y: DensityPair) -> DensityPair:
    """Product pair on the cartesian support: masses multiply atomwise."""
    atoms = []
    for lx, px, qx in x.atoms:
        for ly, py, qy in y.atoms:
            atoms.append(Atom(f"({lx},{ly})", px * py, qx * qy))
    return DensityPair(tuple(atoms))


def random_pair(n_atoms: int, seed: int) -> DensityPair:
    """Deterministic full-support pair: normalized standard-exponential draws."""
    if n_atoms < 1:
        raise ValidationError("n_atoms must be >= 1")
    rng = random.Random(seed)
    draws_p = [rng.expovariate(1.0) for _ in range(n_atoms)]
    draws_q = [rng.expovariate(1.0) for _ in range(n_atoms)]
    total_p = sum(draws_p)
    total_q = sum(draws_q)
    width = max(4, len(str(n_atoms)))
    atoms = tuple(
        Atom(f"x{i:0{width}d}", draws_p[i] / total_p, draws_q[i] / total_q)
        for i in range(n_atoms)
    )
    return DensityPair(atoms)
