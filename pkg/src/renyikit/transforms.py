"""Channels (Markov operators), partition coarsening, and additivity checks."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .measures import Atom, DensityPair, ValidationError, product
from .renyi import DivergenceResult, renyi_divergence

ROW_SUM_TOL = 1e-9


@dataclass(frozen=True)
class Channel:
    """Row-stochastic matrix: rows are input atoms, columns output atoms."""

    input_labels: tuple[str, ...]
    output_labels: tuple[str, ...]
    matrix: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        inputs = tuple(str(l) for l in self.input_labels)
        outputs = tuple(str(l) for l in self.output_labels)
        rows = tuple(tuple(float(v) for v in row) for row in self.matrix)
        if len(set(inputs)) != len(inputs) or len(set(outputs)) != len(outputs):
            raise ValidationError("channel labels must be distinct")
        if len(rows) != len(inputs):
            raise ValidationError("one matrix row per input atom required")
        for label, row in zip(inputs, rows):
            if len(row) != len(outputs):
                raise ValidationError(f"row {label!r} has {len(row)} entries, want {len(outputs)}")
            if any(v < 0.0 for v in row):
                raise ValidationError(f"row {label!r} has a negative entry")
            if abs(sum(row) - 1.0) > ROW_SUM_TOL:
                raise ValidationError(f"row {label!r} sums to {sum(row)!r}, not 1")
        object.__setattr__(self, "input_labels", inputs)
        object.__setattr__(self, "output_labels", outputs)
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def identity(cls, labels) -> "Channel":
        labels = tuple(labels)
        n = len(labels)
        rows = tuple(tuple(1.0 if i == j else 0.0 for j in range(n)) for i in range(n))
        return cls(labels, labels, rows)

    def as_array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=float)

    def compose(self, other: "Channel") -> "Channel":
        """The channel equivalent to feeding this channel's output into ``other``."""
        if self.output_labels != other.input_labels:
            raise ValidationError("channel composition: output/input labels do not match")
        m = self.as_array() @ other.as_array()
        return Channel(self.input_labels, other.output_labels, tuple(map(tuple, m)))

    def is_doubly_stochastic(self, tol: float = ROW_SUM_TOL) -> bool:
        m = self.as_array()
        return bool(
            m.shape[0] == m.shape[1]
            and np.all(np.abs(m.sum(axis=0) - 1.0) <= tol)
            and np.all(np.abs(m.sum(axis=1) - 1.0) <= tol)
        )


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty label blocks; canonical order is by smallest member."""

    blocks: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(sorted(str(l) for l in b)) for b in self.blocks)
        if not blocks or any(not b for b in blocks):
            raise ValidationError("partition blocks must be nonempty")
        flat = [l for b in blocks for l in b]
        if len(set(flat)) != len(flat):
            raise ValidationError("partition blocks must be disjoint")
        object.__setattr__(self, "blocks", tuple(sorted(blocks, key=lambda b: b[0])))

    def members(self) -> frozenset[str]:
        return frozenset(l for b in self.blocks for l in b)

    def block_label(self, block: tuple[str, ...]) -> str:
        return "+".join(block)

    @classmethod
    def singletons(cls, labels) -> "Partition":
        return cls(tuple((l,) for l in labels))

    @classmethod
    def single_block(cls, labels) -> "Partition":
        return cls((tuple(labels),))


def apply(channel: Channel, pair: DensityPair) -> DensityPair:
    """Push both densities through the channel: p' = p^T M, q' = q^T M."""
    if channel.input_labels != pair.labels():
        raise ValidationError("channel input labels do not match the pair's atoms")
    m = channel.as_array()
    p_out = np.array(pair.p_weights()) @ m
    q_out = np.array(pair.q_weights()) @ m
    return DensityPair(
        tuple(Atom(l, float(p), float(q)) for l, p, q in zip(channel.output_labels, p_out, q_out))
    )


def partition_channel(partition: Partition, input_labels) -> Channel:
    """The deterministic 0/1 channel that merges each block into one atom."""
    input_labels = tuple(input_labels)
    if partition.members() != set(input_labels):
        raise ValidationError("partition does not cover the support exactly")
    outputs = tuple(partition.block_label(b) for b in partition.blocks)
    membership = {l: j for j, b in enumerate(partition.blocks) for l in b}
    rows = tuple(
        tuple(1.0 if membership[l] == j else 0.0 for j in range(len(outputs)))
        for l in input_labels
    )
    return Channel(input_labels, outputs, rows)


def coarsen(pair: DensityPair, partition: Partition) -> DensityPair:
    """Merge the pair's atoms along the partition blocks."""
    return apply(partition_channel(partition, pair.labels()), pair)


def refines(finer: Partition, coarser: Partition) -> bool:
    """True iff every block of ``finer`` is contained in a block of ``coarser``."""
    coarse_sets = [set(b) for b in coarser.blocks]
    return all(any(set(b) <= c for c in coarse_sets) for b in finer.blocks)


def partition_sweep(pair: DensityPair, chain, alpha: float) -> list[DivergenceResult]:
    """Divergences along a coarse-to-fine partition chain.

    Each partition must refine the previous one; the values are nondecreasing
    and reach the pair's full divergence at the singleton partition.
    """
    chain = list(chain)
    for prev, nxt in zip(chain, chain[1:]):
        if not refines(nxt, prev):
            raise ValidationError("partition chain is not refining")
    return [renyi_divergence(coarsen(pair, part), alpha) for part in chain]


def additivity_check(pairs, alpha: float, max_pairs: int = 6) -> tuple[float, float]:
    """(sum of the divergences, divergence of the product pair)."""
    pairs = list(pairs)
    if not pairs:
        raise ValidationError("additivity check needs at least one pair")
    if len(pairs) > max_pairs:
        raise ValidationError(f"additivity check limited to {max_pairs} pairs")
    total = sum(renyi_divergence(p, alpha).value for p in pairs)
    joint = renyi_divergence(reduce(product, pairs), alpha).value
    return total, joint


def random_channel(input_labels, n_outputs: int, seed: int) -> Channel:
    """Seeded dense channel with rows drawn like random distributions."""
    input_labels = tuple(input_labels)
    if n_outputs < 1:
        raise ValidationError("n_outputs must be >= 1")
    rng = random.Random(seed)
    rows = []
    for _ in input_labels:
        draws = [rng.expovariate(1.0) for _ in range(n_outputs)]
        total = sum(draws)
        rows.append(tuple(d / total for d in draws))
    outputs = tuple(f"y{j:04d}" for j in range(n_outputs))
    return Channel(input_labels, outputs, tuple(rows))
