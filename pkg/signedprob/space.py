"""
Space module for the signed probability toolkit.

This module provides finite sample spaces, events over them and signed
probability distributions stored pointwise on outcomes. Event
probability is the sum of member weights, so finite additivity holds by
construction and only normalization has to be checked.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

from signedprob.errors import CapExceededError, DistributionError, SpaceMismatchError
from signedprob.scalar import ONE, ZERO, Scalar, ScalarLike, format_scalar, scalar_sum

logger = logging.getLogger(__name__)

# 모든 사건(2^n 개)을 나열하는 검사의 상한
MAX_EXHAUSTIVE_OUTCOMES = 12


@dataclass(frozen=True)
class SampleSpace:
    """
    Finite ordered set of outcome labels.

    Attributes:
        labels: Pairwise distinct outcome labels, at least one
    """

    labels: Tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise ValueError("a sample space needs at least one outcome")
        if len(set(labels)) != len(labels):
            duplicates = sorted(label for label, count in Counter(labels).items() if count > 1)
            raise ValueError(f"duplicate outcome labels: {duplicates}")

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        """
        Get the index of an outcome label.

        Raises:
            KeyError: If the label is unknown
        """
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown outcome label {label!r}") from None

    def full(self) -> "Event":
        return Event(self, (1 << self.size) - 1)

    def empty(self) -> "Event":
        return Event(self, 0)

    def event(self, labels: Iterable[str]) -> "Event":
        """Build the event containing the given outcome labels."""
        mask = 0
        for label in labels:
            mask |= 1 << self.index(label)
        return Event(self, mask)

    def event_of(self, indices: Iterable[int]) -> "Event":
        """Build the event containing the given outcome indices."""
        mask = 0
        for i in indices:
            if not 0 <= i < self.size:
                raise IndexError(f"outcome index {i} out of range for {self.size} outcomes")
            mask |= 1 << i
        return Event(self, mask)

    def singleton(self, index: int) -> "Event":
        return self.event_of([index])


@dataclass(frozen=True)
class Event:
    """
    Subset of a sample space, stored as a bitmask over outcome indices.

    Attributes:
        space: The sample space the event lives in
        mask: Bit i is set iff outcome i is a member
    """

    space: SampleSpace
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.space.size:
            raise ValueError(f"event mask {self.mask:#x} exceeds {self.space.size} outcomes")

    @property
    def members(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.space.size) if self.mask >> i & 1)

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(self.space.labels[i] for i in self.members)

    def __contains__(self, index: int) -> bool:
        return bool(self.mask >> index & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def is_empty(self) -> bool:
        return self.mask == 0

    def _check(self, other: "Event") -> None:
        if self.space != other.space:
            raise SpaceMismatchError("events belong to different sample spaces")

    def complement(self) -> "Event":
        return Event(self.space, ((1 << self.space.size) - 1) & ~self.mask)

    def union(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.mask | other.mask)

    def intersection(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.mask & other.mask)

    def difference(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.mask & ~other.mask)

    def issubset(self, other: "Event") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def isdisjoint(self, other: "Event") -> bool:
        self._check(other)
        return self.mask & other.mask == 0

    __invert__ = complement
    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def __str__(self) -> str:
        return "{" + ",".join(self.labels) + "}"


def complement(e: Event) -> Event:
    return e.complement()


def union(e1: Event, e2: Event) -> Event:
    return e1.union(e2)


def intersection(e1: Event, e2: Event) -> Event:
    return e1.intersection(e2)


def difference(e1: Event, e2: Event) -> Event:
    return e1.difference(e2)


def all_events(space: SampleSpace) -> Iterator[Event]:
    """
    Enumerate every event of a small sample space in bitmask order.

    Raises:
        CapExceededError: If the space has more than MAX_EXHAUSTIVE_OUTCOMES outcomes
    """
    if space.size > MAX_EXHAUSTIVE_OUTCOMES:
        raise CapExceededError(
            f"{space.size} outcomes exceed the exhaustive cap of {MAX_EXHAUSTIVE_OUTCOMES}")
    for mask in range(1 << space.size):
        yield Event(space, mask)


@dataclass(frozen=True)
class SignedDistribution:
    """
    Signed probability distribution given by one weight per outcome.

    Attributes:
        space: The sample space
        weights: Outcome weights in outcome order; they sum to 1
    """

    space: SampleSpace
    weights: Tuple[Scalar, ...]

    def __post_init__(self):
        weights = tuple(Scalar.of(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if len(weights) != self.space.size:
            raise DistributionError(
                f"expected {self.space.size} weights, got {len(weights)}")
        total = scalar_sum(weights)
        if total != ONE:
            raise DistributionError(f"weights sum to {format_scalar(total)}, not 1")

    @classmethod
    def from_mapping(cls, space: SampleSpace, weights) -> "SignedDistribution":
        """Build a distribution from a label -> weight mapping covering every outcome."""
        missing = [label for label in space.labels if label not in weights]
        if missing:
            raise DistributionError(f"missing weights for outcomes {missing}")
        extra = [label for label in weights if label not in space.labels]
        if extra:
            raise DistributionError(f"weights for unknown outcomes {extra}")
        return cls(space, tuple(weights[label] for label in space.labels))

    def weight(self, label: str) -> Scalar:
        return self.weights[self.space.index(label)]

    def as_mapping(self):
        return dict(zip(self.space.labels, self.weights))


def prob(d: SignedDistribution, e: Event) -> Scalar:
    """
    Probability of an event as the sum of its member weights.

    Raises:
        SpaceMismatchError: If e is not over d's space
    """
    if e.space != d.space:
        raise SpaceMismatchError("event and distribution belong to different sample spaces")
    return scalar_sum(d.weights[i] for i in e.members)


def is_traditional(d: SignedDistribution) -> bool:
    """True iff every outcome weight is nonnegative."""
    return all(w >= ZERO for w in d.weights)


def is_test(d: SignedDistribution, parts: Sequence[Event]) -> bool:
    """
    Check whether parts form a test: a partition of the sample space into
    parts of nonnegative probability.

    Args:
        d: The signed distribution
        parts: Candidate partition

    Returns:
        True if parts are disjoint, cover the space and have probability >= 0
    """
    covered = 0
    for part in parts:
        if part.space != d.space:
            return False
        if covered & part.mask:
            return False
        covered |= part.mask
        if prob(d, part) < ZERO:
            return False
    return covered == d.space.full().mask


def nonnegative_event(d: SignedDistribution) -> Event:
    """The event of all outcomes with nonnegative weight."""
    return d.space.event_of(i for i, w in enumerate(d.weights) if w >= ZERO)


def negative_mass(d: Union[SignedDistribution, Sequence[ScalarLike]]) -> Scalar:
    """Total negative mass, the sum of max(0, -w) over the weights."""
    weights = d.weights if isinstance(d, SignedDistribution) else d
    return scalar_sum(-Scalar.of(w) for w in weights if Scalar.of(w) < ZERO)


def format_weights(d: SignedDistribution) -> List[str]:
    return [f"{label}: {format_scalar(w)}" for label, w in zip(d.space.labels, d.weights)]
