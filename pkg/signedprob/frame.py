"""
Frame module for the signed probability toolkit.

This module provides observation frames given by ensemble partitions,
observed probability tables on the parts of those partitions, the
common refinement and fat-outcome normalization, and automorphisms of
observation spaces.

The coobservable collection CO is never stored. A set of events is
coobservable exactly when one ensemble's Boolean algebra (the unions of
its partition parts) contains all of them.
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from sortedcontainers import SortedSet
from typing_extensions import TypeAlias

from signedprob.errors import (
    CapExceededError,
    FrameValidationError,
    NotObservableError,
    SpaceMismatchError,
)
from signedprob.scalar import ONE, ZERO, Scalar, format_scalar, scalar_sum
from signedprob.space import Event, SampleSpace

logger = logging.getLogger(__name__)

# 자기동형 전수 탐색이 허용되는 최대 표본 공간 크기
DEFAULT_AUTOMORPHISM_CAP = 10
# 앙상블 대수(2^parts 개 사건)를 나열할 때의 파트 수 상한
MAX_ENSEMBLE_PARTS = 16
# 명시적 순열로 생성하는 군의 최대 크기
MAX_GROUP_ORDER = 40320

Permutation: TypeAlias = Tuple[int, ...]


@dataclass(frozen=True)
class Partition:
    """
    Candidate partition of a sample space into events.

    The invariants (nonempty, pairwise disjoint, covering parts) are
    checked by violations() rather than on construction, so invalid
    partitions read from files can still be reported.

    Attributes:
        space: The sample space
        parts: The parts in their given order
    """

    space: SampleSpace
    parts: Tuple[Event, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))

    def violations(self) -> List[str]:
        """
        List broken partition invariants, first violation first.

        Returns:
            Empty list if the partition is valid
        """
        problems = []
        covered = 0
        for i, part in enumerate(self.parts):
            if part.space != self.space:
                problems.append(f"part {i} belongs to another sample space")
                continue
            if part.is_empty():
                problems.append(f"part {i} is empty")
            overlap = covered & part.mask
            if overlap:
                shared = Event(self.space, overlap)
                problems.append(f"part {i} {part} overlaps earlier parts in {shared}")
            covered |= part.mask
        missing = self.space.full().mask & ~covered
        if missing:
            problems.append(f"outcomes {Event(self.space, missing)} are not covered")
        return problems

    def key(self) -> frozenset:
        """Order independent identity of the partition."""
        return frozenset(part.mask for part in self.parts)

    def part_of(self) -> Tuple[int, ...]:
        """Map each outcome index to the index of the part containing it."""
        owner = [-1] * self.space.size
        for p, part in enumerate(self.parts):
            for i in part.members:
                owner[i] = p
        return tuple(owner)

    def contains(self, e: Event) -> bool:
        """
        Check whether e is a union of parts, i.e. a member of the
        ensemble's Boolean algebra.

        Raises:
            SpaceMismatchError: If e is over another space
        """
        if e.space != self.space:
            raise SpaceMismatchError("event and partition belong to different sample spaces")
        return all((part.mask & e.mask) in (0, part.mask) for part in self.parts)

    def refines(self, other: "Partition") -> bool:
        """True iff every part of self lies inside some part of other."""
        return all(any(part.mask & ~big.mask == 0 for big in other.parts) for part in self.parts)

    def algebra(self) -> Iterator[Tuple[int, Event]]:
        """
        Enumerate the Boolean algebra generated by the parts.

        Yields:
            (selector, event) pairs, where bit p of selector marks part p

        Raises:
            CapExceededError: If there are more than MAX_ENSEMBLE_PARTS parts
        """
        if len(self.parts) > MAX_ENSEMBLE_PARTS:
            raise CapExceededError(
                f"{len(self.parts)} parts exceed the enumeration cap of {MAX_ENSEMBLE_PARTS}")
        for selector in range(1 << len(self.parts)):
            mask = 0
            for p, part in enumerate(self.parts):
                if selector >> p & 1:
                    mask |= part.mask
            yield selector, Event(self.space, mask)


@dataclass(frozen=True)
class Ensemble:
    name: str
    partition: Partition


@dataclass(frozen=True)
class Frame:
    """
    Observation frame given by its table of ensemble partitions.

    Attributes:
        space: The sample space
        ensembles: Named ensemble partitions
    """

    space: SampleSpace
    ensembles: Tuple[Ensemble, ...]

    def __post_init__(self):
        object.__setattr__(self, "ensembles", tuple(self.ensembles))

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(ens.name for ens in self.ensembles)

    @property
    def partitions(self) -> Tuple[Partition, ...]:
        return tuple(ens.partition for ens in self.ensembles)

    def ensemble(self, name: str) -> Ensemble:
        for ens in self.ensembles:
            if ens.name == name:
                return ens
        raise KeyError(f"unknown ensemble {name!r}")

    def index_of(self, name: str) -> int:
        return self.names.index(name)


@dataclass
class FrameReport:
    """Outcome of validate_frame."""

    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Optional[str]:
        return self.violations[0] if self.violations else None


def validate_frame(f: Frame) -> FrameReport:
    """
    Validate a frame: every ensemble partition must be a partition of the
    frame's space, names must be distinct and partitions must not repeat.

    The coobservability conditions need no check, they hold for partition generated frames.

    Args:
        f: The frame to validate

    Returns:
        FrameReport listing violations in order
    """
    report = FrameReport()
    if not f.ensembles:
        report.violations.append("frame has no ensembles")
    seen_names = set()
    seen_keys: Dict[frozenset, str] = {}
    for ens in f.ensembles:
        if not ens.name:
            report.violations.append("ensemble with an empty name")
        elif ens.name in seen_names:
            report.violations.append(f"duplicate ensemble name {ens.name!r}")
        seen_names.add(ens.name)
        if ens.partition.space != f.space:
            report.violations.append(f"ensemble {ens.name!r} partitions another sample space")
            continue
        for problem in ens.partition.violations():
            report.violations.append(f"ensemble {ens.name!r}: {problem}")
        key = ens.partition.key()
        if key in seen_keys:
            report.violations.append(
                f"ensemble {ens.name!r} repeats the partition of ensemble {seen_keys[key]!r}")
        else:
            seen_keys[key] = ens.name
    if report.violations:
        logger.info(f"Frame validation failed: {report.first}")
    return report


def ensure_valid_frame(f: Frame) -> None:
    """
    Raises:
        FrameValidationError: If validate_frame reports any violation
    """
    report = validate_frame(f)
    if not report.ok:
        raise FrameValidationError(report.violations)


def _check_space(f: Frame, e: Event) -> None:
    if e.space != f.space:
        raise SpaceMismatchError("event does not belong to the frame's sample space")


def is_observable(f: Frame, e: Event) -> bool:
    """True iff e is a union of parts of some ensemble partition."""
    _check_space(f, e)
    return any(ens.partition.contains(e) for ens in f.ensembles)


def is_coobservable(f: Frame, es: Iterable[Event]) -> bool:
    """True iff a single ensemble algebra contains every event in es."""
    events = list(es)
    for e in events:
        _check_space(f, e)
    if not events:
        return True
    return any(all(ens.partition.contains(e) for e in events) for ens in f.ensembles)


def common_refinement(f: Frame) -> Partition:
    """
    Least common refinement of all ensemble partitions.

    Parts are the nonempty intersections of one part per ensemble, listed
    in order of their first outcome.
    """
    owners = [ens.partition.part_of() for ens in f.ensembles]
    groups: Dict[Tuple[int, ...], int] = {}
    for i in range(f.space.size):
        signature = tuple(owner[i] for owner in owners)
        groups[signature] = groups.get(signature, 0) | 1 << i
    return Partition(f.space, tuple(Event(f.space, mask) for mask in groups.values()))


def is_normalized(f: Frame) -> bool:
    """True iff every part of the common refinement is a single outcome."""
    return all(len(part) == 1 for part in common_refinement(f).parts)


@dataclass(frozen=True)
class ObservedDistribution:
    """
    Observed probabilities: one scalar per part of every ensemble.

    Attributes:
        frame: The observation frame
        table: table[k][j] is the probability of part j of ensemble k
    """

    frame: Frame
    table: Tuple[Tuple[Scalar, ...], ...]

    def __post_init__(self):
        table = tuple(tuple(Scalar.of(p) for p in row) for row in self.table)
        object.__setattr__(self, "table", table)
        if len(table) != len(self.frame.ensembles):
            raise ValueError(
                f"table has {len(table)} rows for {len(self.frame.ensembles)} ensembles")
        for ens, row in zip(self.frame.ensembles, table):
            if len(row) != len(ens.partition.parts):
                raise ValueError(
                    f"ensemble {ens.name!r} has {len(ens.partition.parts)} parts "
                    f"but {len(row)} probabilities")

    def rows(self) -> Iterator[Tuple[Ensemble, Event, Scalar]]:
        """Iterate (ensemble, part, probability) over the whole table."""
        for ens, row in zip(self.frame.ensembles, self.table):
            for part, p in zip(ens.partition.parts, row):
                yield ens, part, p


def _algebra_probs(partition: Partition, row: Sequence[Scalar]) -> Iterator[Tuple[Event, Scalar]]:
    for selector, event in partition.algebra():
        total = scalar_sum(row[p] for p in range(len(row)) if selector >> p & 1)
        yield event, total


def validate_observed(obs: ObservedDistribution) -> List[str]:
    """
    Check the observed table: nonnegative parts summing to 1 in every ensemble and
    agreement between ensembles on every event they share.

    Args:
        obs: The observed distribution; its frame must be valid

    Returns:
        Violations naming the offending ensemble, empty when valid

    Raises:
        CapExceededError: If an ensemble has more than MAX_ENSEMBLE_PARTS parts
    """
    problems = []
    frame = obs.frame
    for ens, row in zip(frame.ensembles, obs.table):
        for part, p in zip(ens.partition.parts, row):
            if p < ZERO:
                problems.append(
                    f"ensemble {ens.name!r}: part {part} has negative probability {format_scalar(p)}")
        total = scalar_sum(row)
        if total != ONE:
            problems.append(f"ensemble {ens.name!r}: probabilities sum to {format_scalar(total)}, not 1")
    if problems:
        return problems

    # 두 앙상블 모두에 속하는 사건은 같은 확률을 가져야 함
    for (k1, e1), (k2, e2) in itertools.combinations(enumerate(frame.ensembles), 2):
        small, other = (k1, k2) if len(e1.partition.parts) <= len(e2.partition.parts) else (k2, k1)
        small_part = frame.ensembles[small].partition
        other_part = frame.ensembles[other].partition
        for event, p_small in _algebra_probs(small_part, obs.table[small]):
            if not other_part.contains(event):
                continue
            p_other = scalar_sum(
                p for part, p in zip(other_part.parts, obs.table[other])
                if part.mask & ~event.mask == 0)
            if p_small != p_other:
                p1, p2 = (p_small, p_other) if small == k1 else (p_other, p_small)
                problems.append(
                    f"ensembles {e1.name!r} and {e2.name!r} disagree on {event}: "
                    f"{format_scalar(p1)} vs {format_scalar(p2)}")
                break
    return problems


def ensure_valid(obs: ObservedDistribution) -> None:
    """
    Validate a frame together with its observed table.

    Raises:
        FrameValidationError: On the first failing check, with all violations found
    """
    ensure_valid_frame(obs.frame)
    problems = validate_observed(obs)
    if problems:
        logger.error(f"Observed distribution is invalid: {problems[0]}")
        raise FrameValidationError(problems)


def observed_prob(obs: ObservedDistribution, e: Event) -> Scalar:
    """
    Probability of an observable event under the observed table.

    Raises:
        NotObservableError: If no ensemble algebra contains e
    """
    _check_space(obs.frame, e)
    for ens, row in zip(obs.frame.ensembles, obs.table):
        if ens.partition.contains(e):
            return scalar_sum(p for part, p in zip(ens.partition.parts, row)
                              if part.mask & ~e.mask == 0)
    raise NotObservableError(f"event {e} is not observable")


def normalize_fat_outcomes(f: Frame, obs: ObservedDistribution) -> Tuple[Frame, ObservedDistribution]:
    """
    Merge the outcomes inside each part of the common refinement.

    Merged outcomes are labelled by their sorted labels joined with "+".
    Already normalized inputs are returned unchanged.

    Args:
        f: The frame
        obs: Observed table over f

    Returns:
        (frame, observed) satisfying the fat-outcomes proviso

    Raises:
        FrameValidationError: If a merged label equals another outcome's label
    """
    refinement = common_refinement(f)
    if all(len(part) == 1 for part in refinement.parts):
        return f, obs

    labels = []
    new_index = [0] * f.space.size
    for k, part in enumerate(refinement.parts):
        labels.append("+".join(sorted(part.labels)))
        for i in part.members:
            new_index[i] = k
    clashes = [label for label in dict.fromkeys(labels) if labels.count(label) > 1]
    if clashes:
        raise FrameValidationError([
            f"merged outcome label {label!r} collides with an existing outcome label"
            for label in clashes])
    space = SampleSpace(tuple(labels))
    logger.info(f"Merged {f.space.size} outcomes into {space.size} by the common refinement")

    def remap(e: Event) -> Event:
        return space.event_of(sorted({new_index[i] for i in e.members}))

    ensembles = tuple(
        Ensemble(ens.name, Partition(space, tuple(remap(part) for part in ens.partition.parts)))
        for ens in f.ensembles)
    frame = Frame(space, ensembles)
    return frame, ObservedDistribution(frame, obs.table)


# --- permutations and automorphisms --------------------------------------

def check_permutation(perm: Sequence[int], n: int) -> Permutation:
    """
    Raises:
        ValueError: If perm is not a bijection of range(n)
    """
    perm = tuple(perm)
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of {n} outcomes")
    return perm


def identity(n: int) -> Permutation:
    return tuple(range(n))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """The permutation i -> p[q[i]]."""
    return tuple(p[i] for i in q)


def inverse(p: Permutation) -> Permutation:
    result = [0] * len(p)
    for i, image in enumerate(p):
        result[image] = i
    return tuple(result)


def apply_permutation(perm: Permutation, e: Event) -> Event:
    """Image g(e) of an event."""
    mask = 0
    for i in e.members:
        mask |= 1 << perm[i]
    return Event(e.space, mask)


def automorphism_violation(f: Frame, obs: ObservedDistribution, perm: Sequence[int]) -> Optional[str]:
    """
    Explain why perm is not an automorphism of the observation space.

    perm is an automorphism when it maps every ensemble partition onto
    some ensemble partition and every part onto a part of the same
    probability.

    Returns:
        None for an automorphism, otherwise a message naming the ensemble

    Raises:
        ValueError: If perm is not a bijection of the outcomes
    """
    perm = check_permutation(perm, f.space.size)
    by_key = {ens.partition.key(): k for k, ens in enumerate(f.ensembles)}
    for k, ens in enumerate(f.ensembles):
        images = [apply_permutation(perm, part) for part in ens.partition.parts]
        target = by_key.get(frozenset(image.mask for image in images))
        if target is None:
            return f"ensemble {ens.name!r} is not mapped onto an ensemble partition"
        target_ens = f.ensembles[target]
        target_probs = {part.mask: p for part, p in zip(target_ens.partition.parts, obs.table[target])}
        for part, image, p in zip(ens.partition.parts, images, obs.table[k]):
            if target_probs[image.mask] != p:
                return (f"ensemble {ens.name!r}: part {part} has probability {format_scalar(p)} "
                        f"but its image {image} in ensemble {target_ens.name!r} has "
                        f"{format_scalar(target_probs[image.mask])}")
    return None


def is_automorphism(f: Frame, obs: ObservedDistribution, perm: Sequence[int]) -> bool:
    return automorphism_violation(f, obs, perm) is None


def is_group(perms: Iterable[Permutation]) -> bool:
    """Check identity, closure under composition and inverses."""
    group = set(perms)
    if not group:
        return False
    n = len(next(iter(group)))
    if identity(n) not in group:
        return False
    for p in group:
        if inverse(p) not in group:
            return False
        for q in group:
            if compose(p, q) not in group:
                return False
    return True


def generate_group(generators: Iterable[Sequence[int]], n: int,
                   max_order: int = MAX_GROUP_ORDER) -> SortedSet:
    """
    Close a set of permutations under composition.

    Args:
        generators: Permutations of range(n)
        n: Number of outcomes
        max_order: Largest group accepted

    Returns:
        SortedSet of all group elements, identity first

    Raises:
        CapExceededError: If the generated group grows beyond max_order
    """
    gens = [check_permutation(g, n) for g in generators]
    group = SortedSet([identity(n)])
    queue = deque([identity(n)])
    while queue:
        current = queue.popleft()
        for g in gens:
            product = compose(g, current)
            if product not in group:
                group.add(product)
                if len(group) > max_order:
                    raise CapExceededError(f"generated group exceeds {max_order} elements")
                queue.append(product)
    return group


def _outcome_signatures(f: Frame, obs: ObservedDistribution) -> List[Tuple[Scalar, ...]]:
    owners = [ens.partition.part_of() for ens in f.ensembles]
    return [tuple(sorted(obs.table[k][owners[k][i]] for k in range(len(owners))))
            for i in range(f.space.size)]


def enumerate_automorphisms(f: Frame, obs: ObservedDistribution,
                            cap: int = DEFAULT_AUTOMORPHISM_CAP) -> SortedSet:
    """
    Enumerate every automorphism of a small observation space.

    An automorphism maps each outcome to an outcome lying in parts with
    the same multiset of probabilities, so candidates are searched only
    among permutations preserving that signature.

    Args:
        f: The frame
        obs: Observed table over f
        cap: Largest sample space accepted

    Returns:
        SortedSet of permutations forming a group

    Raises:
        CapExceededError: If the space has more than cap outcomes
    """
    n = f.space.size
    if n > cap:
        raise CapExceededError(f"{n} outcomes exceed the automorphism cap of {cap}")

    classes: Dict[Tuple[Scalar, ...], List[int]] = {}
    for i, signature in enumerate(_outcome_signatures(f, obs)):
        classes.setdefault(signature, []).append(i)
    blocks = list(classes.values())

    group = SortedSet()
    checked = 0
    for images in itertools.product(*(itertools.permutations(block) for block in blocks)):
        perm = [0] * n
        for block, image in zip(blocks, images):
            for i, j in zip(block, image):
                perm[i] = j
        checked += 1
        if is_automorphism(f, obs, perm):
            group.add(tuple(perm))
    logger.info(f"Checked {checked} candidate permutations, found {len(group)} automorphisms")
    if not is_group(group):
        raise RuntimeError("enumerated automorphisms do not form a group")
    return group
