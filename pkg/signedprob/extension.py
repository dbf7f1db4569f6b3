"""
Extension module for the signed probability toolkit.

This module decides and constructs extensions of observed probabilities
to every event of the sample space: signed extensions by exact
elimination, traditional ones by the exact simplex, minimum negative
mass extensions, group averaging and the two-ensemble product.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from signedprob import linalg, simplex
from signedprob.errors import ExtensionError, InfeasibleSystemError, PreconditionError
from signedprob.frame import (
    Frame,
    ObservedDistribution,
    Permutation,
    automorphism_violation,
    is_group,
    is_normalized,
    normalize_fat_outcomes,
)
from signedprob.linalg import Vector
from signedprob.scalar import ONE, ZERO, Scalar, format_scalar, scalar_sum
from signedprob.space import Event, SampleSpace, SignedDistribution, negative_mass, prob

logger = logging.getLogger(__name__)

TOTAL_ROW = "total"


@dataclass(frozen=True)
class SystemRow:
    """
    One equation sum(coeffs[i] * q_i) = rhs.

    Attributes:
        coeffs: 0/1 indicator of the part over the outcomes
        rhs: Observed probability of the part
        label: "ensemble:{outcomes}" or "total"
    """

    coeffs: Tuple[Scalar, ...]
    rhs: Scalar
    label: str


@dataclass(frozen=True)
class LinearSystem:
    """
    Linear constraints on the outcome weights of an extension.

    Attributes:
        space: The sample space; one unknown per outcome
        rows: One row per ensemble part, the total row last
    """

    space: SampleSpace
    rows: Tuple[SystemRow, ...]

    @property
    def num_variables(self) -> int:
        return self.space.size

    @property
    def matrix(self) -> List[List[Scalar]]:
        return [list(row.coeffs) for row in self.rows]

    @property
    def rhs(self) -> List[Scalar]:
        return [row.rhs for row in self.rows]


class ExtensionStatus(str, Enum):
    INFEASIBLE = "infeasible"
    UNIQUE = "unique"
    FAMILY = "family"


@dataclass(frozen=True)
class ExtensionResult:
    """
    Answer to one extension question.

    Attributes:
        status: infeasible, unique or family
        witness: An extension, present unless infeasible
        nullspace: Basis of the homogeneous solutions of the system
        certificate: Farkas vector y with y^T A >= 0 and y^T b < 0 when infeasible
        negative_mass: Negative mass of the witness
        rank: Rank of the coefficient matrix
        pivots: Simplex pivots used, 0 for pure elimination
    """

    status: ExtensionStatus
    witness: Optional[SignedDistribution] = None
    nullspace: Tuple[Vector, ...] = ()
    certificate: Optional[Vector] = None
    negative_mass: Optional[Scalar] = None
    rank: Optional[int] = None
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.status != ExtensionStatus.INFEASIBLE


def build_system(f: Frame, obs: ObservedDistribution) -> LinearSystem:
    """
    Build the equations an extension must satisfy.

    Args:
        f: A normalized frame
        obs: Observed table over f

    Returns:
        LinearSystem with one row per ensemble part plus the total row

    Raises:
        PreconditionError: If the frame still has fat outcomes
    """
    if not is_normalized(f):
        logger.error("Cannot build a system over a frame with fat outcomes")
        raise PreconditionError("frame has fat outcomes; normalize it first")
    n = f.space.size
    rows = []
    for ens, part, p in obs.rows():
        coeffs = tuple(ONE if i in part else ZERO for i in range(n))
        rows.append(SystemRow(coeffs, p, f"{ens.name}:{part}"))
    rows.append(SystemRow(tuple([ONE] * n), ONE, TOTAL_ROW))
    logger.debug(f"Built {len(rows)} rows over {n} unknowns")
    return LinearSystem(f.space, tuple(rows))


def _distribution(space: SampleSpace, x: Sequence[Scalar]) -> SignedDistribution:
    return SignedDistribution(space, tuple(x))


def _status_for(rank: int, n: int) -> ExtensionStatus:
    return ExtensionStatus.UNIQUE if rank == n else ExtensionStatus.FAMILY


def solve_signed(sys: LinearSystem) -> ExtensionResult:
    """
    Find a signed extension by exact elimination.

    Free variables are set to zero, so the witness only depends on the
    outcome order. An inconsistent system yields a certificate y with
    y^T A = 0 and y^T b = -1.
    """
    n = sys.num_variables
    solved = linalg.solve(sys.matrix, sys.rhs, ncols=n)
    if not solved.consistent:
        certificate = tuple(-y for y in solved.left_certificate)
        logger.info("No signed extension exists")
        return ExtensionResult(ExtensionStatus.INFEASIBLE, certificate=certificate, rank=solved.rank)

    witness = _distribution(sys.space, solved.solution)
    status = _status_for(solved.rank, n)
    logger.info(f"Signed extension found: {status.value}, rank {solved.rank} of {n}")
    return ExtensionResult(status, witness, solved.nullspace, None,
                           negative_mass(witness), solved.rank)


def solve_traditional(sys: LinearSystem, max_pivots: int = simplex.DEFAULT_MAX_PIVOTS) -> ExtensionResult:
    """
    Find a nonnegative extension with the exact simplex.

    Args:
        sys: The system
        max_pivots: Simplex pivot budget

    Returns:
        ExtensionResult; infeasible results carry a Farkas certificate
    """
    n = sys.num_variables
    lp = simplex.find_feasible(sys.matrix, sys.rhs, ncols=n, max_pivots=max_pivots)
    reduced, pivots = linalg.rref(sys.matrix)
    rank = len(pivots)
    if not lp.feasible:
        logger.info(f"No traditional extension exists ({lp.pivots} pivots)")
        return ExtensionResult(ExtensionStatus.INFEASIBLE, certificate=lp.certificate,
                               rank=rank, pivots=lp.pivots)

    witness = _distribution(sys.space, lp.x)
    nullspace = tuple(linalg.nullspace_from_rref(reduced, pivots, n))
    return ExtensionResult(_status_for(rank, n), witness, nullspace, None, ZERO, rank, lp.pivots)


def minimize_negativity(sys: LinearSystem, max_pivots: int = simplex.DEFAULT_MAX_PIVOTS) -> ExtensionResult:
    """
    Find the extension of least negative mass.

    Weights are split as q = u - v with u, v >= 0 and sum(v) is minimized.

    Raises:
        InfeasibleSystemError: If there is no signed extension at all
    """
    n = sys.num_variables
    split = [list(row.coeffs) + [-c for c in row.coeffs] for row in sys.rows]
    cost = [ZERO] * n + [ONE] * n
    lp = simplex.solve_lp(split, sys.rhs, cost, ncols=2 * n, max_pivots=max_pivots)
    if lp.status != "optimal":
        logger.error("Minimum negativity requested for a system without signed extensions")
        raise InfeasibleSystemError("the system has no signed extension")

    x = tuple(lp.x[i] - lp.x[n + i] for i in range(n))
    witness = _distribution(sys.space, x)
    reduced, pivots = linalg.rref(sys.matrix)
    rank = len(pivots)
    mass = negative_mass(witness)
    logger.info(f"Minimum negative mass {format_scalar(mass)}")
    return ExtensionResult(_status_for(rank, n), witness,
                           tuple(linalg.nullspace_from_rref(reduced, pivots, n)),
                           None, mass, rank, lp.pivots)


def verify_witness(sys: LinearSystem, q: Union[SignedDistribution, Sequence[Scalar]]) -> List[str]:
    """List the rows a candidate weight vector fails to satisfy."""
    weights = q.weights if isinstance(q, SignedDistribution) else tuple(Scalar.of(v) for v in q)
    if len(weights) != sys.num_variables:
        return [f"expected {sys.num_variables} weights, got {len(weights)}"]
    violations = []
    for row in sys.rows:
        value = linalg.dot(row.coeffs, weights)
        if value != row.rhs:
            violations.append(f"row {row.label}: {format_scalar(value)} != {format_scalar(row.rhs)}")
    return violations


def verify_certificate(sys: LinearSystem, y: Sequence[Scalar]) -> List[str]:
    """
    Check a Farkas certificate: y^T A >= 0 in every column and y^T b < 0.

    Returns:
        Violations, empty for a valid certificate
    """
    if len(y) != len(sys.rows):
        return [f"expected {len(sys.rows)} multipliers, got {len(y)}"]
    violations = []
    matrix = sys.matrix
    for j, label in enumerate(sys.space.labels):
        column = linalg.dot(y, [row[j] for row in matrix])
        if column < ZERO:
            violations.append(f"column {label}: {format_scalar(column)} < 0")
    combined = linalg.dot(y, sys.rhs)
    if combined >= ZERO:
        violations.append(f"right hand side {format_scalar(combined)} is not negative")
    return violations


def verify_extension(f: Frame, obs: ObservedDistribution, d: SignedDistribution) -> List[str]:
    """List the observed parts whose probability d does not reproduce."""
    if d.space != f.space:
        return ["distribution and frame have different sample spaces"]
    violations = []
    for ens, part, p in obs.rows():
        value = prob(d, part)
        if value != p:
            violations.append(
                f"ensemble {ens.name!r} part {part}: {format_scalar(value)} != {format_scalar(p)}")
    return violations


def symmetrize(q: SignedDistribution, group: Iterable[Permutation], f: Frame,
               obs: ObservedDistribution) -> SignedDistribution:
    """
    Average an extension over a group of automorphisms.

    R(w) = (1/|G|) * sum over g of q(g(w)). Averaging over automorphisms
    maps extensions to extensions, which is checked again on the result.

    Args:
        q: An extension of obs
        group: Permutations forming a group of automorphisms
        f: The frame
        obs: Observed table over f

    Returns:
        The averaged extension R

    Raises:
        ExtensionError: If q is not an extension or the group check fails
    """
    problems = verify_extension(f, obs, q)
    if problems:
        logger.error(f"Input is not an extension: {problems[0]}")
        raise ExtensionError(f"input is not an extension: {problems[0]}")
    perms = [tuple(g) for g in group]
    if not is_group(perms):
        raise ExtensionError("the permutations do not form a group")
    for g in perms:
        try:
            reason = automorphism_violation(f, obs, g)
        except ValueError as e:
            raise ExtensionError(str(e)) from e
        if reason is not None:
            raise ExtensionError(f"not an automorphism: {reason}")

    order = Scalar(len(perms))
    weights = tuple(scalar_sum(q.weights[g[i]] for g in perms) / order for i in range(f.space.size))
    result = SignedDistribution(q.space, weights)

    problems = verify_extension(f, obs, result)
    if problems:
        raise ExtensionError(f"averaged distribution is not an extension: {problems[0]}")
    logger.info(f"Averaged over a group of order {len(perms)}")
    return result


def product_extension(f: Frame, obs: ObservedDistribution) -> SignedDistribution:
    """
    Traditional extension of a two-ensemble space by independence:
    the outcome A_i & B_j gets weight P(A_i) * P(B_j).

    Raises:
        PreconditionError: Wrong ensemble count, an empty intersection or
            an intersection of more than one outcome
    """
    if len(f.ensembles) != 2:
        raise PreconditionError(f"product construction needs 2 ensembles, got {len(f.ensembles)}")
    first, second = f.ensembles
    weights: List[Optional[Scalar]] = [None] * f.space.size
    for a, pa in zip(first.partition.parts, obs.table[0]):
        for b, pb in zip(second.partition.parts, obs.table[1]):
            cell = a & b
            if cell.is_empty():
                raise PreconditionError(f"parts {a} and {b} do not intersect")
            if len(cell) > 1:
                raise PreconditionError(f"intersection {cell} is a fat outcome; normalize first")
            weights[cell.members[0]] = pa * pb
    if any(w is None for w in weights):
        raise PreconditionError("the ensembles do not partition the sample space")
    return SignedDistribution(f.space, tuple(weights))


def forced_probability(sys: LinearSystem, e: Event) -> Optional[Tuple[Scalar, Vector]]:
    """
    Probability of e shared by every signed extension, if it is forced.

    The value is forced exactly when the indicator of e is a combination
    y of the rows; then P(e) = y^T b for every solution.

    Args:
        sys: The system
        e: Event over sys.space

    Returns:
        (value, row multipliers), or None if extensions disagree on e
    """
    n = sys.num_variables
    indicator = [ONE if i in e else ZERO for i in range(n)]
    transposed = linalg.transpose(sys.matrix, n)
    solved = linalg.solve(transposed, indicator, ncols=len(sys.rows))
    if not solved.consistent:
        return None
    value = linalg.dot(solved.solution, sys.rhs)
    return value, solved.solution


def possibilistic_obstruction(f: Frame, obs: ObservedDistribution) -> List[Tuple[str, Event]]:
    """
    Support argument against traditional extensions.

    An outcome is possible when every part containing it has positive
    probability. A traditional extension puts all its mass on possible
    outcomes, so a positive part without possible outcomes rules it out.

    Returns:
        (ensemble name, part) for every such part, in table order
    """
    possible = f.space.full().mask
    for _, part, p in obs.rows():
        if p <= ZERO:
            possible &= ~part.mask
    return [(ens.name, part) for ens, part, p in obs.rows()
            if p > ZERO and not part.mask & possible]


@dataclass(frozen=True)
class ExtensionReport:
    """
    Full answer to the extension problem of an observation space.

    Attributes:
        frame: The normalized frame
        observed: The observed table over the normalized frame
        merged: Whether fat outcomes had to be merged
        system: The linear system
        traditional: Answer for nonnegative extensions
        signed: Answer for signed extensions
        obstruction: Parts found by the support argument
    """

    frame: Frame
    observed: ObservedDistribution
    merged: bool
    system: LinearSystem
    traditional: ExtensionResult
    signed: ExtensionResult
    obstruction: Tuple[Tuple[str, Event], ...]


def solve_extension_problem(f: Frame, obs: ObservedDistribution) -> ExtensionReport:
    """Normalize fat outcomes, then decide traditional and signed extensions in turn."""
    frame, observed = normalize_fat_outcomes(f, obs)
    sys = build_system(frame, observed)
    traditional = solve_traditional(sys)
    signed = solve_signed(sys)
    if traditional.feasible and not signed.feasible:
        raise RuntimeError("traditional extension found but elimination reports none")
    return ExtensionReport(frame, observed, frame is not f, sys, traditional, signed,
                           tuple(possibilistic_obstruction(frame, observed)))
