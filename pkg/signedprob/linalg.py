"""
Linear algebra module for the signed probability toolkit.

Exact Gauss-Jordan elimination over Q(sqrt2): reduced row echelon form,
rank, nullspace bases and consistent/inconsistent solving with a left
certificate for inconsistent systems.

The elimination itself runs on sympy's DomainMatrix over the algebraic
field QQ<sqrt(2)>; Scalars are converted at the boundary.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import QQ, sqrt
from sympy.polys.matrices import DomainMatrix

from signedprob.scalar import ONE, ZERO, Scalar, scalar_sum

logger = logging.getLogger(__name__)

Matrix = List[List[Scalar]]
Vector = Tuple[Scalar, ...]

# 원소 a + b*sqrt2 는 ANP([b, a]) 로 표현됨
FIELD = QQ.algebraic_field(sqrt(2))


def to_field(x: Scalar):
    x = Scalar.of(x)
    return FIELD([QQ(x.root2.numerator, x.root2.denominator),
                  QQ(x.rat.numerator, x.rat.denominator)])


def from_field(element) -> Scalar:
    coeffs = [Fraction(int(c.numerator), int(c.denominator)) for c in element.to_list()]
    if not coeffs:
        return ZERO
    if len(coeffs) == 1:
        return Scalar(coeffs[0])
    return Scalar(coeffs[1], coeffs[0])


def to_domain_matrix(rows: Sequence[Sequence[Scalar]], ncols: Optional[int] = None) -> DomainMatrix:
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return DomainMatrix.zeros((0, ncols), FIELD)
    elements = [[to_field(v) for v in row] for row in rows]
    return DomainMatrix(elements, (len(rows), ncols), FIELD, fmt="sparse")


def from_domain_matrix(matrix: DomainMatrix) -> Matrix:
    return [[from_field(v) for v in row] for row in matrix.to_list()]


def transpose(rows: Sequence[Sequence[Scalar]], ncols: Optional[int] = None) -> Matrix:
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return [[rows[i][j] for i in range(len(rows))] for j in range(ncols)]


def dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    return scalar_sum(a * b for a, b in zip(u, v) if a and b)


def rref(matrix: Sequence[Sequence[Scalar]], pivot_limit: Optional[int] = None) -> Tuple[Matrix, List[int]]:
    """
    Reduced row echelon form by Gauss-Jordan elimination.

    The reduced form is unique, so the result does not depend on how
    sympy chooses its pivots.

    Args:
        matrix: The matrix, left unchanged
        pivot_limit: Only pivots in columns below this index are reported

    Returns:
        (reduced matrix, pivot column per nonzero row)
    """
    if not matrix:
        return [], []
    reduced, pivots = to_domain_matrix(matrix).rref()
    limit = len(matrix[0]) if pivot_limit is None else pivot_limit
    return from_domain_matrix(reduced), [c for c in pivots if c < limit]


def rank(matrix: Sequence[Sequence[Scalar]]) -> int:
    if not matrix:
        return 0
    return to_domain_matrix(matrix).rank()


def nullspace_from_rref(reduced: Matrix, pivots: Sequence[int], ncols: int) -> List[Vector]:
    """
    Basis of the homogeneous solutions, one vector per free column.

    Args:
        reduced: Matrix in reduced row echelon form, rows beyond
            len(pivots) being zero in the first ncols columns
        pivots: Its pivot columns below ncols
        ncols: Number of variable columns

    Returns:
        Basis vectors, the free column's entry set to 1
    """
    left = to_domain_matrix([row[:ncols] for row in reduced], ncols)
    basis = left.nullspace_from_rref(list(pivots))
    return [tuple(v) for v in from_domain_matrix(basis)]


def nullspace(matrix: Sequence[Sequence[Scalar]]) -> List[Vector]:
    ncols = len(matrix[0]) if matrix else 0
    reduced, pivots = rref(matrix)
    return nullspace_from_rref(reduced, pivots, ncols)


@dataclass(frozen=True)
class SolveResult:
    """
    Outcome of solve().

    Attributes:
        consistent: Whether A x = b has a solution
        solution: Particular solution with every free variable zero
        nullspace: Basis of the solutions of A x = 0
        rank: Rank of A
        left_certificate: For inconsistent systems, y with y^T A = 0 and y^T b = 1
    """

    consistent: bool
    solution: Optional[Vector]
    nullspace: Tuple[Vector, ...]
    rank: int
    left_certificate: Optional[Vector] = None


def solve(a: Sequence[Sequence[Scalar]], b: Sequence[Scalar], ncols: Optional[int] = None) -> SolveResult:
    """
    Solve A x = b exactly.

    The identity matrix is carried alongside [A | b] so that an
    inconsistent system comes with the row combination proving it.

    Args:
        a: Coefficient rows
        b: Right hand side, one entry per row
        ncols: Number of variables, needed when a has no rows

    Returns:
        SolveResult
    """
    m = len(a)
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    if m == 0:
        basis = nullspace_from_rref([], [], n)
        return SolveResult(True, tuple([ZERO] * n), tuple(basis), 0)

    augmented = []
    for i in range(m):
        tracking = [ONE if k == i else ZERO for k in range(m)]
        augmented.append(list(a[i]) + [b[i]] + tracking)
    reduced, pivots = rref(augmented, pivot_limit=n + 1)

    if n in pivots:
        # 이 행의 A 부분은 0, b 부분은 1
        row = reduced[pivots.index(n)]
        certificate = tuple(row[n + 1:])
        logger.debug("Inconsistent system, left certificate found")
        return SolveResult(False, None, (), len(pivots) - 1, certificate)

    solution = [ZERO] * n
    for row, col in zip(reduced, pivots):
        solution[col] = row[n]
    basis = nullspace_from_rref(reduced, pivots, n)
    return SolveResult(True, tuple(solution), tuple(basis), len(pivots))
