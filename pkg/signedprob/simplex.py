"""
Simplex module for the signed probability toolkit.

Exact two-phase primal simplex over Q(sqrt2) for problems in standard
form: minimize c^T x subject to A x = b, x >= 0. Bland's rule picks both
the entering and the leaving variable, so no basis repeats within a
phase. An infeasible problem is answered with a Farkas certificate read
off the phase one duals.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from typing_extensions import Literal, TypeAlias

from signedprob.errors import SolverError
from signedprob.scalar import ONE, ZERO, Scalar, format_scalar

logger = logging.getLogger(__name__)

# Bland 규칙은 순환하지 않으므로 이 값은 안전장치일 뿐
DEFAULT_MAX_PIVOTS = 100_000

LPStatus: TypeAlias = Literal["optimal", "infeasible", "unbounded"]


@dataclass(frozen=True)
class SimplexResult:
    """
    Outcome of an exact simplex run.

    Attributes:
        status: "optimal", "infeasible" or "unbounded"
        x: Optimal (or, for feasibility runs, feasible) basic solution
        objective: c^T x at the returned solution
        certificate: For infeasible problems, y with y^T A >= 0 and y^T b < 0
        pivots: Number of pivots over both phases
    """

    status: LPStatus
    x: Optional[Tuple[Scalar, ...]] = None
    objective: Optional[Scalar] = None
    certificate: Optional[Tuple[Scalar, ...]] = None
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


class _Tableau:
    """
    Dense simplex tableau.

    rows[i] holds the constraint row followed by its right hand side,
    reduced[j] the reduced cost of column j and basis[i] the basic
    variable of row i.
    """

    def __init__(self, rows: List[List[Scalar]], basis: List[int], max_pivots: int):
        self.rows = rows
        self.basis = basis
        self.width = len(rows[0]) - 1 if rows else 0
        self.reduced: List[Scalar] = [ZERO] * self.width
        self.max_pivots = max_pivots
        self.pivots = 0

    def price(self, cost: Sequence[Scalar]) -> None:
        """Recompute the reduced costs for a cost vector over all columns."""
        reduced = list(cost)
        for row, var in zip(self.rows, self.basis):
            weight = cost[var]
            if weight:
                reduced = [r - weight * a if a else r for r, a in zip(reduced, row)]
        self.reduced = reduced

    def pivot(self, r: int, c: int) -> None:
        if self.pivots >= self.max_pivots:
            logger.error(f"Pivot budget of {self.max_pivots} exhausted")
            raise SolverError(f"simplex exceeded {self.max_pivots} pivots")
        self.pivots += 1
        logger.debug(f"Pivot {self.pivots}: x{self.basis[r]} leaves, x{c} enters")

        inv = self.rows[r][c].inverse()
        pivot_row = [v * inv if v else ZERO for v in self.rows[r]]
        self.rows[r] = pivot_row
        for i, row in enumerate(self.rows):
            factor = row[c]
            if i != r and factor:
                self.rows[i] = [a - factor * p if p else a for a, p in zip(row, pivot_row)]
        factor = self.reduced[c]
        if factor:
            self.reduced = [a - factor * p if p else a
                            for a, p in zip(self.reduced, pivot_row[:self.width])]
        self.basis[r] = c

    def entering(self, allowed: int) -> Optional[int]:
        # Bland: 가장 작은 인덱스의 음의 축소비용 열
        for j in range(allowed):
            if self.reduced[j] < ZERO:
                return j
        return None

    def leaving(self, c: int) -> Optional[int]:
        best = None
        best_key = None
        for i, row in enumerate(self.rows):
            if row[c] > ZERO:
                key = (row[-1] / row[c], self.basis[i])
                if best_key is None or key < best_key:
                    best, best_key = i, key
        return best

    def run(self, allowed: int) -> str:
        """
        Pivot until optimal or unbounded.

        Args:
            allowed: Only columns below this index may enter

        Returns:
            "optimal" or "unbounded"
        """
        while True:
            c = self.entering(allowed)
            if c is None:
                return "optimal"
            r = self.leaving(c)
            if r is None:
                return "unbounded"
            self.pivot(r, c)

    def solution(self, n: int) -> Tuple[Scalar, ...]:
        x = [ZERO] * n
        for row, var in zip(self.rows, self.basis):
            if var < n:
                x[var] = row[-1]
        return tuple(x)


def solve_lp(a: Sequence[Sequence[Scalar]], b: Sequence[Scalar], c: Optional[Sequence[Scalar]] = None,
             ncols: Optional[int] = None, max_pivots: int = DEFAULT_MAX_PIVOTS) -> SimplexResult:
    """
    Minimize c^T x subject to A x = b, x >= 0 exactly.

    Args:
        a: Constraint rows
        b: Right hand side
        c: Cost vector; None for a pure feasibility problem
        ncols: Number of variables, needed when a has no rows
        max_pivots: Pivot budget over both phases

    Returns:
        SimplexResult

    Raises:
        SolverError: If the pivot budget is exhausted
    """
    m = len(a)
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    cost = [Scalar.of(v) for v in c] if c is not None else [ZERO] * n
    if len(cost) != n:
        raise ValueError(f"cost vector has {len(cost)} entries for {n} variables")

    # phase one: 음수 우변은 행 부호를 뒤집고 인공변수 n..n+m-1 을 기저로
    flips = []
    rows = []
    for i in range(m):
        flip = -1 if Scalar.of(b[i]) < ZERO else 1
        flips.append(flip)
        coeffs = [Scalar.of(v) * flip for v in a[i]]
        artificial = [ONE if k == i else ZERO for k in range(m)]
        rows.append(coeffs + artificial + [Scalar.of(b[i]) * flip])

    tableau = _Tableau(rows, [n + i for i in range(m)], max_pivots)
    tableau.width = n + m
    tableau.price([ZERO] * n + [ONE] * m)
    tableau.run(n + m)
    infeasibility = sum((row[-1] for row, var in zip(tableau.rows, tableau.basis) if var >= n), ZERO)

    if infeasibility > ZERO:
        # y_i = 1 - (인공변수 i 의 축소비용), 부호를 되돌려 z = -S y
        duals = [ONE - tableau.reduced[n + i] for i in range(m)]
        certificate = tuple(-d * flips[i] for i, d in enumerate(duals))
        logger.info(f"Infeasible after {tableau.pivots} pivots, "
                    f"phase one optimum {format_scalar(infeasibility)}")
        return SimplexResult("infeasible", certificate=certificate, pivots=tableau.pivots)

    _drive_out_artificials(tableau, n)

    # phase two: 인공변수 열 제거
    tableau.rows = [row[:n] + [row[-1]] for row in tableau.rows]
    tableau.width = n
    tableau.price(cost)
    status = tableau.run(n)
    x = tableau.solution(n)
    objective = sum((ci * xi for ci, xi in zip(cost, x) if ci and xi), ZERO)
    if status == "unbounded":
        logger.info(f"Unbounded after {tableau.pivots} pivots")
        return SimplexResult("unbounded", x=x, pivots=tableau.pivots)
    logger.info(f"Optimal after {tableau.pivots} pivots, objective {format_scalar(objective)}")
    return SimplexResult("optimal", x=x, objective=objective, pivots=tableau.pivots)


def _drive_out_artificials(tableau: _Tableau, n: int) -> None:
    """Pivot zero-valued artificials out of the basis; drop rows that are redundant."""
    i = 0
    while i < len(tableau.rows):
        if tableau.basis[i] < n:
            i += 1
            continue
        row = tableau.rows[i]
        column = next((j for j in range(n) if row[j]), None)
        if column is None:
            logger.debug(f"Dropping redundant row {i}")
            del tableau.rows[i]
            del tableau.basis[i]
            continue
        tableau.pivot(i, column)
        i += 1


def find_feasible(a: Sequence[Sequence[Scalar]], b: Sequence[Scalar], ncols: Optional[int] = None,
                  max_pivots: int = DEFAULT_MAX_PIVOTS) -> SimplexResult:
    """Decide feasibility of {A x = b, x >= 0}."""
    return solve_lp(a, b, None, ncols=ncols, max_pivots=max_pivots)
