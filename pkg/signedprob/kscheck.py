"""
Kochen-Specker check module for the signed probability toolkit.

A basis system is a list of orthogonal bases of real 4-space given by
integer rays. A model of the system would mark, for every basis, exactly
one of its rays, consistently on rays shared between bases. This module
validates systems, searches for such selections and applies the parity
argument that rules them out when every ray lies in exactly two bases
and the number of bases is odd.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from signedprob.errors import CapExceededError, FileFormatError

logger = logging.getLogger(__name__)

DIMENSION = 4
# 탐색 공간은 4^기저수
MAX_BASES = 16
DEFAULT_SELECTION_LIMIT: Optional[int] = None

DATA_DIR = Path(__file__).resolve().parent / "data"
DEFAULT_SYSTEM_FILE = DATA_DIR / "cabello18.json"


@dataclass(frozen=True)
class Ray:
    """
    One-dimensional subspace with an integer representative.

    Coordinates are stored in canonical form: divided by the gcd of their
    absolute values, first nonzero coordinate positive.
    """

    coords: Tuple[int, ...]

    def __post_init__(self):
        coords = tuple(self.coords)
        if len(coords) != DIMENSION:
            raise ValueError(f"a ray needs {DIMENSION} coordinates, got {len(coords)}")
        if any(isinstance(c, bool) or not isinstance(c, int) for c in coords):
            raise ValueError(f"ray coordinates must be integers, got {coords}")
        divisor = reduce(gcd, (abs(c) for c in coords))
        if divisor == 0:
            raise ValueError("the zero vector does not span a ray")
        lead = next(c for c in coords if c)
        scale = divisor if lead > 0 else -divisor
        object.__setattr__(self, "coords", tuple(c // scale for c in coords))

    def dot(self, other: "Ray") -> int:
        return sum(a * b for a, b in zip(self.coords, other.coords))

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class Basis:
    rays: Tuple[Ray, ...]

    def __post_init__(self):
        rays = tuple(self.rays)
        if len(rays) != DIMENSION:
            raise ValueError(f"a basis needs {DIMENSION} rays, got {len(rays)}")
        object.__setattr__(self, "rays", rays)

    def orthogonality_violations(self) -> List[str]:
        problems = []
        for i in range(DIMENSION):
            for j in range(i + 1, DIMENSION):
                product = self.rays[i].dot(self.rays[j])
                if product != 0:
                    problems.append(f"rays {self.rays[i]} and {self.rays[j]} have dot product {product}")
        return problems


@dataclass(frozen=True)
class BasisSystem:
    bases: Tuple[Basis, ...]

    def __post_init__(self):
        object.__setattr__(self, "bases", tuple(self.bases))

    def rays(self) -> List[Ray]:
        """Distinct rays in order of first appearance."""
        return list(dict.fromkeys(ray for basis in self.bases for ray in basis.rays))

    def occurrences(self) -> Dict[Ray, int]:
        counts = Counter(ray for basis in self.bases for ray in basis.rays)
        return {ray: counts[ray] for ray in self.rays()}


@dataclass(frozen=True)
class Selection:
    """
    One chosen ray index per basis.

    Attributes:
        choice: choice[b] indexes the marked ray of basis b
    """

    choice: Tuple[int, ...]

    def marked(self, s: BasisSystem) -> List[Ray]:
        return list(dict.fromkeys(basis.rays[i] for basis, i in zip(s.bases, self.choice)))


@dataclass
class SystemReport:
    """
    Structural report on a basis system.

    Attributes:
        num_bases: Number of bases
        num_rays: Number of distinct rays
        occurrences: Bases containing each ray
        orthogonal: Orthogonality verdict per basis
        violations: Orthogonality violations, prefixed with the basis index
    """

    num_bases: int
    num_rays: int
    occurrences: Dict[Ray, int]
    orthogonal: Tuple[bool, ...]
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.orthogonal)

    @property
    def every_ray_twice(self) -> bool:
        return bool(self.occurrences) and all(count == 2 for count in self.occurrences.values())

    @property
    def cabello_profile(self) -> bool:
        return self.num_bases == 9 and self.num_rays == 18 and self.every_ray_twice


def validate_system(s: BasisSystem) -> SystemReport:
    """Count rays and occurrences and check every basis for orthogonality."""
    orthogonal = []
    violations = []
    for b, basis in enumerate(s.bases):
        problems = basis.orthogonality_violations()
        orthogonal.append(not problems)
        violations.extend(f"basis {b}: {problem}" for problem in problems)
    occurrences = s.occurrences()
    report = SystemReport(len(s.bases), len(occurrences), occurrences, tuple(orthogonal), violations)
    if violations:
        logger.info(f"Basis system has {len(violations)} orthogonality violations")
    return report


def find_selections(s: BasisSystem, limit: Optional[int] = DEFAULT_SELECTION_LIMIT) -> List[Selection]:
    """
    Enumerate consistent selections by depth-first search.

    Choosing a ray marks it in every basis and unmarks the other rays of
    the basis; a choice contradicting an earlier mark is pruned.

    Args:
        s: The basis system
        limit: Stop after this many selections; None for all

    Returns:
        Selections in lexicographic order of their choices

    Raises:
        ValueError: If limit is below 1
        CapExceededError: If the system has more than MAX_BASES bases
    """
    if limit is not None and limit < 1:
        raise ValueError(f"selection limit must be at least 1, got {limit}")
    if len(s.bases) > MAX_BASES:
        raise CapExceededError(f"{len(s.bases)} bases exceed the search cap of {MAX_BASES}")

    marks: Dict[Ray, bool] = {}
    choice: List[int] = []
    found: List[Selection] = []
    visited = 0

    def assign(basis: Basis, index: int) -> Optional[List[Ray]]:
        # 새로 표시한 광선 목록, 모순이면 None
        added = []
        for position, ray in enumerate(basis.rays):
            want = position == index
            current = marks.get(ray)
            if current is None:
                marks[ray] = want
                added.append(ray)
            elif current != want:
                for undo in added:
                    del marks[undo]
                return None
        return added

    def search(b: int) -> bool:
        nonlocal visited
        visited += 1
        if b == len(s.bases):
            found.append(Selection(tuple(choice)))
            return limit is not None and len(found) >= limit
        basis = s.bases[b]
        for index in range(DIMENSION):
            added = assign(basis, index)
            if added is None:
                continue
            choice.append(index)
            done = search(b + 1)
            choice.pop()
            for ray in added:
                del marks[ray]
            if done:
                return True
        return False

    search(0)
    logger.info(f"Selection search visited {visited} nodes, found {len(found)}")
    return found


def is_consistent_selection(s: BasisSystem, sel: Selection) -> bool:
    """Check that the marked rays meet every basis in exactly one position."""
    if len(sel.choice) != len(s.bases):
        return False
    if any(not 0 <= i < DIMENSION for i in sel.choice):
        return False
    marked = set(sel.marked(s))
    return all(sum(ray in marked for ray in basis.rays) == 1 for basis in s.bases)


@dataclass(frozen=True)
class ParityVerdict:
    """
    Attributes:
        applicable: Every ray lies in exactly two bases
        obstruction: Applicable and the number of bases is odd
        reason: Human readable explanation
    """

    applicable: bool
    obstruction: bool
    reason: str


def parity_obstruction(s: BasisSystem) -> ParityVerdict:
    """
    Parity argument: if every ray lies in exactly two bases, a consistent
    selection marks one ray per basis and each marked ray serves two
    bases, so the number of bases is twice the number of marked rays.
    """
    report = validate_system(s)
    if not report.every_ray_twice:
        return ParityVerdict(False, False, "some ray does not lie in exactly two bases")
    n = report.num_bases
    if n % 2:
        return ParityVerdict(True, True, f"{n} bases, each ray in two of them: {n} would have to be even")
    return ParityVerdict(True, False, f"{n} bases is even, parity gives no obstruction")


def model_exists(s: BasisSystem) -> bool:
    """
    True iff some consistent selection exists. A model of the system in
    any observation frame would induce one at every sample point.
    """
    return bool(find_selections(s, limit=1))


def decode_basis_system(data, source: str = "<data>") -> BasisSystem:
    """
    Build a BasisSystem from decoded JSON ``{"bases": [[[a,b,c,d] x4] ...]}``.

    Raises:
        FileFormatError: With the path of the offending field
    """
    if not isinstance(data, dict) or "bases" not in data:
        raise FileFormatError(f"{source}: expected an object with a 'bases' list", field="bases")
    unknown = sorted(set(data) - {"bases"})
    if unknown:
        raise FileFormatError(f"{source}: unknown keys {unknown}", field=unknown[0])
    bases_data = data["bases"]
    if not isinstance(bases_data, list):
        raise FileFormatError(f"{source}: 'bases' must be a list", field="bases")
    bases = []
    for b, basis_data in enumerate(bases_data):
        where = f"bases[{b}]"
        if not isinstance(basis_data, list) or len(basis_data) != DIMENSION:
            raise FileFormatError(f"{source}: a basis is a list of {DIMENSION} rays", field=where)
        rays = []
        for r, coords in enumerate(basis_data):
            if not isinstance(coords, list):
                raise FileFormatError(f"{source}: a ray is a list of integers", field=f"{where}[{r}]")
            try:
                rays.append(Ray(tuple(coords)))
            except ValueError as e:
                raise FileFormatError(f"{source}: {e}", field=f"{where}[{r}]") from e
        bases.append(Basis(tuple(rays)))
    return BasisSystem(tuple(bases))


def encode_basis_system(s: BasisSystem) -> dict:
    return {"bases": [[list(ray.coords) for ray in basis.rays] for basis in s.bases]}
