"""
Analyzer module for the signed probability toolkit.

This module combines the functionality of the other modules behind one
object holding an observation space.
"""

import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from sortedcontainers import SortedSet

from signedprob import extension, fileio, frame, utils
from signedprob.errors import FrameValidationError
from signedprob.extension import ExtensionReport, ExtensionResult, LinearSystem
from signedprob.frame import Frame, ObservedDistribution, Permutation
from signedprob.scalar import Scalar
from signedprob.scenarios import ScenarioBundle
from signedprob.space import SignedDistribution

logger = logging.getLogger(__name__)


class ObservationSpaceAnalyzer:
    """
    Observation space analyzer that combines all functionality.
    """

    def __init__(self, name: str = "space"):
        """
        Initialize the analyzer.

        Args:
            name: Name used in log messages
        """
        self.name = name
        self.frame: Optional[Frame] = None
        self.observed: Optional[ObservedDistribution] = None
        self.merged = False
        self._system: Optional[LinearSystem] = None

    @classmethod
    def from_bundle(cls, bundle: ScenarioBundle) -> "ObservationSpaceAnalyzer":
        analyzer = cls(bundle.name)
        analyzer.attach(bundle.frame, bundle.observed)
        return analyzer

    def attach(self, f: Frame, obs: ObservedDistribution) -> None:
        """
        Hold a frame and observed table; fat outcomes are merged.

        Raises:
            FrameValidationError: If the frame or table is invalid, or merged
                labels collide with existing ones
        """
        frame.ensure_valid(obs)
        self.frame, self.observed = frame.normalize_fat_outcomes(f, obs)
        self.merged = self.frame is not f
        self._system = None
        logger.info(f"Attached {self.name}: {self.frame.space.size} outcomes, "
                    f"{len(self.frame.ensembles)} ensembles")

    async def load(self, path: Union[str, Path]) -> None:
        """
        Read a space file and attach it.

        Raises:
            OSError: If the file cannot be read
            FileFormatError: If it is malformed
            FrameValidationError: If the space is invalid
        """
        f, obs = await fileio.load_space(path)
        self.name = str(path)
        self.attach(f, obs)

    async def load_extension(self, path: Union[str, Path]) -> SignedDistribution:
        self._check_loaded()
        return await fileio.load_extension(path, self.frame.space)

    def _check_loaded(self) -> None:
        if self.frame is None or self.observed is None:
            logger.error("No observation space attached")
            raise RuntimeError("No observation space attached. Call attach() or load() first.")

    @property
    def system(self) -> LinearSystem:
        self._check_loaded()
        if self._system is None:
            self._system = extension.build_system(self.frame, self.observed)
        return self._system

    def solve(self, mode: str) -> ExtensionResult:
        """
        Answer the extension question for one mode.

        Args:
            mode: "signed", "traditional" or "min-negativity"

        Raises:
            ValueError: On an unknown mode
            InfeasibleSystemError: For min-negativity without signed extensions
        """
        if mode == "signed":
            return extension.solve_signed(self.system)
        if mode == "traditional":
            return extension.solve_traditional(self.system)
        if mode == "min-negativity":
            return extension.minimize_negativity(self.system)
        raise ValueError(f"unknown mode {mode!r}")

    def report(self) -> ExtensionReport:
        self._check_loaded()
        return extension.solve_extension_problem(self.frame, self.observed)

    def verify(self, d: SignedDistribution) -> List[str]:
        self._check_loaded()
        return extension.verify_extension(self.frame, self.observed, d)

    def automorphisms(self, cap: int = frame.DEFAULT_AUTOMORPHISM_CAP) -> SortedSet:
        self._check_loaded()
        return frame.enumerate_automorphisms(self.frame, self.observed, cap)

    def parse_permutations(self, texts: Iterable[str]) -> List[Permutation]:
        """
        Raises:
            ValueError: If a text is not a permutation of the outcomes
        """
        self._check_loaded()
        return [utils.parse_cycles(text, self.frame.space) for text in texts]

    def group_from(self, perms: Sequence[Permutation]) -> SortedSet:
        """
        Generate the group of explicit permutations after checking each one.

        Raises:
            FrameValidationError: If a permutation is not an automorphism
        """
        self._check_loaded()
        problems = []
        for perm in perms:
            reason = frame.automorphism_violation(self.frame, self.observed, perm)
            if reason is not None:
                problems.append(f"{utils.format_cycles(perm, self.frame.space)}: {reason}")
        if problems:
            raise FrameValidationError(problems)
        return frame.generate_group(perms, self.frame.space.size)

    def symmetrize(self, q: SignedDistribution, group: Iterable[Permutation]) -> SignedDistribution:
        self._check_loaded()
        return extension.symmetrize(q, group, self.frame, self.observed)

    def forced_probability(self, labels: Iterable[str]) -> Optional[Tuple[Scalar, Tuple[Scalar, ...]]]:
        self._check_loaded()
        return extension.forced_probability(self.system, self.frame.space.event(labels))
