"""
Signed probability toolkit application handlers

이 모듈은 명령줄 애플리케이션의 각 명령을 처리하는 핸들러 함수들을 제공합니다.
Every handler returns the process exit code.
"""

import logging
import os
import sys
from typing import Any, Dict, List, Optional, Sequence, Union

# 라이브러리 경로 추가
current_dir = os.path.dirname(os.path.abspath(__file__))
if current_dir not in sys.path:
    sys.path.insert(0, current_dir)

from signedprob import fileio, kscheck, scenarios
from signedprob.analyzer import ObservationSpaceAnalyzer
from signedprob.errors import (
    CapExceededError,
    DistributionError,
    ExtensionError,
    FileFormatError,
    FrameValidationError,
    InfeasibleSystemError,
    PreconditionError,
    SolverError,
)
from signedprob.extension import ExtensionResult
from signedprob.frame import DEFAULT_AUTOMORPHISM_CAP
from signedprob.scalar import ZERO, format_scalar
from signedprob.space import format_weights

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2
EXIT_INFEASIBLE = 3

MODES = ("signed", "traditional", "min-negativity")


def _error(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


async def _load_analyzer(path: str) -> Union[ObservationSpaceAnalyzer, int]:
    """
    Load and validate a space file.

    Returns:
        The analyzer, or the exit code when loading failed
    """
    analyzer = ObservationSpaceAnalyzer()
    try:
        await analyzer.load(path)
    except OSError as e:
        logger.error(f"Cannot read {path}: {e}")
        _error(f"cannot read {path}: {e.strerror or e}")
        return EXIT_IO
    except FileFormatError as e:
        _error(str(e))
        return EXIT_IO
    except (FrameValidationError, CapExceededError) as e:
        violations = getattr(e, "violations", [str(e)])
        _error(f"{path} is not a valid observation space")
        for violation in violations:
            print(f"  - {violation}", file=sys.stderr)
        return EXIT_INVALID
    return analyzer


async def handle_check(path: str) -> int:
    """
    Validate a space file: format, frame invariants and agreement between ensembles.
    """
    loaded = await _load_analyzer(path)
    if isinstance(loaded, int):
        return loaded
    f = loaded.frame
    print(f"ok: {f.space.size} outcomes, {len(f.ensembles)} ensembles")
    for ens in f.ensembles:
        print(f"  {ens.name}: {len(ens.partition.parts)} parts")
    return EXIT_OK


def _result_json(result: ExtensionResult, mode: str, system, verified: Optional[List[str]]) -> Dict[str, Any]:
    certificate = None
    if result.certificate is not None:
        certificate = {row.label: format_scalar(y) for row, y in zip(system.rows, result.certificate)}
    return {
        "mode": mode,
        "status": result.status.value,
        "rank": result.rank,
        "variables": system.num_variables,
        "nullspace_dimension": len(result.nullspace),
        "witness": fileio.encode_extension(result.witness) if result.witness is not None else None,
        "negative_mass": format_scalar(result.negative_mass) if result.negative_mass is not None else None,
        "certificate": certificate,
        "extends_observed": None if verified is None else not verified,
        "pivots": result.pivots,
    }


def _print_result(result: ExtensionResult, mode: str, system, verified: Optional[List[str]]) -> None:
    print(f"mode: {mode}")
    print(f"status: {result.status.value}")
    print(f"rank: {result.rank} of {system.num_variables}")
    print(f"nullspace dimension: {len(result.nullspace)}")
    if result.witness is not None:
        print("witness:")
        for line in format_weights(result.witness):
            print(f"  {line}")
        print(f"negative mass: {format_scalar(result.negative_mass)}")
        print(f"extends observed distribution: {'true' if not verified else 'false'}")
    if result.certificate is not None:
        print("certificate (row multipliers):")
        for row, y in zip(system.rows, result.certificate):
            if y != ZERO:
                print(f"  {row.label}: {format_scalar(y)}")


async def handle_extend(path: str, mode: str, as_json: bool = False) -> int:
    """
    Solve the extension problem of a space file in one mode.

    Exit 0 when an extension exists, 3 when none does.
    """
    if mode not in MODES:
        _error(f"unknown mode {mode!r}; choose from {', '.join(MODES)}")
        return EXIT_IO
    loaded = await _load_analyzer(path)
    if isinstance(loaded, int):
        return loaded
    analyzer = loaded
    try:
        result = analyzer.solve(mode)
    except InfeasibleSystemError as e:
        _error(str(e))
        return EXIT_INFEASIBLE
    except SolverError as e:
        logger.error(f"Solver failed: {e}")
        _error(str(e))
        return EXIT_INVALID

    verified = analyzer.verify(result.witness) if result.witness is not None else None
    if as_json:
        print(fileio.dumps(_result_json(result, mode, analyzer.system, verified)))
    else:
        _print_result(result, mode, analyzer.system, verified)
    return EXIT_OK if result.feasible else EXIT_INFEASIBLE


def parse_event(text: str) -> List[str]:
    """Split "a,b,c" into outcome labels."""
    return [label.strip() for label in text.split(",") if label.strip()]


async def handle_report(path: Optional[str] = None, scenario: Optional[str] = None,
                        events: Sequence[str] = (), as_json: bool = False) -> int:
    """
    Answer the whole extension problem of a space file or built-in scenario:
    traditional and signed extensions, the support argument and the forced
    probabilities of the requested events.

    Exit 0 when a signed extension exists, 3 when none does.
    """
    if scenario is not None:
        generator = scenarios.SCENARIOS.get(scenario)
        if generator is None:
            _error(f"unknown scenario {scenario!r}; choose from {', '.join(scenarios.SCENARIOS)}")
            return EXIT_IO
        analyzer = ObservationSpaceAnalyzer.from_bundle(generator())
    else:
        loaded = await _load_analyzer(path)
        if isinstance(loaded, int):
            return loaded
        analyzer = loaded

    try:
        report = analyzer.report()
    except SolverError as e:
        logger.error(f"Solver failed: {e}")
        _error(str(e))
        return EXIT_INVALID

    forced = []
    for text in events:
        labels = parse_event(text)
        try:
            e = analyzer.frame.space.event(labels)
            forced.append((e, analyzer.forced_probability(labels)))
        except KeyError as err:
            _error(f"bad --event {text!r}: {err.args[0]}")
            return EXIT_IO

    obstruction = [f"{name}:{part}" for name, part in report.obstruction]
    if as_json:
        print(fileio.dumps({
            "outcomes": report.frame.space.size,
            "merged": analyzer.merged,
            "traditional": report.traditional.status.value,
            "signed": report.signed.status.value,
            "rank": report.signed.rank,
            "obstruction": obstruction,
            "forced": {str(e): format_scalar(hit[0]) if hit else None for e, hit in forced},
        }))
    else:
        print(f"outcomes: {report.frame.space.size} (fat outcomes merged: {'yes' if analyzer.merged else 'no'})")
        print(f"traditional: {report.traditional.status.value}")
        print(f"signed: {report.signed.status.value} (rank {report.signed.rank} of {report.system.num_variables})")
        print(f"support obstruction: {'none' if not obstruction else len(obstruction)}")
        for line in obstruction:
            print(f"  {line}")
        if forced:
            print("forced probabilities:")
        for e, hit in forced:
            if hit is None:
                print(f"  {e}: not forced")
                continue
            value, multipliers = hit
            print(f"  {e}: {format_scalar(value)}")
            for row, y in zip(report.system.rows, multipliers):
                if y != ZERO:
                    print(f"    {format_scalar(y)} x {row.label}")
    return EXIT_OK if report.signed.feasible else EXIT_INFEASIBLE


def parse_angles(text: str) -> List[int]:
    """
    Parse "a,b,c" into three angle indices.

    Raises:
        ValueError: If the text is not three integers
    """
    pieces = [piece.strip() for piece in text.split(",")]
    if len(pieces) != 3:
        raise ValueError(f"expected three comma separated angles, got {text!r}")
    return [int(piece) for piece in pieces]


async def handle_scenario(name: str, angles: Optional[str] = None) -> int:
    """Print a built-in scenario as a space file."""
    generator = scenarios.SCENARIOS.get(name)
    if generator is None:
        _error(f"unknown scenario {name!r}; choose from {', '.join(scenarios.SCENARIOS)}")
        return EXIT_IO
    if angles is not None and name != "bell":
        _error("--angles only applies to the bell scenario")
        return EXIT_IO
    try:
        bundle = generator(*parse_angles(angles)) if angles is not None else generator()
    except (ValueError, PreconditionError) as e:
        _error(str(e))
        return EXIT_IO
    print(fileio.dumps(fileio.encode_space(bundle.frame, bundle.observed)))
    return EXIT_OK


async def handle_symmetrize(space_path: str, extension_path: str, auto: bool = False,
                            perms: Sequence[str] = (), cap: int = DEFAULT_AUTOMORPHISM_CAP) -> int:
    """
    Average an extension over the automorphism group (--auto) or over the
    group generated by explicit permutations, and print the result.
    """
    loaded = await _load_analyzer(space_path)
    if isinstance(loaded, int):
        return loaded
    analyzer = loaded
    try:
        q = await analyzer.load_extension(extension_path)
    except OSError as e:
        _error(f"cannot read {extension_path}: {e.strerror or e}")
        return EXIT_IO
    except FileFormatError as e:
        _error(str(e))
        return EXIT_IO
    except DistributionError as e:
        _error(f"{extension_path}: {e}")
        return EXIT_INVALID

    try:
        if auto:
            group = analyzer.automorphisms(cap)
        else:
            group = analyzer.group_from(analyzer.parse_permutations(perms))
    except FrameValidationError as e:
        _error("not an automorphism")
        for violation in e.violations:
            print(f"  - {violation}", file=sys.stderr)
        return EXIT_INVALID
    except CapExceededError as e:
        _error(str(e))
        return EXIT_INVALID
    except ValueError as e:
        _error(f"malformed permutation: {e}")
        return EXIT_IO

    try:
        r = analyzer.symmetrize(q, group)
    except ExtensionError as e:
        _error(str(e))
        return EXIT_INVALID
    logger.info(f"Symmetrized over {len(group)} permutations")
    print(fileio.dumps(fileio.encode_extension(r)))
    return EXIT_OK


async def handle_ks(path: Optional[str] = None, limit: Optional[int] = None) -> int:
    """
    Check a basis system for consistent selections.

    Exit 0 when a selection (and so possibly a model) exists, 3 when none does.
    """
    if limit is not None and limit < 1:
        _error(f"--limit must be at least 1, got {limit}")
        return EXIT_IO
    try:
        system = await fileio.load_basis_file(path)
    except OSError as e:
        _error(f"cannot read {path or kscheck.DEFAULT_SYSTEM_FILE}: {e.strerror or e}")
        return EXIT_IO
    except FileFormatError as e:
        _error(str(e))
        return EXIT_IO

    report = kscheck.validate_system(system)
    print(f"bases: {report.num_bases}")
    print(f"distinct rays: {report.num_rays}")
    counts = sorted(set(report.occurrences.values()))
    print(f"occurrences per ray: {', '.join(str(c) for c in counts)}")
    print(f"18-ray, 9-basis profile: {'yes' if report.cabello_profile else 'no'}")
    if not report.ok:
        _error("basis system is not orthogonal")
        for violation in report.violations:
            print(f"  - {violation}", file=sys.stderr)
        return EXIT_INVALID

    verdict = kscheck.parity_obstruction(system)
    print(f"parity obstruction: {'yes' if verdict.obstruction else 'no'} ({verdict.reason})")
    try:
        selections = kscheck.find_selections(system, limit)
    except CapExceededError as e:
        _error(str(e))
        return EXIT_INVALID
    if verdict.obstruction and selections:
        raise RuntimeError("parity obstruction holds but a selection was found")

    print(f"consistent selections: {len(selections)}")
    for sel in selections:
        print("  " + " ".join(str(i) for i in sel.choice))
    if not selections:
        print("no model exists in any observation frame")
        return EXIT_INFEASIBLE
    return EXIT_OK
