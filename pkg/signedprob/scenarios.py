"""
Scenarios module for the signed probability toolkit.

Built-in observation spaces: the two-bit parity example, three photon
analyzers at multiples of pi/8 and the Hardy experiment, both as a
directly observed space and as a space of local hidden assignments.
All probabilities are exact elements of Q(sqrt2).
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

from signedprob.errors import PreconditionError
from signedprob.frame import Ensemble, Frame, ObservedDistribution, Partition, Permutation, ensure_valid
from signedprob.scalar import ONE, ZERO, Scalar, format_scalar, scalar_sum
from signedprob.space import SampleSpace

logger = logging.getLogger(__name__)

DEFAULT_BELL_ANGLES = (0, 2, 3)
HARDY_SETTING_PRIOR = Fraction(1, 4)

HARDY_SETTINGS = ("ZZ", "ZX", "XZ", "XX")
RESULT_PAIRS = ("++", "+-", "-+", "--")

_HALF_ROOT2 = Scalar(0, Fraction(1, 2))

# sqrt3 * |psi> 의 각 기저별 계수, 결과쌍 순서 ++, +-, -+, --
HARDY_AMPLITUDES: Dict[str, Tuple[Scalar, ...]] = {
    "ZZ": (Scalar(-1), Scalar(1), Scalar(1), ZERO),
    "ZX": (ZERO, Scalar(0, -1), _HALF_ROOT2, _HALF_ROOT2),
    "XZ": (ZERO, _HALF_ROOT2, Scalar(0, -1), _HALF_ROOT2),
    "XX": (Scalar(Fraction(1, 2)), Scalar(Fraction(-1, 2)), Scalar(Fraction(-1, 2)),
           Scalar(Fraction(-3, 2))),
}

HARDY_CONDITIONALS: Dict[str, Tuple[Scalar, ...]] = {
    setting: tuple(a * a / 3 for a in amplitudes)
    for setting, amplitudes in HARDY_AMPLITUDES.items()
}


@dataclass(frozen=True)
class EighthAngle:
    """Angle k*pi/8 with 0 <= k <= 4."""

    k: int

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, int) or not 0 <= self.k <= 4:
            raise ValueError(f"angle index must be an integer in 0..4, got {self.k!r}")


_COS2 = (
    ONE,
    Scalar(Fraction(1, 2), Fraction(1, 4)),
    Scalar(Fraction(1, 2)),
    Scalar(Fraction(1, 2), Fraction(-1, 4)),
    ZERO,
)


def cos2(k: Union[int, EighthAngle]) -> Scalar:
    """
    Exact cos^2(k*pi/8).

    Raises:
        ValueError: If k is outside 0..4
    """
    angle = k if isinstance(k, EighthAngle) else EighthAngle(k)
    return _COS2[angle.k]


@dataclass(frozen=True)
class ScenarioBundle:
    """
    A generated observation space.

    Attributes:
        name: Scenario name
        frame: The observation frame
        observed: Observed probabilities over frame
        notes: One provenance line per table entry
    """

    name: str
    frame: Frame
    observed: ObservedDistribution
    notes: Tuple[str, ...] = ()


def _by_letters(space: SampleSpace, positions: Sequence[int], values: Sequence[str]) -> List:
    """Partition outcomes by the letters at positions, parts in values order."""
    parts = []
    for value in values:
        members = [i for i, label in enumerate(space.labels)
                   if "".join(label[p] for p in positions) == value]
        parts.append(space.event_of(members))
    return parts


def _bundle(name: str, space: SampleSpace, ensembles: List[Tuple[str, list, Sequence[Scalar]]],
            notes: List[str]) -> ScenarioBundle:
    frame = Frame(space, tuple(Ensemble(ens_name, Partition(space, tuple(parts)))
                               for ens_name, parts, _ in ensembles))
    observed = ObservedDistribution(frame, tuple(tuple(probs) for _, _, probs in ensembles))
    ensure_valid(observed)
    logger.debug(f"Generated scenario {name} with {space.size} outcomes")
    return ScenarioBundle(name, frame, observed, tuple(notes))


def piponi() -> ScenarioBundle:
    """Two bits whose left bit, right bit and parity are each observed alone."""
    space = SampleSpace(("00", "01", "10", "11"))
    ensembles = [
        ("left", [space.event(["00", "01"]), space.event(["10", "11"])], (ZERO, ONE)),
        ("right", [space.event(["00", "10"]), space.event(["01", "11"])], (ZERO, ONE)),
        ("parity", [space.event(["00", "11"]), space.event(["01", "10"])], (ZERO, ONE)),
    ]
    notes = []
    for name, parts, probs in ensembles:
        for part, p in zip(parts, probs):
            notes.append(f"{name} {part}: {format_scalar(p)}")
    return _bundle("piponi", space, ensembles, notes)


def bell(a: int = DEFAULT_BELL_ANGLES[0], b: int = DEFAULT_BELL_ANGLES[1],
         c: int = DEFAULT_BELL_ANGLES[2]) -> ScenarioBundle:
    """
    Three analyzers at angles a, b, c (in units of pi/8), measured two at a time.

    Outcomes are the eight words over {+,-} giving the results at A, B
    and C. A pair of analyzers at angle difference d agrees with
    probability cos^2(d*pi/8), each agreeing pair of results getting half
    of it and each disagreeing pair half of the rest.

    Args:
        a: Angle index of analyzer A
        b: Angle index of analyzer B
        c: Angle index of analyzer C

    Returns:
        ScenarioBundle with ensembles AB, BC and AC

    Raises:
        PreconditionError: If an angle index is outside 0..4
    """
    try:
        angles = [EighthAngle(k) for k in (a, b, c)]
    except ValueError as e:
        raise PreconditionError(str(e)) from e

    space = SampleSpace(tuple("".join(word) for word in itertools.product("+-", repeat=3)))
    half = Scalar(Fraction(1, 2))
    ensembles = []
    notes = []
    for name, (i, j) in (("AB", (0, 1)), ("BC", (1, 2)), ("AC", (0, 2))):
        diff = abs(angles[i].k - angles[j].k)
        agree = cos2(diff)
        parts = _by_letters(space, (i, j), RESULT_PAIRS)
        probs = []
        for pair, part in zip(RESULT_PAIRS, parts):
            same = pair[0] == pair[1]
            p = half * (agree if same else ONE - agree)
            probs.append(p)
            law = "cos^2" if same else "sin^2"
            notes.append(f"{name} {part}: 1/2 {law}({diff}pi/8) = {format_scalar(p)}")
        ensembles.append((name, parts, probs))
    return _bundle(f"bell({a},{b},{c})", space, ensembles, notes)


def bell_letter_flip() -> Permutation:
    """Permutation of the Bell outcomes flipping every result letter."""
    return tuple(7 - i for i in range(8))


def _hardy_label(setting: str, pair: str) -> str:
    return f"{setting}:{pair}"


def hardy() -> ScenarioBundle:
    """
    Hardy experiment as observed: each run reveals the setting pair and
    both results, so the sixteen outcomes form one ensemble of singletons.
    """
    labels = [_hardy_label(s, r) for s in HARDY_SETTINGS for r in RESULT_PAIRS]
    space = SampleSpace(tuple(labels))
    prior = Scalar(HARDY_SETTING_PRIOR)
    probs = []
    notes = []
    for setting in HARDY_SETTINGS:
        for pair, conditional in zip(RESULT_PAIRS, HARDY_CONDITIONALS[setting]):
            p = prior * conditional
            probs.append(p)
            notes.append(f"{_hardy_label(setting, pair)}: "
                         f"{format_scalar(prior)} * {format_scalar(conditional)}")
    parts = [space.singleton(i) for i in range(space.size)]
    return _bundle("hardy", space, [("run", parts, probs)], notes)


def hardy_hidden() -> ScenarioBundle:
    """
    Hardy experiment over local hidden assignments.

    An outcome fixes the Z and X results on both sides, written
    z_left x_left z_right x_right. Each setting pair is an ensemble that
    reveals the two results it measures.
    """
    space = SampleSpace(tuple("".join(word) for word in itertools.product("+-", repeat=4)))
    positions = {"ZZ": (0, 2), "ZX": (0, 3), "XZ": (1, 2), "XX": (1, 3)}
    ensembles = []
    notes = []
    for setting in HARDY_SETTINGS:
        parts = _by_letters(space, positions[setting], RESULT_PAIRS)
        probs = HARDY_CONDITIONALS[setting]
        for pair, p in zip(RESULT_PAIRS, probs):
            notes.append(f"{setting} {pair}: {format_scalar(p)}")
        ensembles.append((setting, parts, probs))
    return _bundle("hardy-hidden", space, ensembles, notes)


def hardy_conditional(bundle: ScenarioBundle, setting: str, pair: str) -> Scalar:
    """
    Conditional probability of a result pair given a setting pair.

    Args:
        bundle: hardy() or hardy_hidden()
        setting: One of ZZ, ZX, XZ, XX
        pair: One of ++, +-, -+, --

    Raises:
        KeyError: On an unknown setting or pair, or a bundle of another scenario
    """
    if setting not in HARDY_SETTINGS or pair not in RESULT_PAIRS:
        raise KeyError(f"unknown setting {setting!r} or result pair {pair!r}")
    obs = bundle.observed
    if bundle.name == "hardy":
        row = obs.table[0]
        index = {label: i for i, label in enumerate(bundle.frame.space.labels)}
        setting_total = scalar_sum(row[index[_hardy_label(setting, r)]] for r in RESULT_PAIRS)
        return row[index[_hardy_label(setting, pair)]] / setting_total
    if bundle.name == "hardy-hidden":
        return obs.table[bundle.frame.index_of(setting)][RESULT_PAIRS.index(pair)]
    raise KeyError(f"{bundle.name!r} is not a Hardy scenario")


SCENARIOS = {
    "piponi": piponi,
    "bell": bell,
    "hardy": hardy,
    "hardy-hidden": hardy_hidden,
}
