"""
File I/O module for the signed probability toolkit.

This module converts observation spaces, extensions and basis systems
to and from their JSON file formats and reads and writes those files
asynchronously. Scalars are always written as strings in the scalar
grammar, never as floats.

Space file::

    {"outcomes": ["00", "01", ...],
     "ensembles": [{"name": "left",
                    "parts": [{"outcomes": ["00", "01"], "prob": "0"}, ...]}]}

Extension file::

    {"weights": {"00": "-1/2", "01": "1/2", ...}}
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import aiofiles

from signedprob.errors import FileFormatError
from signedprob.frame import Ensemble, Frame, ObservedDistribution, Partition
from signedprob.kscheck import DEFAULT_SYSTEM_FILE, BasisSystem, decode_basis_system
from signedprob.scalar import Scalar, format_scalar, parse_scalar
from signedprob.space import SampleSpace, SignedDistribution

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _reject_duplicates(pairs: List[Tuple[str, Any]]) -> Dict[str, Any]:
    result = {}
    for key, value in pairs:
        if key in result:
            raise FileFormatError(f"duplicate key {key!r}", field=key)
        result[key] = value
    return result


def parse_json(text: str, source: str = "<data>") -> Any:
    """
    Decode JSON text, rejecting duplicate object keys.

    Raises:
        FileFormatError: With line and column for syntax errors
    """
    try:
        return json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as e:
        raise FileFormatError(f"{source}: {e.msg}", line=e.lineno, column=e.colno) from e


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False)


def _expect(value: Any, kind: type, field: str, what: str) -> Any:
    if not isinstance(value, kind):
        raise FileFormatError(f"expected {what}", field=field)
    return value


def _scalar(value: Any, field: str) -> Scalar:
    if not isinstance(value, str):
        raise FileFormatError("scalars are written as strings", field=field)
    try:
        return parse_scalar(value)
    except ValueError as e:
        raise FileFormatError(str(e), field=field) from e


def _check_keys(obj: Dict[str, Any], allowed: Tuple[str, ...], field: str) -> None:
    for key in allowed:
        if key not in obj:
            raise FileFormatError(f"missing key {key!r}", field=f"{field}.{key}" if field else key)
    extra = [key for key in obj if key not in allowed]
    if extra:
        raise FileFormatError(f"unknown key {extra[0]!r}", field=f"{field}.{extra[0]}" if field else extra[0])


def decode_space(data: Any) -> Tuple[Frame, ObservedDistribution]:
    """
    Build a frame and observed table from a decoded space file.

    Partition validity is not checked here; see frame.ensure_valid.

    Raises:
        FileFormatError: On structural problems, unknown labels or bad scalars
    """
    _expect(data, dict, "", "an object with 'outcomes' and 'ensembles'")
    _check_keys(data, ("outcomes", "ensembles"), "")
    labels = _expect(data["outcomes"], list, "outcomes", "a list of outcome labels")
    for i, label in enumerate(labels):
        _expect(label, str, f"outcomes[{i}]", "a string label")
    try:
        space = SampleSpace(tuple(labels))
    except ValueError as e:
        raise FileFormatError(str(e), field="outcomes") from e

    ensembles = []
    table = []
    for k, ens_data in enumerate(_expect(data["ensembles"], list, "ensembles", "a list of ensembles")):
        where = f"ensembles[{k}]"
        _expect(ens_data, dict, where, "an ensemble object")
        _check_keys(ens_data, ("name", "parts"), where)
        name = _expect(ens_data["name"], str, f"{where}.name", "a string name")
        parts = []
        probs = []
        for j, part_data in enumerate(_expect(ens_data["parts"], list, f"{where}.parts", "a list of parts")):
            part_where = f"{where}.parts[{j}]"
            _expect(part_data, dict, part_where, "a part object")
            _check_keys(part_data, ("outcomes", "prob"), part_where)
            members = _expect(part_data["outcomes"], list, f"{part_where}.outcomes", "a list of labels")
            try:
                parts.append(space.event(members))
            except (KeyError, TypeError) as e:
                message = e.args[0] if e.args else str(e)
                raise FileFormatError(str(message), field=f"{part_where}.outcomes") from e
            seen = set()
            for i, label in enumerate(members):
                if label in seen:
                    raise FileFormatError(f"outcome {label!r} is listed twice",
                                          field=f"{part_where}.outcomes[{i}]")
                seen.add(label)
            probs.append(_scalar(part_data["prob"], f"{part_where}.prob"))
        ensembles.append(Ensemble(name, Partition(space, tuple(parts))))
        table.append(tuple(probs))

    frame = Frame(space, tuple(ensembles))
    return frame, ObservedDistribution(frame, tuple(table))


def encode_space(frame: Frame, obs: ObservedDistribution) -> Dict[str, Any]:
    return {
        "outcomes": list(frame.space.labels),
        "ensembles": [
            {
                "name": ens.name,
                "parts": [{"outcomes": list(part.labels), "prob": format_scalar(p)}
                          for part, p in zip(ens.partition.parts, row)],
            }
            for ens, row in zip(frame.ensembles, obs.table)
        ],
    }


def decode_extension(data: Any, space: SampleSpace) -> SignedDistribution:
    """
    Build a signed distribution from a decoded extension file.

    Raises:
        FileFormatError: On missing, unknown or malformed weights
        DistributionError: If the weights do not sum to 1
    """
    _expect(data, dict, "", "an object with 'weights'")
    _check_keys(data, ("weights",), "")
    weights = _expect(data["weights"], dict, "weights", "an object mapping labels to scalars")
    for label in space.labels:
        if label not in weights:
            raise FileFormatError(f"no weight for outcome {label!r}", field=f"weights.{label}")
    for label in weights:
        if label not in space.labels:
            raise FileFormatError(f"unknown outcome {label!r}", field=f"weights.{label}")
    values = tuple(_scalar(weights[label], f"weights.{label}") for label in space.labels)
    return SignedDistribution(space, values)


def encode_extension(d: SignedDistribution) -> Dict[str, Any]:
    return {"weights": {label: format_scalar(w) for label, w in zip(d.space.labels, d.weights)}}


async def load_json(path: PathLike) -> Any:
    """
    Read and decode a JSON file.

    Raises:
        OSError: If the file cannot be read
        FileFormatError: If it is not valid JSON
    """
    async with aiofiles.open(path, mode="r", encoding="utf-8") as f:
        text = await f.read()
    logger.info(f"Read {len(text)} characters from {path}")
    return parse_json(text, str(path))


async def dump_json(data: Any, path: PathLike) -> None:
    async with aiofiles.open(path, mode="w", encoding="utf-8") as f:
        await f.write(dumps(data) + "\n")
    logger.info(f"Wrote {path}")


async def load_space(path: PathLike) -> Tuple[Frame, ObservedDistribution]:
    return decode_space(await load_json(path))


async def load_extension(path: PathLike, space: SampleSpace) -> SignedDistribution:
    return decode_extension(await load_json(path), space)


async def load_basis_file(path: Optional[PathLike] = None) -> BasisSystem:
    """
    Read a basis system file; None reads the bundled 18-ray system.

    Raises:
        OSError: If the file cannot be read
        FileFormatError: If it is not a valid basis file
    """
    path = path if path is not None else DEFAULT_SYSTEM_FILE
    system = decode_basis_system(await load_json(path), str(path))
    logger.info(f"Loaded {len(system.bases)} bases from {path}")
    return system
