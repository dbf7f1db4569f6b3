"""
Tests for the space, extension and basis file formats.
"""

import asyncio
import json
from fractions import Fraction

import pytest

from signedprob import fileio
from signedprob.errors import DistributionError, FileFormatError
from signedprob.scalar import Scalar
from signedprob.space import SignedDistribution

PIPONI_FILE = {
    "outcomes": ["00", "01", "10", "11"],
    "ensembles": [
        {"name": "left", "parts": [{"outcomes": ["00", "01"], "prob": "0"},
                                   {"outcomes": ["10", "11"], "prob": "1"}]},
        {"name": "right", "parts": [{"outcomes": ["00", "10"], "prob": "0"},
                                    {"outcomes": ["01", "11"], "prob": "1"}]},
        {"name": "parity", "parts": [{"outcomes": ["00", "11"], "prob": "0"},
                                     {"outcomes": ["01", "10"], "prob": "1"}]},
    ],
}


def test_decode_matches_scenario(piponi):
    frame, obs = fileio.decode_space(PIPONI_FILE)
    assert frame == piponi.frame
    assert obs == piponi.observed


def test_encode_bell_keeps_exact_scalars(bell):
    data = fileio.encode_space(bell.frame, bell.observed)
    assert data["ensembles"][1]["parts"][0] == {"outcomes": ["+++", "-++"], "prob": "1/4+1/8*sqrt2"}
    frame, obs = fileio.decode_space(json.loads(fileio.dumps(data)))
    assert frame == bell.frame
    assert obs == bell.observed


def test_duplicate_keys_are_rejected():
    with pytest.raises(FileFormatError, match="duplicate key 'prob'"):
        fileio.parse_json('{"outcomes": ["a"], "prob": "1", "prob": "0"}')


def test_syntax_errors_carry_position():
    with pytest.raises(FileFormatError) as info:
        fileio.parse_json('{\n  "outcomes": [\n    "a",,\n  ]\n}', "space.json")
    assert info.value.line == 3
    assert info.value.column == 9
    assert "space.json" in str(info.value)


def broken(path, value):
    data = json.loads(json.dumps(PIPONI_FILE))
    target = data
    for key in path[:-1]:
        target = target[key]
    if value is KeyError:
        del target[path[-1]]
    else:
        target[path[-1]] = value
    return data


@pytest.mark.parametrize("path, value, field", [
    (("outcomes",), "00 01", "outcomes"),
    (("outcomes", 2), 10, "outcomes[2]"),
    (("ensembles", 0, "name"), 3, "ensembles[0].name"),
    (("ensembles", 1, "parts"), KeyError, "ensembles[1].parts"),
    (("ensembles", 0, "parts", 1, "prob"), 1, "ensembles[0].parts[1].prob"),
    (("ensembles", 0, "parts", 1, "prob"), "1/0", "ensembles[0].parts[1].prob"),
    (("ensembles", 2, "parts", 0, "outcomes"), ["00", "22"], "ensembles[2].parts[0].outcomes"),
    (("ensembles", 2, "parts", 1, "outcomes"), ["01", "10", "01"], "ensembles[2].parts[1].outcomes[2]"),
    (("ensembles", 2, "parts", 0, "weight"), "1", "ensembles[2].parts[0].weight"),
])
def test_format_errors_name_the_field(path, value, field):
    with pytest.raises(FileFormatError) as info:
        fileio.decode_space(broken(path, value))
    assert info.value.field == field


def test_decode_does_not_validate_partitions():
    data = broken(("ensembles", 0, "parts", 1, "outcomes"), ["10"])
    frame, _ = fileio.decode_space(data)
    assert len(frame.ensembles[0].partition.parts[1]) == 1


def test_extension_file(piponi):
    space = piponi.frame.space
    data = {"weights": {"00": "-1/2", "01": "1/2", "10": "1/2", "11": "1/2"}}
    d = fileio.decode_extension(data, space)
    assert d.weight("00") == Scalar(Fraction(-1, 2))
    assert fileio.encode_extension(d) == data


def test_extension_file_errors(piponi):
    space = piponi.frame.space
    with pytest.raises(FileFormatError) as info:
        fileio.decode_extension({"weights": {"00": "1", "01": "0", "10": "0"}}, space)
    assert info.value.field == "weights.11"
    with pytest.raises(FileFormatError) as info:
        fileio.decode_extension({"weights": {"00": "1", "01": "0", "10": "0", "11": "0", "xx": "0"}}, space)
    assert info.value.field == "weights.xx"
    with pytest.raises(DistributionError):
        fileio.decode_extension({"weights": {"00": "1", "01": "1", "10": "0", "11": "0"}}, space)


def test_async_round_trip(tmp_path, hardy_hidden):
    space_path = tmp_path / "hardy.json"
    weights_path = tmp_path / "weights.json"
    d = SignedDistribution(hardy_hidden.frame.space, tuple([Scalar(Fraction(1, 16))] * 16))

    async def run():
        await fileio.dump_json(fileio.encode_space(hardy_hidden.frame, hardy_hidden.observed), space_path)
        await fileio.dump_json(fileio.encode_extension(d), weights_path)
        frame, obs = await fileio.load_space(space_path)
        return frame, obs, await fileio.load_extension(weights_path, frame.space)

    frame, obs, loaded = asyncio.run(run())
    assert frame == hardy_hidden.frame
    assert obs == hardy_hidden.observed
    assert loaded == d
    assert space_path.read_text(encoding="utf-8").endswith("\n")


def test_async_basis_file(tmp_path):
    path = tmp_path / "bases.json"
    path.write_text('{"bases": [[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]]}', encoding="utf-8")
    s = asyncio.run(fileio.load_basis_file(path))
    assert len(s.bases) == 1


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        asyncio.run(fileio.load_space(tmp_path / "missing.json"))
