"""
Tests for the command line application and its exit codes.
"""

import asyncio
import json

import pytest

import signedprob_app
from signedprob import fileio, scenarios
from signedprob.extension import build_system, solve_signed, verify_extension
from signedprob.scalar import format_scalar
from signedprob.space import negative_mass

BELL_SYMMETRIC = {
    "+++": "1/8", "++-": "1/8", "+-+": "1/8-1/8*sqrt2", "+--": "1/8+1/8*sqrt2",
    "-++": "1/8+1/8*sqrt2", "-+-": "1/8-1/8*sqrt2", "--+": "1/8", "---": "1/8",
}
FLIP = "(+++ ---)(++- --+)(+-+ -+-)(+-- -++)"


def run(*argv):
    return asyncio.run(signedprob_app.main(list(argv)))


def write_json(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def write_scenario(tmp_path, bundle, name="space.json"):
    return write_json(tmp_path / name, fileio.encode_space(bundle.frame, bundle.observed))


def test_check(tmp_path, capsys, piponi):
    assert run("check", write_scenario(tmp_path, piponi)) == 0
    out = capsys.readouterr().out
    assert out.startswith("ok: 4 outcomes, 3 ensembles")
    assert "  parity: 2 parts" in out


def test_check_missing_and_malformed_files(tmp_path, capsys):
    assert run("check", str(tmp_path / "missing.json")) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{\"outcomes\": [", encoding="utf-8")
    assert run("check", str(bad)) == 2
    err = capsys.readouterr().err
    assert "error: cannot read" in err
    assert "line 1" in err


def test_check_invalid_space(tmp_path, capsys, piponi):
    data = fileio.encode_space(piponi.frame, piponi.observed)
    data["ensembles"][0]["parts"][0]["prob"] = "1"
    assert run("check", write_json(tmp_path / "space.json", data)) == 1
    err = capsys.readouterr().err
    assert "is not a valid observation space" in err
    assert "  - ensemble 'left': probabilities sum to 2, not 1" in err


def test_extend_text_output(tmp_path, capsys, piponi):
    path = write_scenario(tmp_path, piponi)
    assert run("extend", path) == 0
    out = capsys.readouterr().out
    assert "status: unique" in out
    assert "rank: 4 of 4" in out
    assert "  00: -1/2" in out
    assert "extends observed distribution: true" in out

    assert run("extend", path, "--mode", "traditional") == 3
    out = capsys.readouterr().out
    assert "status: infeasible" in out
    assert "certificate (row multipliers):" in out

    assert run("extend", path, "--mode", "min-negativity") == 0
    assert "negative mass: 1/2" in capsys.readouterr().out


def test_extend_json_output(tmp_path, capsys, bell):
    path = write_scenario(tmp_path, bell)
    assert run("extend", path, "--json") == 0
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "family"
    assert report["rank"] == 7
    assert report["variables"] == 8
    assert report["nullspace_dimension"] == 1
    assert report["extends_observed"] is True
    assert report["certificate"] is None

    assert run("extend", path, "--json", "--mode", "min-negativity") == 0
    assert json.loads(capsys.readouterr().out)["negative_mass"] == "-1/4+1/4*sqrt2"

    assert run("extend", path, "--json", "--mode", "traditional") == 3
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "infeasible"
    assert report["witness"] is None
    assert len(report["certificate"]) == 13
    assert "total" in report["certificate"]


def test_scenario_output(capsys):
    assert run("scenario", "bell", "--angles", "0,2,3") == 0
    frame, obs = fileio.decode_space(json.loads(capsys.readouterr().out))
    bundle = scenarios.bell()
    assert frame == bundle.frame
    assert obs == bundle.observed


@pytest.mark.parametrize("argv", [
    ("scenario", "nowhere"),
    ("scenario", "bell", "--angles", "0,2,5"),
    ("scenario", "bell", "--angles", "0,2"),
    ("scenario", "piponi", "--angles", "0,1,2"),
])
def test_scenario_errors(argv, capsys):
    assert run(*argv) == 2
    assert capsys.readouterr().err.startswith("error: ")


def bell_files(tmp_path, bell):
    space = write_scenario(tmp_path, bell)
    witness = solve_signed(build_system(bell.frame, bell.observed)).witness
    extension = write_json(tmp_path / "weights.json", fileio.encode_extension(witness))
    return space, extension


@pytest.mark.parametrize("group", [("--perm", FLIP), ("--auto",)])
def test_symmetrize(tmp_path, capsys, bell, group):
    space, extension = bell_files(tmp_path, bell)
    assert run("symmetrize", space, extension, *group) == 0
    assert json.loads(capsys.readouterr().out) == {"weights": BELL_SYMMETRIC}


def test_symmetrize_errors(tmp_path, capsys, bell):
    space, extension = bell_files(tmp_path, bell)
    assert run("symmetrize", space, extension, "--perm", "(+++ ++-)") == 1
    err = capsys.readouterr().err
    assert "error: not an automorphism" in err
    assert "  - (+++ ++-): ensemble 'BC' is not mapped onto an ensemble partition" in err

    assert run("symmetrize", space, extension, "--perm", "(+++ xyz)") == 2
    assert "malformed permutation" in capsys.readouterr().err

    uniform = write_json(tmp_path / "uniform.json",
                         {"weights": {label: "1/8" for label in bell.frame.space.labels}})
    assert run("symmetrize", space, uniform, "--perm", FLIP) == 1
    assert "not an extension" in capsys.readouterr().err

    assert run("symmetrize", space, str(tmp_path / "none.json"), "--auto") == 2


def test_ks_bundled_system(capsys):
    assert run("ks") == 3
    out = capsys.readouterr().out
    assert "bases: 9" in out
    assert "distinct rays: 18" in out
    assert "18-ray, 9-basis profile: yes" in out
    assert "parity obstruction: yes" in out
    assert "consistent selections: 0" in out


def test_ks_custom_systems(tmp_path, capsys):
    standard = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    path = write_json(tmp_path / "one.json", {"bases": [standard]})
    assert run("ks", "--file", path) == 0
    assert "consistent selections: 4" in capsys.readouterr().out

    assert run("ks", "--file", path, "--limit", "1") == 0
    assert "consistent selections: 1" in capsys.readouterr().out
    assert run("ks", "--file", path, "--limit", "0") == 2
    capsys.readouterr()

    paired = [[1, 1, 0, 0], [1, -1, 0, 0], [0, 0, 1, 1], [0, 0, 1, -1]]
    path = write_json(tmp_path / "two.json", {"bases": [standard, paired]})
    assert run("ks", "--file", path) == 0
    out = capsys.readouterr().out
    assert "consistent selections: 16" in out
    assert "parity obstruction: no" in out

    skew = [[1, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    path = write_json(tmp_path / "skew.json", {"bases": [skew]})
    assert run("ks", "--file", path) == 1
    assert "basis system is not orthogonal" in capsys.readouterr().err

    path = write_json(tmp_path / "short.json", {"bases": [standard[:3]]})
    assert run("ks", "--file", path) == 2


def test_usage_errors(capsys):
    assert run() == 2
    assert run("bogus") == 2
    assert run("extend", "x.json", "--mode", "quantum") == 2


def test_log_file(tmp_path, capsys, piponi):
    log = tmp_path / "run.log"
    assert run("--log-level", "INFO", "--log-file", str(log), "check", write_scenario(tmp_path, piponi)) == 0
    assert "Attached" in log.read_text(encoding="utf-8")


def test_extend_json_witness_revalidates(tmp_path, capsys, bell):
    path = write_scenario(tmp_path, bell)
    assert run("extend", path, "--json", "--mode", "min-negativity") == 0
    report = json.loads(capsys.readouterr().out)
    weights = write_json(tmp_path / "witness.json", report["witness"])

    async def reload():
        frame, obs = await fileio.load_space(path)
        return frame, obs, await fileio.load_extension(weights, frame.space)

    frame, obs, d = asyncio.run(reload())
    assert verify_extension(frame, obs, d) == []
    assert format_scalar(negative_mass(d)) == report["negative_mass"]


def test_check_merged_label_collision(tmp_path, capsys):
    data = {"outcomes": ["a", "b", "a+b"],
            "ensembles": [{"name": "E", "parts": [{"outcomes": ["a", "b"], "prob": "1/2"},
                                                  {"outcomes": ["a+b"], "prob": "1/2"}]}]}
    assert run("check", write_json(tmp_path / "clash.json", data)) == 1
    err = capsys.readouterr().err
    assert "is not a valid observation space" in err
    assert "  - merged outcome label 'a+b' collides with an existing outcome label" in err


def test_report_bell_forced_probabilities(capsys):
    assert run("report", "--scenario", "bell", "--event", "+-+,-+-", "--event", "+++") == 0
    out = capsys.readouterr().out
    assert "outcomes: 8 (fat outcomes merged: no)" in out
    assert "traditional: infeasible" in out
    assert "signed: family (rank 7 of 8)" in out
    assert "support obstruction: none" in out
    assert "  {+-+,-+-}: 1/4-1/4*sqrt2" in out
    assert "  {+++}: not forced" in out


def test_report_hardy_hidden_support_argument(capsys):
    assert run("report", "--scenario", "hardy-hidden", "--json") == 0
    report = json.loads(capsys.readouterr().out)
    assert report["traditional"] == "infeasible"
    assert report["signed"] in ("unique", "family")
    assert len(report["obstruction"]) == 1
    assert report["obstruction"][0].startswith("XX:{")


def test_report_merges_fat_outcomes(tmp_path, capsys):
    data = {"outcomes": ["a", "b", "c"],
            "ensembles": [{"name": "E", "parts": [{"outcomes": ["a", "b"], "prob": "1/2"},
                                                  {"outcomes": ["c"], "prob": "1/2"}]}]}
    path = write_json(tmp_path / "fat.json", data)
    assert run("report", path, "--json", "--event", "a+b") == 0
    report = json.loads(capsys.readouterr().out)
    assert report == {
        "outcomes": 2, "merged": True, "traditional": "unique", "signed": "unique",
        "rank": 2, "obstruction": [], "forced": {"{a+b}": "1/2"},
    }


def test_report_errors(tmp_path, capsys, piponi):
    assert run("report", "--scenario", "piponi", "--event", "00,zz") == 2
    assert "unknown outcome label 'zz'" in capsys.readouterr().err
    assert run("report", "--scenario", "nowhere") == 2
    assert run("report") == 2
    assert run("report", write_scenario(tmp_path, piponi), "--scenario", "piponi") == 2
    assert run("report", str(tmp_path / "missing.json")) == 2
