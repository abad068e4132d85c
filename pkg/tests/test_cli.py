"""Command-line surface: exit codes, reports, and the worked examples."""

import json

import pytest

from ratsynth.apt import apt_base
from ratsynth.cli import main
from ratsynth.jsonio import to_json
from ratsynth.lattice import diamond
from ratsynth.ltl import parse


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spe_check_on_dotted_profile_holds(capsys):
    code, out, _ = run(capsys, "check", "--concept", "spe",
                       "--arena", "fixture:fig1",
                       "--profile", "fixture:fig1-dotted",
                       "--objectives", "fixture:fig1-F")
    assert code == 0 and "holds" in out


def test_spe_check_on_dashed_profile_fails_with_witness(capsys):
    code, out, _ = run(capsys, "--json", "check", "--concept", "spe",
                       "--arena", "fixture:fig1",
                       "--profile", "fixture:fig1-dashed",
                       "--objectives", "fixture:fig1-F")
    assert code == 1
    report = json.loads(out)
    assert report["holds"] is False
    assert report["witness"]["history"][-1] == "n2"
    assert report["witness"]["deviator"] == 1


def test_nash_check_with_companion_objectives(capsys):
    code, out, _ = run(capsys, "check", "--concept", "nash",
                       "--arena", "fixture:p2p",
                       "--profile", "fixture:titfortat")
    assert code == 0 and "holds" in out


def test_unknown_fixture_is_an_input_error(capsys):
    code, _, err = run(capsys, "check", "--concept", "nash",
                       "--arena", "fixture:missing",
                       "--profile", "fixture:titfortat")
    assert code == 2 and "unknown fixture" in err


def test_malformed_json_is_an_input_error(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "validate", "--arena", str(bad))
    assert code == 2 and "input error" in err


def test_validate_and_outcome(capsys):
    code, _, _ = run(capsys, "validate", "--arena", "fixture:fig1")
    assert code == 0
    code, out, _ = run(capsys, "outcome", "--arena", "fixture:fig1",
                       "--profile", "fixture:fig1-dotted")
    assert code == 0 and "n2" in out


def test_synthesize_emits_certified_profile(capsys):
    code, out, _ = run(capsys, "--json", "synthesize", "--concept", "nash",
                       "--arena", "fixture:p2p", "--memory", "2")
    assert code == 0
    report = json.loads(out)
    assert report["certified"] is True
    assert report["solution"]["format"] == "ratsynth.profile/1"


def test_json_reports_are_deterministic(capsys):
    argv = ("--json", "check", "--concept", "nash", "--arena", "fixture:p2p",
            "--profile", "fixture:titfortat")
    _, out1, _ = run(capsys, *argv)
    _, out2, _ = run(capsys, *argv)
    d1, d2 = json.loads(out1), json.loads(out2)
    d1.pop("duration_s"), d2.pop("duration_s")
    assert d1 == d2


def test_apt_empty_reports_witness(capsys, tmp_path):
    sigma = (frozenset(), frozenset({"a"}))
    doc = tmp_path / "apt.json"
    doc.write_text(json.dumps(to_json(apt_base(parse("F a"), sigma))))
    code, out, _ = run(capsys, "--json", "apt", "empty", "--apt", str(doc))
    assert code == 1
    report = json.loads(out)
    assert report["empty"] is False
    assert report["witness"]["format"] == "ratsynth.rtree/1"


def test_lattice_validate_and_achievable(capsys, tmp_path):
    lat = tmp_path / "lat.json"
    lat.write_text(json.dumps(to_json(diamond())))
    code, _, _ = run(capsys, "lattice", "validate", "--lattice", str(lat))
    assert code == 0


def test_esl_eval_reports_formula(capsys):
    code, out, _ = run(capsys, "esl", "eval", "--concept", "nash",
                       "--arena", "fixture:fig1",
                       "--objectives", "fixture:fig1-F",
                       "--memory", "1", "--history-bound", "2")
    assert code == 0 and "exists y0:0." in out
