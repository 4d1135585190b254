import json

import pytest

from driveshield.cli import _parse_seeds, main


def test_parse_seeds_forms():
    assert _parse_seeds("7") == [7]
    assert _parse_seeds("0:4") == [0, 1, 2, 3]
    assert _parse_seeds("2,5,9") == [2, 5, 9]


def test_version_exits_zero(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "driveshield" in capsys.readouterr().out


def test_run_expect_safe_passes_for_shield(capsys):
    rc = main(["run", "--scenario", "merge", "--robot", "shield",
               "--human", "social", "--seeds", "0:2", "--expect-safe"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "unsafe=0.0000" in out


def test_run_expect_safe_fails_for_aggressive(capsys):
    # seed 1 is a known collision for the unshielded controller
    rc = main(["run", "--scenario", "merge", "--robot", "aggressive",
               "--human", "social", "--seeds", "1", "--expect-safe"])
    err = capsys.readouterr().err
    assert rc == 1
    assert "expected zero unsafe" in err


def test_run_writes_csv(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    rc = main(["run", "--scenario", "merge", "--robot", "shield",
               "--human", "social", "--seeds", "0:2", "--csv", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 3
    assert lines[0].startswith("scenario,robot,human,seed,outcome")


def test_run_rejects_unknown_names(capsys):
    assert main(["run", "--scenario", "motorway"]) == 2
    assert main(["run", "--scenario", "merge", "--robot", "teleport"]) == 2
    assert main(["run", "--scenario", "merge", "--human", "psychic"]) == 2
    assert main(["run", "--scenario", "merge", "--human", "remote"]) == 2


def test_run_record_frames(tmp_path, capsys):
    out = tmp_path / "frames.json"
    rc = main(["run", "--scenario", "merge", "--robot", "shield",
               "--human", "social", "--seeds", "5", "--record", str(out)])
    assert rc == 0
    frames = json.loads(out.read_text())
    assert frames[0]["type"] == "hello"
    assert frames[-1]["type"] == "result"


def test_verify_soundness_quick(capsys):
    rc = main(["verify", "--check", "soundness", "--samples", "2000"])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.startswith("PASS transformer-soundness")


def test_verify_isrec_quick(capsys):
    rc = main(["verify", "--check", "isrec", "--isrec-states", "10",
               "--isrec-rollouts", "5"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "recoverability-soundness" in out


def test_scenario_list(capsys):
    assert main(["scenario", "list"]) == 0
    names = capsys.readouterr().out.split()
    assert names == ["cross", "merge", "turn", "turn_no_stop", "two_lanes"]


def test_scenario_show(capsys):
    assert main(["scenario", "show", "merge"]) == 0
    assert "name = merge" in capsys.readouterr().out
    assert main(["scenario", "show", "motorway"]) == 2


def test_scenario_save_check_round_trip(tmp_path, capsys):
    path = tmp_path / "turn.toml"
    assert main(["scenario", "save", "turn", str(path)]) == 0
    assert main(["scenario", "check", str(path)]) == 0
    out = capsys.readouterr().out
    assert "ok: turn" in out


def test_scenario_check_rejects_garbage(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text("name = broken\n[physical]\ntau = -1\n")
    assert main(["scenario", "check", str(bad)]) == 2
    assert main(["scenario", "check", str(tmp_path / "missing.toml")]) == 2
