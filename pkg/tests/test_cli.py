import csv
import json

from hapscs.cli import main


def test_run_writes_outputs(tmp_path, capsys):
    out = tmp_path / "res"
    rc = main(["run", "--case", "B", "--alphas", "0.2", "0.8", "--strategies", "all-on", "haps-cs", "terrestrial",
               "--seeds", "2", "--out", str(out)])
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["records"] == 2 * 3 * 2
    assert (out / "manifest.json").exists() and (out / "ee-vs-alpha.csv").exists()


def test_run_with_scenario_file(tmp_path, capsys):
    scen = tmp_path / "s.json"
    scen.write_text(json.dumps({"case_study": "A", "num_sbs": 16, "p_min_dbm": -75}))
    rc = main(["run", "--scenario", str(scen), "--alphas", "0.5", "--pmins", "-80", "-60", "--strategies",
               "haps-cs", "haps-cs-noqos", "--seeds", "1", "--out", str(tmp_path / "o")])
    assert rc == 0
    rows = list(csv.DictReader(open(tmp_path / "o" / "power-vs-pmin.csv")))
    assert {r["p_min_dbm"] for r in rows} == {"-80.0", "-60.0"}


def test_error_is_json(tmp_path, capsys):
    rc = main(["run", "--sbs", "15", "--out", str(tmp_path)])
    assert rc == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ConfigError" and "perfect square" in err["message"]


def test_bad_scenario_is_json(tmp_path, capsys):
    scen = tmp_path / "s.json"
    scen.write_text('{"case_study": "A", "oops": 1}')
    assert main(["snapshot", "--scenario", str(scen), "--strategy", "haps-cs"]) == 1
    assert "unknown key" in json.loads(capsys.readouterr().err)["message"]


def test_snapshot(tmp_path, capsys):
    out = tmp_path / "snap.csv"
    assert main(["snapshot", "--strategy", "haps-cs", "--pmin", "-70", "--alpha", "0.8", "--out", str(out)]) == 0
    rows = list(csv.DictReader(open(out)))
    assert len(rows) == 49
    counts = json.loads(capsys.readouterr().out)["counts"]
    assert sum(counts.values()) == 49


def test_snapshot_stdout(capsys):
    assert main(["snapshot", "--strategy", "sorting", "--case", "A"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("sbs,x_m,y_m") and len(lines) == 50


def test_linkbudget(capsys):
    assert main(["linkbudget", "--sbs", "24"]) == 0
    lb = json.loads(capsys.readouterr().out)
    assert lb["mbs"]["los_probability"] == 1.0
    assert abs(lb["haps"]["pathloss_db"] - 126.5) < 0.2
    assert main(["linkbudget", "--sbs", "99"]) == 1
