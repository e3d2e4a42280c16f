import json
import subprocess
import sys

from radcond import cli


def test_fb_json(tmp_path, capsys):
    out = tmp_path / "fb.json"
    assert cli.main(["verify-fb", "--out", str(out), "--seed", "3"]) == 0
    d = json.loads(out.read_text())
    assert d["environment"]["seed"] == 3 and all(c["pass"] for c in d["checks"])
    assert "3/3 checks passed" in capsys.readouterr().out


def test_specfun_csv(tmp_path):
    out = tmp_path / "s.csv"
    assert cli.main(["verify-specfun", "--format", "csv", "--out", str(out), "--quiet"]) == 0
    assert out.read_text().startswith("row_type,claim_anchor")


def test_config_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"name": "tiny", "kind": "fb", "config": {"seeds": 2}, "seed": 9}))
    out = tmp_path / "r.json"
    assert cli.main(["verify-fb", "--config", str(cfg), "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["campaign"] == "tiny" and len(d["samples"]) == 2 * 2 * 3


def test_config_kind_mismatch(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"kind": "kernels"}))
    assert cli.main(["verify-fb", "--config", str(cfg)]) == 1


def test_bad_r_grid_is_an_error():
    assert cli.main(["verify-integrals", "--r-min", "100", "--r-max", "1000", "--r-points", "5"]) == 1


def test_failing_check_gives_exit_one(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"kind": "fb", "tolerances": {"fb": 1e-30}}))
    assert cli.main(["verify-fb", "--config", str(cfg), "--quiet"]) == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "radcond", "verify-fb", "--quiet"], capture_output=True, text=True)
    assert res.returncode == 0 and "checks passed" in res.stdout
