import csv
import json

import pytest

from radcond import harness
from radcond.errors import ConvergenceError, ParameterError


def test_campaign_validation():
    with pytest.raises(ParameterError):
        harness.Campaign("x", "nope")
    with pytest.raises(ParameterError):
        harness.Campaign("x", "kernels", r_grid=[10, 5, 1000])
    with pytest.raises(ParameterError):
        harness.Campaign("x", "integral-table", r_grid=[10, 100, 500])
    with pytest.raises(ParameterError):
        harness.Campaign("x", "fb", tolerances={"bogus": 1})
    c = harness.Campaign("x", "radiation")
    assert c.r_grid == [10, 100, 1000, 10000] and len(c.theta_grid) == 15


def test_campaign_dict_round_trip():
    c = harness.Campaign("x", "kernels", config={"k": 2.0}, tolerances={"green": 1e-5}, seed=4)
    assert harness.Campaign.from_dict(json.loads(json.dumps(c.to_dict()))) == c


def test_empty_report_is_valid_json(tmp_path):
    rep = harness.Report("empty", "fb")
    path = tmp_path / "r.json"
    harness.emit_report(rep, "json", path)
    d = json.loads(path.read_text())
    assert d["checks"] == [] and d["campaign"] == "empty"


def test_json_round_trip(tmp_path):
    rep = harness.run_campaign(harness.Campaign("fb", "fb"))
    path = tmp_path / "r.json"
    harness.emit_report(rep, "json", path)
    back = harness.load_report(path)
    assert back.to_dict() == rep.to_dict()


def test_csv_row_count(tmp_path):
    rep = harness.run_campaign(harness.Campaign("fb", "fb"))
    path = tmp_path / "r.csv"
    harness.emit_report(rep, "csv", path)
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == len(rep.checks) + len(rep.samples)
    assert sum(r["row_type"] == "check" for r in rows) == len(rep.checks)


def test_emit_errors(tmp_path):
    with pytest.raises(OSError, match="cannot write report"):
        harness.emit_report(harness.Report("x", "fb"), "json", tmp_path / "missing" / "r.json")
    with pytest.raises(ParameterError):
        harness.emit_report(harness.Report("x", "fb"), "xml", tmp_path / "r.xml")


@pytest.mark.parametrize("kind", ["fb", "specfun", "perturb"])
def test_deterministic_modulo_timestamp(kind):
    a = harness.run_campaign(harness.Campaign(kind, kind, seed=11))
    b = harness.run_campaign(harness.Campaign(kind, kind, seed=11))
    assert harness.report_json(a, drop_timestamp=True) == harness.report_json(b, drop_timestamp=True)


def test_seed_changes_random_data():
    a = harness.run_campaign(harness.Campaign("fb", "fb", seed=1))
    b = harness.run_campaign(harness.Campaign("fb", "fb", seed=2))
    assert a.samples != b.samples


def test_convergence_failure_is_indeterminate():
    def boom():
        raise ConvergenceError("budget", best=1.0, bound=0.5)

    c = harness._guarded("x", 0.5, 0.1, "abs-diff", boom)
    assert c.verdict == "indeterminate" and not c.passed
    rep = harness.Report("x", "fb", [c])
    assert rep.exit_code() == 2
    rep.checks.append(harness._judge("y", 2.0, 1.0, 0.1, "abs-diff"))
    assert rep.exit_code() == 1


def test_judge_comparisons():
    assert harness._judge("a", 0.55, 0.5, 0.1, "abs-diff").passed
    assert not harness._judge("a", 0.65, 0.5, 0.1, "abs-diff").passed
    assert harness._judge("a", 2.0, 1.0, 3.0, "at-most").passed
    assert not harness._judge("a", 1.3, 1.4, 1.4, "at-least").passed
    assert harness._judge("a", {"headline": 1.5}, 1.5, 0.1, "abs-diff").passed
    assert not harness._judge("a", None, 1.5, 0.1, "abs-diff").passed


def test_nonfinite_values_serialize():
    rep = harness.Report("x", "fb", [harness._judge("a", float("inf"), 1.0, 3.0, "at-most")])
    assert json.loads(harness.report_json(rep))["checks"][0]["fitted"] is None


def test_widest_delta():
    assert harness.widest_delta(1.0) == 0.45
    assert harness.widest_delta(0.5) == 0.45
    assert harness.widest_delta(2 ** 0.5) == pytest.approx(0.0857, abs=1e-4)


def test_regimes_cover_all_mode_types():
    from radcond import modes

    cfg = modes.ProblemConfig(k=1.0, delta=0.45)
    names = [n for n, _, _ in harness.regime_densities(cfg, 0.0)]
    assert "propagating" in names and "evanescent" in names
    assert sum(n.endswith("propagating-side") for n in names) == 2
    assert sum(n.endswith("evanescent-side") for n in names) == 2


def test_radiation_claim_coverage(radiation_report):
    anchors = {c.claim_anchor for c in radiation_report.checks}
    assert set(harness.RADIATION_CLAIMS) <= anchors
    assert all(c.verdict in ("pass", "fail", "indeterminate") for c in radiation_report.checks)


def test_radiation_claims_hold_for_integer_case(radiation_report):
    by = {c.claim_anchor: c for c in radiation_report.checks}
    failed = [a for a in harness.RADIATION_CLAIMS if not by[a].passed]
    assert failed == []


def test_merge_reports_prefixes_kinds():
    a = harness.run_campaign(harness.Campaign("fb", "fb"))
    b = harness.run_campaign(harness.Campaign("specfun", "specfun"))
    m = harness.merge_reports("all", [a, b])
    assert len(m.checks) == len(a.checks) + len(b.checks)
    assert m.checks[0].claim_anchor.startswith("fb:")
