"""The nine acceptance criteria, each at its stated tolerance.

Every test prints one PASS/FAIL line (also collected into the terminal summary).
"""
import time


from radcond import harness


def _record(log, number, title, checks, elapsed, budget=None):
    bad = [c for c in checks if not c.passed]
    ok = not bad and bool(checks) and (budget is None or elapsed <= budget)
    parts = [f"{len(checks) - len(bad)}/{len(checks)} checks", f"{elapsed:.0f}s"]
    if budget is not None:
        parts.append(f"budget {budget:.0f}s")
    if bad:
        parts.append("failing: " + ", ".join(f"{c.claim_anchor} ({_shown(c)})" for c in bad))
    line = f"criterion {number} {'PASS' if ok else 'FAIL'} {title}: " + "; ".join(parts)
    log.append(line)
    print(line)
    return ok, line


def _shown(c):
    f = c.fitted["headline"] if isinstance(c.fitted, dict) and "headline" in c.fitted else c.fitted
    return c.verdict if f is None else f"{c.verdict} {f:.3g}"


def _timed(campaign):
    t = time.time()
    rep = harness.run_campaign(campaign)
    return rep, time.time() - t


def test_1_integral_decay_table(acceptance_log):
    rep, dt = _timed(harness.Campaign("table", "integral-table"))
    assert len(rep.checks) == 10
    ok, line = _record(acceptance_log, 1, "decay table exponents within 0.1", rep.checks, dt, 120)
    assert ok, line


def test_2_mode_radiation_bounded(acceptance_log):
    c = harness.Campaign("radiation", "radiation", config={"claims": False})
    rep, dt = _timed(c)
    ks = {a.split("/")[1] for a in (ch.claim_anchor for ch in rep.checks)}
    assert ks == {"k=1.414", "k=1", "k=0.5"}
    ok, line = _record(acceptance_log, 2, "r^1/2|v| and r^3/2|residual| bounded (ratio <= 3)", rep.checks, dt, 300)
    assert ok, line


def test_3_cell_norm_decay(acceptance_log):
    rep, dt = _timed(harness.Campaign("part-a", "part-a"))
    h1 = [c for c in rep.checks if c.claim_anchor.startswith("cell-norm/")]
    ok, line = _record(acceptance_log, 3, "cell H1 exponents (1.5, 2.0, >= 4)", h1, dt)
    assert ok, line


def test_4_floquet_bloch(acceptance_log):
    rep, dt = _timed(harness.Campaign("fb", "fb"))
    ok, line = _record(acceptance_log, 4, "round trip, quasi-periodicity, Parseval <= 1e-12", rep.checks, dt)
    assert ok, line


def _pick(rep, prefix):
    return [c for c in rep.checks if c.claim_anchor.startswith(prefix)]


def test_5_kernel_asymptotics(acceptance_log, kernels_report):
    checks = _pick(kernels_report, "kernel/")
    assert len(checks) == 4
    ok, line = _record(acceptance_log, 5, "kernel exponents within 0.15, gap lemma on 1e4 samples", checks,
                       kernels_report.environment["elapsed_s"])
    assert ok, line


def test_6_layer_potential_radiation(acceptance_log, kernels_report):
    checks = _pick(kernels_report, "layer/field") + _pick(kernels_report, "layer/residual")
    assert len(checks) == 2
    ok, line = _record(acceptance_log, 6, "layer potential r^1/2|u|, r^3/2|residual| ratio <= 3", checks,
                       kernels_report.environment["elapsed_s"])
    assert ok, line


def test_7_green_representation(acceptance_log, kernels_report):
    checks = _pick(kernels_report, "layer/green")
    ok, line = _record(acceptance_log, 7, "point-source representation error <= 1e-6 at 20 points", checks,
                       kernels_report.environment["elapsed_s"])
    assert ok, line


def test_8_special_functions(acceptance_log):
    rep, dt = _timed(harness.Campaign("specfun", "specfun"))
    assert len(rep.checks) == 4
    ok, line = _record(acceptance_log, 8, "Fresnel, Hankel, Wronskian, generalized Fresnel", rep.checks, dt)
    assert ok, line


def test_9_perturbation_map(acceptance_log):
    rep, dt = _timed(harness.Campaign("perturb", "perturb"))
    wanted = ("perturb/identity-outside", "perturb/jacobian-positive", "perturb/boundary-map")
    checks = [c for c in rep.checks if c.claim_anchor in wanted]
    assert len(checks) == 3
    ok, line = _record(acceptance_log, 9, "identity outside box, det > 0 at amplitude 0.1, boundary exact", checks, dt)
    assert ok, line
