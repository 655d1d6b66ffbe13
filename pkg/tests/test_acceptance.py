"""Acceptance criteria, one test each, at the stated tolerances and time limits.

Each test records a line in ACCEPTANCE; conftest prints them after the run.
"""
import time

from tribody import checks
from tribody.report import ERRATUM, PASS

ACCEPTANCE = {}


def run(fn, *args, **kw):
    t0 = time.perf_counter()
    reps = fn(*args, **kw)
    return reps, time.perf_counter() - t0


def record(n, ok, elapsed, limit, detail=""):
    ok = ok and elapsed < limit
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s < {limit}s)" + (f" {detail}" if detail else "")
    ACCEPTANCE[n] = line
    print(line)
    return ok


def failing(reps, allowed=(PASS,)):
    return [r.check_id for r in reps if r.status not in allowed]


SEED = 20240601


def test_criterion_1_commutator():
    reps, dt = run(checks.check_commutator, SEED)
    bad = failing(reps)
    assert record(1, not bad, dt, 1, str(bad or "")), bad
    assert len(reps[0].items) == 3


def test_criterion_2_determinants():
    reps, dt = run(checks.check_determinants, SEED)
    bad = failing(reps)
    assert {r.check_id for r in reps} == {"c2:det_rho", "c2:det_m"}
    assert record(2, not bad, dt, 1, str(bad or "")), bad


def test_criterion_3_gauge():
    reps, dt = run(checks.check_gauge, SEED)
    bad = failing(reps)
    assert record(3, not bad, dt, 5, str(bad or "")), bad


def test_criterion_4_eigen_identities():
    reps, dt = run(checks.check_eigen_identities, SEED)
    bad = failing(reps)
    assert record(4, not bad, dt, 10, str(bad or "")), bad


def test_criterion_5_charts():
    reps, dt = run(checks.check_charts, SEED)
    # printed (t,u) operators may differ, but only as errata whose derived operator agrees
    bad = failing(reps, (PASS, ERRATUM))
    bad += [r.check_id for r in reps if r.status == ERRATUM and not r.check_id.startswith("c5:q->tu")]
    oracle = [r for r in reps if not r.check_id.startswith("c5:q->tu")]
    assert len(oracle) == 6
    assert record(5, not bad, dt, 60, str(bad or "")), bad


def test_criterion_6_es_spectra():
    reps, dt = run(checks.check_es_spectra, SEED)
    bad = failing(reps)
    assert record(6, not bad, dt, 30, str(bad or "")), bad


def test_criterion_7_qes_spectra():
    reps, dt = run(checks.check_qes_spectra, SEED)
    bad = failing(reps)
    assert record(7, not bad, dt, 60, str(bad or "")), bad


def test_criterion_8_lie_realizations():
    reps, dt = run(checks.check_lie, SEED)
    verdict = checks.lie_criterion_ok(reps)
    bad = sorted(k for k, v in verdict.items() if not v)
    assert record(8, not bad, dt, 30, f"no catalog match: {bad}" if bad else ""), bad


def test_criterion_9_geometry():
    reps, dt = run(checks.check_geometry, SEED)
    bad = failing(reps)
    assert record(9, not bad, dt, 120, str(bad or "")), [(r.check_id, r.notes) for r in reps if r.check_id in bad]


def test_criterion_10_w_coordinates():
    reps, dt = run(checks.check_w_numeric, SEED)
    more, dt2 = run(checks.check_W_numeric, SEED)
    reps += more
    bad = failing(reps)
    assert any(r.check_id.startswith("c10:DeltaR_W") for r in reps)
    assert record(10, not bad, dt + dt2, 10, str(bad or "")), [(r.check_id, r.notes) for r in reps if r.check_id in bad]


def test_criterion_11_appendix_invariants():
    reps, dt = run(checks.check_appendix, SEED)
    inv = [r for r in reps if r.check_id == "c11:invariants"]
    bad = failing(inv)
    assert len(inv[0].params["masses"]) == 3
    assert record(11, not bad, dt, 5, str(bad or "")), bad


def test_criterion_12_classical():
    reps, dt = run(checks.check_classical, SEED)
    bad = failing(reps)
    assert record(12, not bad, dt, 1, str(bad or "")), bad
