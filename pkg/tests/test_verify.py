import json

import pytest

from quasiqg import verify as vf


def test_config_guards():
    for bad in (dict(n=4), dict(n=1), dict(s_max=0), dict(suites=("nope",)), dict(fault="x"), dict(threads=0)):
        with pytest.raises(vf.ConfigError):
            vf.SuiteConfig(**bad)


def test_check_seeds_stable():
    assert vf.check_seed(1, "a") == vf.check_seed(1, "a")
    assert vf.check_seed(1, "a") != vf.check_seed(2, "a")


def test_plan_ids_unique():
    for n in (3, 5):
        ids = [c.id for c in vf.plan(vf.SuiteConfig(n=n))]
        assert len(ids) == len(set(ids))


def test_tensor_plan_exhaustive_at_n3():
    cfg = vf.SuiteConfig(n=3, suites=("tensor",))
    inst = [c for c in vf.plan(cfg) if c.name == "instance"]
    assert len(inst) == len(vf.tensor_instances(cfg)) == 282


def test_tensor_plan_sampled_at_n5():
    cfg = vf.SuiteConfig(n=5, suites=("tensor",))
    inst = [c.params for c in vf.plan(cfg) if c.name == "instance"]
    assert len(inst) >= 50
    assert {p[0] for p in inst} == {"v2", "simple", "proj", "string", "block"}
    blocks = [p for p in inst if p[0] == "block"]
    assert any(p[1] + p[3] < 5 for p in blocks) and any(p[1] + p[3] > 5 for p in blocks)
    regimes = {(p[2] + p[4]) % 5 <= 2 for p in blocks if p[1] + p[3] == 5}
    assert regimes == {True, False}


@pytest.fixture(scope="module")
def small_report():
    return vf.run_suite(vf.SuiteConfig(n=3, suites=("algebra", "stable")))


def test_records_shape(small_report):
    for rec in small_report.records:
        assert {"id", "anchor", "params", "status", "witness"} <= set(rec)
        assert rec["anchor"]
        assert "wall_time" not in rec
    lines = small_report.lines()
    assert "summary" in json.loads(lines[-1])
    assert small_report.exit_code == 0


def test_timings_optional():
    rep = vf.run_suite(vf.SuiteConfig(n=3, suites=("stable",), timings=True))
    assert all("wall_time" in r for r in rep.records)


@pytest.mark.parametrize("fault,target", [
    ("corrupt-simple", "modules.simple"), ("corrupt-block-simple", "modules.block_simple"),
    ("corrupt-proj", "modules.projective"),
])
def test_fault_hook_targets(fault, target):
    rep = vf.run_suite(vf.SuiteConfig(n=3, suites=("modules",), fault=fault))
    failed = [r for r in rep.records if r["status"] == "fail"]
    assert failed and all(r["id"].startswith(target) for r in failed)
    assert all(r["counterexample"] for r in failed)
    assert rep.exit_code == 1


def test_unverified_exit_code():
    rep = vf.SuiteReport({}, [{"status": "pass"}, {"status": "unverified"}])
    assert rep.exit_code == 2
    rep = vf.SuiteReport({}, [{"status": "fail"}, {"status": "unverified"}])
    assert rep.exit_code == 1


def test_exception_isolated(monkeypatch):
    def boom(cfg, params, seed):
        raise RuntimeError("boom")
    monkeypatch.setitem(vf._CHECKS, "stable.relations", boom)
    rep = vf.run_suite(vf.SuiteConfig(n=3, suites=("stable",)))
    statuses = {r["id"]: r["status"] for r in rep.records}
    assert statuses["stable.relations"] == "fail"
    assert sum(s == "pass" for s in statuses.values()) == len(statuses) - 1


def test_report_file(tmp_path):
    out = tmp_path / "r.jsonl"
    rep = vf.run_suite(vf.SuiteConfig(n=3, suites=("stable",), output=str(out)))
    assert out.read_text() == rep.text()
