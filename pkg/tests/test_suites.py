import pytest

from pcsteiner.graph import check_embedding

from pcsteiner.suites import SUITES, SuiteConfig, report_files, resolve, run_suites, strip_gadget


def test_resolve():
    assert resolve([]) == []
    assert resolve(["all"]) == list(SUITES)
    assert resolve(["dual,dp", "dual"]) == ["dual", "dp"]
    with pytest.raises(KeyError):
        resolve(["nope"])


def test_gadget_is_planar_and_rooted():
    inst = strip_gadget()
    assert inst.root == 0 and inst.graph.m == 4
    assert check_embedding(inst.graph, inst.rotation).ok


@pytest.mark.parametrize("name", [n for n in SUITES if n != "determinism"])
def test_quick_suite_passes_or_reports(name):
    cfg = SuiteConfig.quick(3)
    (res,) = run_suites([name], cfg, {})
    assert res.rows and res.criterion == list(SUITES).index(name) + 1
    if name == "charges":
        # the literal reading is allowed to fail; the exhaustion reading never does
        assert res.summary["runs_violating_exhaustion_reading"] == 0
    else:
        assert res.passed, res.failures


def test_quick_reports_are_byte_identical():
    cfg = SuiteConfig.quick(5)
    names = ["dual", "dp", "spanner"]
    a = report_files(run_suites(names, cfg, {}), cfg)
    b = report_files(run_suites(names, cfg, {}), cfg)
    assert a == b
    other = report_files(run_suites(names, SuiteConfig.quick(6), {}), SuiteConfig.quick(6))
    assert other["report.json"] != a["report.json"]
