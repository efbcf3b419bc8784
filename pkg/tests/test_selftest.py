import copy

import numpy as np

from syndrocal.cli import main
from syndrocal.selftest import check_composition, check_schedule_syndromes, run_selftest
from syndrocal.sim.steane_schedule import PARALLEL


def _corrupted():
    sch = copy.deepcopy(PARALLEL)
    first = list(sch["halves"][0]["gates"])
    first[0] = ("CNOT", 7, 3)  # wrong data qubit for one gate
    sch["halves"] = ({**sch["halves"][0], "gates": tuple(first)}, sch["halves"][1])
    return sch


def test_clean_selftest_passes():
    report = run_selftest(seed=0, quick=True)
    assert report.passed, report.lines()
    assert [c.name for c in report.checks] == [
        "engine-triangle", "flip-resolved-recovery", "composition-law",
        "parallel-schedule-syndromes", "z-control-closed-form", "depolarizing-exponents"]


def test_corrupted_schedule_is_named():
    ok, detail = check_schedule_syndromes(_corrupted())
    assert not ok and "wrong syndrome" in detail
    report = run_selftest(seed=0, schedule=_corrupted(), quick=True)
    assert not report.passed
    assert "parallel-schedule-syndromes" in report.failed()
    assert any(line.startswith("FAIL parallel-schedule-syndromes") for line in report.lines())


def test_individual_check():
    ok, _ = check_composition(np.random.default_rng(1), instances=5)
    assert ok


def test_cli_selftest_exit_code(capsys):
    assert main(["selftest", "--seed", "2"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 6
