import math

import pandas as pd
import pytest

from nodalparity.config.constants import ExitCode, Regime
from nodalparity.errors import ConstructionError, UnsupportedRegimeError
from nodalparity.pipelines.main_pipeline import parity_scan_graph
from nodalparity.pipelines.supervisor import (
    export_constructions_excel,
    export_parity_scan_excel,
    run_construction,
    run_constructions,
    run_parity_scan,
)
from nodalparity.schema.schema import RunConfig


def _scan_config(rho_sq: str, lambda_max: str) -> RunConfig:
    return RunConfig(
        subcommand="parity-scan",
        rho_sq=rho_sq,
        lambda_max=lambda_max,
        functions=2,
        sample_count=200,
        base_resolution=64,
        max_resolution=512,
    )


# ---------------------------------------------------------------------------------------------------------------
# Parity scan
# ---------------------------------------------------------------------------------------------------------------

def test_square_torus_scan_passes(single_thread):
    report = run_parity_scan(_scan_config("1/1", "2"))
    assert report.passed and report.exit_code == ExitCode.SUCCESS
    assert report.regime == Regime.SQUARE
    assert [r.eigenspace.multiplicity for r in report.eigenspaces] == [4, 4]
    assert report.checked_functions == 4
    for record in report.eigenspaces:
        assert record.exact_check
        for f in record.functions:
            assert f.status == "passed" and f.even
            assert 2 * f.pairs == f.count


def test_irrational_scan_passes(single_thread):
    report = run_parity_scan(_scan_config(f"irrational:{1 / math.pi!r}", "10"))
    assert report.passed
    assert report.regime == Regime.IRRATIONAL
    assert len(report.eigenspaces) == 4
    vectors = [r.vector.model_dump() for r in report.eigenspaces]
    assert vectors[-1] == {"v1_over_pi": {"num": 0, "den": 1}, "v2_over_rho_pi": {"num": 1, "den": 1}}


def test_scan_refuses_unsupported_torus():
    with pytest.raises(UnsupportedRegimeError):
        run_parity_scan(_scan_config("1/3", "4"))


def test_graph_stops_at_the_failing_phase():
    state = parity_scan_graph().invoke(
        {
            "torus_spec": "1/3",
            "eigenvalue": "4/1",
            "position": 0,
            "seed": 42,
            "functions": 1,
            "sample_count": 10,
            "count_config": {"base_resolution": 64, "max_resolution": 128, "tau_relative": 1e-9, "refinement_factor": 2},
            "exit_code": ExitCode.SUCCESS,
        },
        config={"configurable": {"thread_id": "test_graph_failure"}},
    )
    assert state["step_status"] == "failed"
    assert state["current_step"] == "parity_scan - compute_vector"
    assert state["exit_code"] == ExitCode.UNSUPPORTED_REGIME
    assert "exact_check" not in state


def test_scan_workbook(tmp_path, single_thread):
    report = run_parity_scan(_scan_config("1/1", "1"))
    path = export_parity_scan_excel(report, str(tmp_path / "scan.xlsx"))
    sheets = pd.read_excel(path, sheet_name=None)
    assert set(sheets) == {"Eigenspaces", "Functions"}
    assert len(sheets["Functions"]) == 2


# ---------------------------------------------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------------------------------------------

def test_base_construction_report(single_thread):
    cfg = RunConfig(subcommand="construct", m=1, n=1, k=2, epsilon=0.1, resolution=1024, sample_count=500)
    report = run_construction(1, 1, 2, 0.1, cfg)
    assert report.passed and report.exit_code == ExitCode.SUCCESS
    assert (report.expected_count, report.actual_count, report.channel_sign) == (3, 3, -1)
    assert report.residuals["hyperbola"] < 1e-3
    assert max(report.residuals["reflection_x1"], report.residuals["reflection_x2"]) <= 1e-12
    assert report.quadrants.lower_left > 0 and report.quadrants.upper_right > 0
    assert report.half_period["max_discrepancy"] == 0
    assert report.model_dump(by_alias=True)["pass"] is True


def test_odd_k_construction_keeps_the_checkerboard(single_thread):
    report = run_construction(1, 1, 3)
    assert (report.expected_count, report.predicted_count, report.actual_count) == (3, 4, 4)
    assert report.matches_expected is False
    assert report.passed
    assert report.quadrants is None and report.half_period is None
    assert report.positive_domains == report.negative_domains == 2


def test_bad_construction_raises_before_the_graph():
    with pytest.raises(ConstructionError):
        run_construction(1, 1, 1)


def test_constructions_workbook(tmp_path, single_thread):
    reports = run_constructions([(1, 1, 2, 0.1), (1, 1, 3, None)])
    path = export_constructions_excel(reports, str(tmp_path / "constructions.xlsx"))
    frame = pd.read_excel(path, sheet_name="Constructions")
    assert frame["actual_count"].tolist() == [3, 4]
    assert frame["params.k"].tolist() == [2, 3]
