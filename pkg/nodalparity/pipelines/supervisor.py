import time
from dataclasses import asdict
from typing import List, Optional, Tuple

import pandas as pd

from nodalparity.components.antisym import regime_of
from nodalparity.components.construct import make_construction
from nodalparity.components.spectra import enumerate_eigenspaces
from nodalparity.config.constants import ExitCode
from nodalparity.pipelines.main_pipeline import construction_graph, parity_scan_graph
from nodalparity.schema.schema import (
    ConstructionReport,
    EigenspaceScanRecord,
    FunctionCheckRecord,
    ParityScanReport,
    QuadrantRecord,
    RunConfig,
    eigenspace_record,
    vector_from_texts,
    vector_record,
)
from nodalparity.utils.file_utils import save_to_excel
from nodalparity.utils.logger import get_logger
from nodalparity.utils.utils import fraction_text, normalize_json_to_dataframe, parse_fraction

logger = get_logger("Supervisor")


# ---------------------------------------------------------------------------------------------------------------
# Parity Scan
# ---------------------------------------------------------------------------------------------------------------

def run_parity_scan(cfg: RunConfig) -> ParityScanReport:
    """
    Runs the parity-scan graph once per non-zero eigenspace up to cfg.lambda_max.

    The regime gate runs before any graph: a torus without an anti-symmetry
    guarantee raises UnsupportedRegimeError here.
    """
    torus = cfg.torus()
    regime, _ = regime_of(torus)
    lambda_max = parse_fraction(cfg.lambda_max) if not torus.is_irrational else float(parse_fraction(cfg.lambda_max))
    spaces = [s for s in enumerate_eigenspaces(torus, lambda_max) if not s.is_zero]

    session = f"scan_{int(time.time())}"
    logger.info(f"🚀 Parity scan {session} | ρ²={torus.label()} ({regime}) | {len(spaces)} eigenspaces")

    pipeline = parity_scan_graph()
    count_config = asdict(cfg.count_config())
    records: List[EigenspaceScanRecord] = []
    exit_code = ExitCode.SUCCESS

    for position, space in enumerate(spaces):
        config = {"configurable": {"thread_id": f"{session}_{position}"}}
        initial_input = {
            "torus_spec": cfg.rho_sq,
            "eigenvalue": fraction_text(space.eigenvalue) if space.eigenvalue is not None else None,
            "index": list(space.index) if space.index is not None else None,
            "position": position,
            "seed": cfg.seed,
            "functions": cfg.functions,
            "sample_count": cfg.sample_count,
            "count_config": count_config,
            "exit_code": ExitCode.SUCCESS,
        }
        result = pipeline.invoke(initial_input, config=config)

        failed = result.get("step_status") == "failed"
        if failed and exit_code == ExitCode.SUCCESS:
            exit_code = ExitCode.VERIFICATION_FAILED
        records.append(EigenspaceScanRecord(
            eigenspace=eigenspace_record(space),
            vector=vector_record(vector_from_texts(result["vector"])) if result.get("vector") else None,
            exact_check=result.get("exact_check"),
            functions=[FunctionCheckRecord(**r) for r in result.get("function_results") or []],
            status="failed" if failed else "passed",
            error=result.get("step_error") if failed else None,
        ))

    checked = sum(len(r.functions) for r in records)
    report = ParityScanReport(
        config=cfg,
        torus=torus.label(),
        regime=regime,
        eigenspaces=records,
        checked_functions=checked,
        passed=exit_code == ExitCode.SUCCESS,
        exit_code=exit_code,
    )
    marker = "✅" if report.passed else "🛑"
    logger.info(f"{marker} Parity scan finished: {len(records)} eigenspaces, {checked} functions")
    return report


def export_parity_scan_excel(report: ParityScanReport, path: str) -> str:
    summary_rows, function_rows = [], []
    for record in report.eigenspaces:
        lam = record.eigenspace.model_dump(mode="json", by_alias=True)["lambda"]
        summary_rows.append({
            "lambda": lam,
            "multiplicity": record.eigenspace.multiplicity,
            "vector": record.vector.model_dump(mode="json") if record.vector else None,
            "exact_check": record.exact_check,
            "counts": [f.count for f in record.functions],
            "status": record.status,
            "error": record.error,
        })
        for f in record.functions:
            function_rows.append({"lambda": lam, **f.model_dump(mode="json")})

    sheets = {"Eigenspaces": normalize_json_to_dataframe(summary_rows) if summary_rows else pd.DataFrame()}
    sheets["Functions"] = normalize_json_to_dataframe(function_rows) if function_rows else pd.DataFrame()
    return save_to_excel(sheets, path)


# ---------------------------------------------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------------------------------------------

def run_construction(
    m: int,
    n: int,
    k: int,
    epsilon: Optional[float] = None,
    cfg: Optional[RunConfig] = None,
) -> ConstructionReport:
    """
    Runs the construction graph for one (m, n, k, eps). Bad parameters raise
    ConstructionError before the graph starts; later failures land in the report.
    """
    cfg = cfg or RunConfig(subcommand="construct", m=m, n=n, k=k, epsilon=epsilon)
    c = make_construction(m, n, k, epsilon)

    pipeline = construction_graph()
    config = {"configurable": {"thread_id": f"construction_{int(time.time())}_{m}_{n}_{k}"}}
    initial_input = {
        "m": m,
        "n": n,
        "k": k,
        "epsilon": c.epsilon,
        "seed": cfg.seed,
        "sample_count": cfg.sample_count,
        "hyperbola_resolution": cfg.resolution,
        "count_config": asdict(cfg.count_config()),
        "exit_code": ExitCode.SUCCESS,
    }
    logger.info(f"🚀 Construction (m,n,k)=({m},{n},{k}) ε={c.epsilon}")
    result = pipeline.invoke(initial_input, config=config)

    count = result.get("count") or {}
    failed = result.get("step_status") == "failed"
    half_period = result.get("half_period")
    passed = (
        not failed
        and bool(count.get("passed"))
        and (half_period is None or half_period["max_discrepancy"] == 0)
    )
    report = ConstructionReport(
        config=cfg,
        params=c.params(),
        expected_count=c.expected_count,
        predicted_count=count.get("predicted_count", c.predicted_count),
        actual_count=count.get("actual_count"),
        channel_sign=c.channel_sign,
        positive_domains=count.get("positive_domains"),
        negative_domains=count.get("negative_domains"),
        resolution=count.get("resolution"),
        matches_expected=count.get("matches_expected"),
        residuals=result.get("residuals") or {},
        quadrants=QuadrantRecord(**result["quadrants"]) if result.get("quadrants") else None,
        half_period=half_period,
        negative_area=result.get("negative_area"),
        negative_area_limit=result.get("negative_area_limit"),
        passed=passed,
        status="failed" if failed else "completed",
        error=result.get("step_error") if failed else None,
        exit_code=(result.get("exit_code") or ExitCode.VERIFICATION_FAILED) if failed
        else (ExitCode.SUCCESS if passed else ExitCode.VERIFICATION_FAILED),
    )
    marker = "✅" if passed else "⚠️"
    logger.info(f"{marker} Construction {c.params()}: {report.actual_count} domains "
                f"(claimed {report.expected_count}, predicted {report.predicted_count})")
    return report


def run_constructions(
    parameters: List[Tuple[int, int, int, Optional[float]]],
    cfg: Optional[RunConfig] = None,
) -> List[ConstructionReport]:
    return [run_construction(m, n, k, eps, cfg) for m, n, k, eps in parameters]


def export_constructions_excel(reports: List[ConstructionReport], path: str) -> str:
    rows = [r.model_dump(mode="json", by_alias=True, exclude={"config"}) for r in reports]
    return save_to_excel({"Constructions": normalize_json_to_dataframe(rows)}, path)
