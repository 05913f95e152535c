"""
Command-line entry point.

    nodal-parity spectrum     --rho-sq 1/1 --lambda-max 10
    nodal-parity antisym      --rho-sq 1/1 --lambda 25
    nodal-parity count        --rho-sq 1/3 --family cc -m 1 -n 1
    nodal-parity parity-scan  --rho-sq 1/1 --lambda-max 100 --functions 5 --seed 42
    nodal-parity construct    -m 1 -n 1 -k 2 --eps 0.1 --render fig.ppm
    nodal-parity render       --rho-sq 1/3 --family cc -m 2 -n 0 --render stripes.ppm
    nodal-parity verify-arith --lambda-max 100000 --form 1 5 --form 3 7

Reports are JSON on stdout (and in --output when given); logs go to the log
file and, from WARNING up, to stderr. Exit codes: 0 success, 1 verification
failure, 2 usage, 3 unsupported regime, 4 unstable count, 5 I/O.
"""

import argparse
import os
import sys
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ValidationError

from nodalparity.components.antisym import antisymmetry_vector, compose_action, regime_of, verify_by_sampling, verify_on_basis
from nodalparity.components.arith import QuadraticForm, verify_generalized_lemma
from nodalparity.components.construct import make_construction
from nodalparity.components.nodal import count_nodal_domains, domain_areas, sign_grid, write_label_pgm
from nodalparity.components.render import RenderSpec, render
from nodalparity.components.spectra import (
    Eigenfunction,
    basis_eigenfunction,
    eigenfunction_from_terms,
    eigenspace_for,
    eigenspace_of_index,
    enumerate_eigenspaces,
    random_eigenfunction,
)
from nodalparity.config.config import NumericsConfig
from nodalparity.config.constants import ExitCode
from nodalparity.errors import AntisymmetryError, ArithmeticDomainError, NodalParityError, SpectrumError
from nodalparity.pipelines.supervisor import (
    export_constructions_excel,
    export_parity_scan_excel,
    run_construction,
    run_parity_scan,
)
from nodalparity.schema.schema import (
    AntisymReport,
    ArithRecord,
    ArithReport,
    CountReport,
    RenderReport,
    RunConfig,
    SpectrumReport,
    eigenspace_record,
    vector_record,
)
from nodalparity.utils.file_utils import dump_json, load_eigenfunction_document, write_text
from nodalparity.utils.logger import get_logger
from nodalparity.utils.utils import parse_fraction

logger = get_logger("CLI")

CommandResult = Tuple[BaseModel, int]


# ---------------------------------------------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------------------------------------------

def _lambda_bound(cfg: RunConfig):
    if cfg.lambda_max is None:
        raise SpectrumError(f"{cfg.subcommand} needs --lambda-max")
    bound = parse_fraction(cfg.lambda_max)
    return float(bound) if cfg.torus().is_irrational else bound


def _eigenfunction(cfg: RunConfig) -> Eigenfunction:
    """--input document, a named basis function, or a construction (-m -n -k)."""
    if cfg.k is not None:
        m = 1 if cfg.m is None else cfg.m
        n = 1 if cfg.n is None else cfg.n
        return make_construction(m, n, cfg.k, cfg.epsilon).u
    torus = cfg.torus()
    if cfg.input:
        document = load_eigenfunction_document(cfg.input)
        lam = document.get("lambda")
        return eigenfunction_from_terms(torus, document["coeffs"], lam=parse_fraction(lam) if lam is not None else None)
    if cfg.family is not None and cfg.m is not None and cfg.n is not None:
        return basis_eigenfunction(torus, cfg.family.value, cfg.m, cfg.n)
    raise SpectrumError("specify the eigenfunction with --input, --family/-m/-n, or -m/-n/-k")


def _render_spec(cfg: RunConfig) -> RenderSpec:
    return RenderSpec(width=cfg.width, height=cfg.height, palette=cfg.palette)


# ---------------------------------------------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------------------------------------------

def cmd_spectrum(cfg: RunConfig) -> CommandResult:
    torus = cfg.torus()
    spaces = enumerate_eigenspaces(torus, _lambda_bound(cfg))
    report = SpectrumReport(config=cfg, torus=torus.label(), eigenspaces=[eigenspace_record(s) for s in spaces])
    return report, ExitCode.SUCCESS


def cmd_antisym(cfg: RunConfig) -> CommandResult:
    torus = cfg.torus()
    if cfg.eigenvalue is not None:
        space = eigenspace_for(torus, parse_fraction(cfg.eigenvalue))
    elif cfg.m is not None and cfg.n is not None:
        space = eigenspace_of_index(torus, cfg.m, cfg.n)
    else:
        raise SpectrumError("antisym needs --lambda or -m/-n")

    regime, _ = regime_of(torus)
    v = antisymmetry_vector(space, torus)
    try:
        verify_on_basis(space, v)
        exact = True
    except AntisymmetryError as e:
        logger.error(f"🛑 {e}")
        exact = False

    u = random_eigenfunction(space, torus, np.random.default_rng(cfg.seed))
    report = AntisymReport(
        config=cfg,
        torus=torus.label(),
        regime=regime,
        eigenspace=eigenspace_record(space),
        vector=vector_record(v),
        exact_minus_identity=exact,
        double_shift_identity=compose_action(space, v, 2).is_identity(),
        sampling_residual=verify_by_sampling(u, v, cfg.sample_count, cfg.seed),
    )
    return report, ExitCode.SUCCESS if exact else ExitCode.VERIFICATION_FAILED


def cmd_count(cfg: RunConfig) -> CommandResult:
    u = _eigenfunction(cfg)
    result = count_nodal_domains(u, cfg.count_config())
    d = result.decomposition
    report = CountReport(
        config=cfg,
        eigenspace=eigenspace_record(u.eigenspace),
        count=result.count,
        signs=d.domain_signs,
        areas=domain_areas(d, u.torus),
        resolution=result.resolution,
    )
    if cfg.labels_pgm:
        report.labels_pgm = write_label_pgm(d, cfg.labels_pgm)
    if cfg.render:
        report.image = render(d, _render_spec(cfg), cfg.render)
    return report, ExitCode.SUCCESS


def cmd_parity_scan(cfg: RunConfig) -> CommandResult:
    _lambda_bound(cfg)
    report = run_parity_scan(cfg)
    if cfg.excel:
        export_parity_scan_excel(report, cfg.excel)
    return report, report.exit_code


def cmd_construct(cfg: RunConfig) -> CommandResult:
    m = 1 if cfg.m is None else cfg.m
    n = 1 if cfg.n is None else cfg.n
    k = 2 if cfg.k is None else cfg.k
    report = run_construction(m, n, k, cfg.epsilon, cfg)
    if cfg.render:
        c = make_construction(m, n, k, cfg.epsilon)
        report.image = render(sign_grid(c.u, cfg.resolution, cfg.resolution), _render_spec(cfg), cfg.render)
    if cfg.excel:
        export_constructions_excel([report], cfg.excel)
    return report, report.exit_code


def cmd_render(cfg: RunConfig) -> CommandResult:
    if not cfg.render:
        raise SpectrumError("render needs --render PATH")
    u = _eigenfunction(cfg)
    render(sign_grid(u, cfg.resolution, cfg.resolution), _render_spec(cfg), cfg.render)
    report = RenderReport(
        config=cfg,
        image=cfg.render,
        width=cfg.width,
        height=cfg.height,
        palette=cfg.palette,
        grid=[cfg.resolution, cfg.resolution],
    )
    return report, ExitCode.SUCCESS


def cmd_verify_arith(cfg: RunConfig) -> CommandResult:
    bound = parse_fraction(cfg.lambda_max) if cfg.lambda_max else Fraction(NumericsConfig.LAMBDA_MAX_EXHAUSTIVE)
    if bound.denominator != 1:
        raise ArithmeticDomainError(f"lambda_max must be an integer, got {bound}")
    records = []
    for alpha, beta in cfg.forms or [[1, 1]]:
        result = verify_generalized_lemma(QuadraticForm(alpha, beta), int(bound))
        records.append(ArithRecord(
            alpha=result.alpha,
            beta=result.beta,
            lambda_max=result.lambda_max,
            checked=result.checked,
            exactly_one_odd=result.exactly_one_odd,
            both_odd=result.both_odd,
            violations=[list(v) for v in result.violations],
            passed=result.passed,
        ))
    passed = all(r.passed for r in records)
    report = ArithReport(config=cfg, forms=records, passed=passed)
    return report, ExitCode.SUCCESS if passed else ExitCode.VERIFICATION_FAILED


COMMANDS: Dict[str, Callable[[RunConfig], CommandResult]] = {
    "spectrum": cmd_spectrum,
    "antisym": cmd_antisym,
    "count": cmd_count,
    "parity-scan": cmd_parity_scan,
    "construct": cmd_construct,
    "render": cmd_render,
    "verify-arith": cmd_verify_arith,
}


# ---------------------------------------------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------------------------------------------

def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help=f"seed for every random choice (default {NumericsConfig.SEED})")
    common.add_argument("--output", help="also write the JSON report to this path")
    common.add_argument("--threads", type=int, help="grid evaluation threads (default: NODAL_THREADS or 1)")
    return common


def _torus_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rho-sq", dest="rho_sq", help='rho^2 as "a/b", or "irrational:<rho>"')


def _count_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--base-resolution", dest="base_resolution", type=int)
    p.add_argument("--max-resolution", dest="max_resolution", type=int)
    p.add_argument("--tau", dest="tau_relative", type=float, help="boundary threshold relative to max|u|")


def _function_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help='eigenfunction document {"lambda": "a/b", "coeffs": [{family, m, n, c}]}')
    p.add_argument("--family", choices=["cc", "cs", "sc", "ss"])
    p.add_argument("-m", type=int)
    p.add_argument("-n", type=int)
    p.add_argument("-k", type=int, help="use the construction u^cc_{m,n} + eps u^cc_{km,0} on its own torus")
    p.add_argument("--eps", dest="epsilon", type=float)


def _render_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--render", help="write a binary PPM nodal map to this path")
    p.add_argument("--palette", choices=["sign", "domains"])
    p.add_argument("--size", nargs=2, type=int, metavar=("W", "H"))
    p.add_argument("--resolution", type=int, help="sampling grid for the image / ξ-point extraction")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nodal-parity", description="Nodal-domain parity on flat tori.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    common = _common_parser()

    p = sub.add_parser("spectrum", parents=[common], help="list eigenspaces up to --lambda-max")
    _torus_args(p)
    p.add_argument("--lambda-max", dest="lambda_max", required=True)

    p = sub.add_parser("antisym", parents=[common], help="anti-symmetry vector and exact basis check")
    _torus_args(p)
    p.add_argument("--lambda", dest="eigenvalue")
    p.add_argument("-m", type=int)
    p.add_argument("-n", type=int)
    p.add_argument("--samples", dest="sample_count", type=int)

    p = sub.add_parser("count", parents=[common], help="stabilised nodal-domain count")
    _torus_args(p)
    _function_args(p)
    _count_args(p)
    _render_args(p)
    p.add_argument("--labels-pgm", dest="labels_pgm", help="write the label matrix as binary PGM")

    p = sub.add_parser("parity-scan", parents=[common], help="even counts and domain pairing per eigenspace")
    _torus_args(p)
    _count_args(p)
    p.add_argument("--lambda-max", dest="lambda_max", required=True)
    p.add_argument("--functions", type=int, help="random eigenfunctions per eigenspace")
    p.add_argument("--samples", dest="sample_count", type=int)
    p.add_argument("--excel", help="write a workbook with one row per eigenspace")

    p = sub.add_parser("construct", parents=[common], help="odd-count construction and its checks")
    p.add_argument("-m", type=int)
    p.add_argument("-n", type=int)
    p.add_argument("-k", type=int)
    p.add_argument("--eps", dest="epsilon", type=float)
    p.add_argument("--samples", dest="sample_count", type=int)
    p.add_argument("--excel", help="write a workbook row for the construction")
    _count_args(p)
    _render_args(p)

    p = sub.add_parser("render", parents=[common], help="PPM nodal map of an eigenfunction")
    _torus_args(p)
    _function_args(p)
    _render_args(p)

    p = sub.add_parser("verify-arith", parents=[common], help="exhaustive parity decomposition scan")
    p.add_argument("--lambda-max", dest="lambda_max")
    p.add_argument("--form", dest="forms", nargs=2, type=int, action="append", metavar=("ALPHA", "BETA"))

    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = {key: value for key, value in vars(args).items() if value is not None}
    size = values.pop("size", None)
    if size:
        values["width"], values["height"] = size
    return RunConfig(**values)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.USAGE

    os.environ["NODAL_THREADS"] = str(cfg.threads)
    logger.info(f"🚀 {cfg.subcommand} | {cfg.model_dump(exclude_none=True)}")
    try:
        report, code = COMMANDS[cfg.subcommand](cfg)
        text = dump_json(report)
        if cfg.output:
            write_text(text, cfg.output)
    except NodalParityError as e:
        logger.error(f"🛑 {cfg.subcommand} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code

    sys.stdout.write(text)
    if code != ExitCode.SUCCESS:
        logger.warning(f"⚠️ {cfg.subcommand} finished with exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
