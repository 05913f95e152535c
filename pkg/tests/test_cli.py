"""CLI tests: in-process through main() and end-to-end through python -m."""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from nodalparity.cli import main
from nodalparity.config.constants import ExitCode
from nodalparity.utils.file_utils import read_pnm_header

PROJECT_ROOT = Path(__file__).resolve().parents[1]


def _run(args, tmp_path: Path) -> subprocess.CompletedProcess:
    env = os.environ.copy()
    existing = env.get("PYTHONPATH", "")
    env["PYTHONPATH"] = os.pathsep.join(filter(None, [str(PROJECT_ROOT), existing]))
    env["NODAL_LOG_DIR"] = str(tmp_path / "logs")
    env["NODAL_THREADS"] = "1"
    return subprocess.run(
        [sys.executable, "-m", "nodalparity.cli", *args],
        check=False,
        capture_output=True,
        text=True,
        env=env,
    )


def _invoke(capsys, args):
    code = main(args)
    return code, capsys.readouterr()


# ---------------------------------------------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------------------------------------------

def test_spectrum(capsys, single_thread):
    code, out = _invoke(capsys, ["spectrum", "--rho-sq", "1/1", "--lambda-max", "5"])
    assert code == ExitCode.SUCCESS
    payload = json.loads(out.out)
    assert payload["torus"] == "1/1"
    assert [s["multiplicity"] for s in payload["eigenspaces"]] == [1, 4, 4, 4, 8]
    assert payload["eigenspaces"][-1]["lambda"] == {"num": 5, "den": 1}
    assert payload["config"]["subcommand"] == "spectrum"


def test_antisym(capsys, single_thread):
    code, out = _invoke(capsys, ["antisym", "--rho-sq", "1/1", "--lambda", "25", "--samples", "200"])
    assert code == ExitCode.SUCCESS
    payload = json.loads(out.out)
    assert payload["vector"] == {"v1_over_pi": {"num": 1, "den": 1}, "v2_over_rho_pi": {"num": 1, "den": 1}}
    assert payload["exact_minus_identity"] and payload["double_shift_identity"]
    assert payload["sampling_residual"] < 1e-10


def test_count_writes_label_map_and_image(tmp_path, capsys, single_thread):
    labels, image = tmp_path / "labels.pgm", tmp_path / "map.ppm"
    code, out = _invoke(capsys, [
        "count", "--rho-sq", "1/3", "--family", "cc", "-m", "1", "-n", "1",
        "--base-resolution", "64", "--max-resolution", "256",
        "--labels-pgm", str(labels), "--render", str(image), "--size", "80", "64",
    ])
    assert code == ExitCode.SUCCESS
    payload = json.loads(out.out)
    assert payload["count"] == 4
    assert sorted(payload["signs"]) == [-1, -1, 1, 1]
    assert read_pnm_header(str(labels)) == ("P5", 64, 64)
    assert read_pnm_header(str(image)) == ("P6", 80, 64)


def test_count_from_document(tmp_path, capsys, single_thread):
    document = tmp_path / "u.json"
    document.write_text(json.dumps({
        "lambda": "4",
        "coeffs": [{"family": "cc", "m": 1, "n": 1, "c": 1.0}, {"family": "cc", "m": 2, "n": 0, "c": 0.1}],
    }), encoding="utf-8")
    code, out = _invoke(capsys, ["count", "--rho-sq", "1/3", "--input", str(document)])
    assert code == ExitCode.SUCCESS
    assert json.loads(out.out)["count"] == 3


def test_render(tmp_path, capsys, single_thread):
    image = tmp_path / "stripes.ppm"
    code, out = _invoke(capsys, [
        "render", "--rho-sq", "1/3", "--family", "cc", "-m", "2", "-n", "0",
        "--render", str(image), "--size", "64", "64", "--resolution", "64",
    ])
    assert code == ExitCode.SUCCESS
    assert json.loads(out.out)["grid"] == [64, 64]
    assert read_pnm_header(str(image)) == ("P6", 64, 64)


def test_verify_arith(capsys, single_thread):
    code, out = _invoke(capsys, ["verify-arith", "--lambda-max", "1000", "--form", "1", "1", "--form", "1", "5"])
    assert code == ExitCode.SUCCESS
    payload = json.loads(out.out)
    assert payload["passed"]
    assert [(f["alpha"], f["beta"]) for f in payload["forms"]] == [(1, 1), (1, 5)]


def test_construct(tmp_path, capsys, single_thread):
    output, image = tmp_path / "construct.json", tmp_path / "construct.ppm"
    code, out = _invoke(capsys, [
        "construct", "-m", "1", "-n", "1", "-k", "2", "--eps", "0.1",
        "--resolution", "1024", "--samples", "200", "--output", str(output),
        "--render", str(image), "--size", "128", "128",
    ])
    assert code == ExitCode.SUCCESS
    payload = json.loads(out.out)
    assert payload["pass"] is True
    assert payload["actual_count"] == payload["expected_count"] == 3
    assert payload["image"] == str(image)
    assert read_pnm_header(str(image)) == ("P6", 128, 128)
    assert output.read_text(encoding="utf-8") == out.out


# ---------------------------------------------------------------------------------------------------------------
# Exit codes
# ---------------------------------------------------------------------------------------------------------------

@pytest.mark.parametrize(
    "args, expected",
    [
        (["spectrum", "--rho-sq", "1/1", "--lambda-max", "0"], ExitCode.USAGE),
        (["construct", "-m", "1", "-n", "1", "-k", "1"], ExitCode.USAGE),
        (["construct", "-m", "0", "-n", "1", "-k", "2"], ExitCode.USAGE),
        (["construct", "-m", "1", "-n", "0", "-k", "2"], ExitCode.USAGE),
        (["count", "-m", "0", "-n", "1", "-k", "2"], ExitCode.USAGE),
        (["verify-arith", "--lambda-max", "10", "--form", "1", "3"], ExitCode.USAGE),
        (["count", "--rho-sq", "1/1", "--family", "cc", "-m", "0", "-n", "0"], ExitCode.USAGE),
        (["antisym", "--rho-sq", "1/3", "--lambda", "4"], ExitCode.UNSUPPORTED_REGIME),
        (["parity-scan", "--rho-sq", "1/3", "--lambda-max", "4"], ExitCode.UNSUPPORTED_REGIME),
        (
            ["count", "--rho-sq", "1/1", "--family", "cc", "-m", "1", "-n", "1",
             "--base-resolution", "8", "--max-resolution", "8"],
            ExitCode.UNSTABLE_COUNT,
        ),
    ],
)
def test_exit_codes(capsys, single_thread, args, expected):
    code, out = _invoke(capsys, args)
    assert code == expected
    assert out.out == ""
    assert "error:" in out.err


def test_io_failure_exit_code(tmp_path, capsys, single_thread):
    blocker = tmp_path / "file"
    blocker.write_text("x", encoding="utf-8")
    code, _ = _invoke(capsys, ["spectrum", "--rho-sq", "1/1", "--lambda-max", "2", "--output", str(blocker / "r.json")])
    assert code == ExitCode.IO
    code, _ = _invoke(capsys, ["count", "--rho-sq", "1/1", "--input", str(tmp_path / "missing.json")])
    assert code == ExitCode.IO


# ---------------------------------------------------------------------------------------------------------------
# End to end
# ---------------------------------------------------------------------------------------------------------------

def test_module_entry_point(tmp_path):
    completed = _run(["spectrum", "--rho-sq", "1/3", "--lambda-max", "4"], tmp_path)
    assert completed.returncode == 0, completed.stderr
    payload = json.loads(completed.stdout)
    assert payload["eigenspaces"][-1]["multiplicity"] == 6


def test_unsupported_regime_exit_code(tmp_path):
    completed = _run(["parity-scan", "--rho-sq", "1/3", "--lambda-max", "4"], tmp_path)
    assert completed.returncode == ExitCode.UNSUPPORTED_REGIME
    assert "no parity guarantee" in completed.stderr


def test_parity_scan_is_reproducible(tmp_path):
    args = [
        "parity-scan", "--rho-sq", "1/1", "--lambda-max", "2", "--functions", "2", "--seed", "7",
        "--base-resolution", "64", "--max-resolution", "512", "--samples", "100",
    ]
    first = _run(args, tmp_path)
    second = _run(args, tmp_path)
    assert first.returncode == second.returncode == 0, first.stderr
    assert first.stdout == second.stdout
    assert json.loads(first.stdout)["passed"] is True
