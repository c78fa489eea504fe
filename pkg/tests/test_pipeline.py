"""Tests for ingestion, batch processing, report emission, and the CLI."""

import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from ckpoints.errors import ParseError
from ckpoints.pipeline import (
    RunConfig,
    emit_report,
    ingest,
    parse_report_csv,
    run_batch,
)

from conftest import EX1_COEFFS, EX2_COEFFS, EX3_RAW_COEFFS

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "examples.txt"


@pytest.fixture(scope="module")
def example_batch():
    curves = ingest(str(FIXTURE))
    return run_batch(curves, RunConfig(height_bound=1000))


def test_ingest_empty(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("")
    assert ingest(str(path)) == []


def test_ingest_examples():
    curves = ingest(str(FIXTURE))
    assert len(curves) == 3
    assert curves[0][1] == [Fraction(c) for c in EX1_COEFFS]
    assert curves[1][1] == [Fraction(c) for c in EX2_COEFFS]
    assert curves[2][1] == [Fraction(c) for c in EX3_RAW_COEFFS]
    # line numbers preserved (line 1 is a comment)
    assert [line for line, _ in curves] == [2, 3, 4]


def test_ingest_parse_error(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("[1,2,3]\nnot a curve\n")
    with pytest.raises(ParseError) as info:
        ingest(str(path))
    assert info.value.line_number == 2


def test_batch_three_examples(example_batch):
    report = example_batch
    assert len(report.records) == 3
    assert not report.failures
    r1, r2, r3 = report.records
    assert r1.rational_points_input_model == ["inf", "(32, 0)"]
    assert r2.rational_points_input_model == ["inf"]
    assert len(r2.higher_torsion_extras) == 2
    assert r2.higher_torsion_extras[0]["order"] == 18
    assert r3.rational_points_input_model == [
        "inf",
        "(-1, 0)",
        "(-1/2, 0)",
        "(0, -1)",
        "(0, 1)",
        "(1, 0)",
    ]
    assert r3.monic_lead == "8"
    assert r3.fp_count == 6 and r3.stoll_sharp
    assert not r1.stoll_sharp


def test_histogram(example_batch):
    assert example_batch.histogram == {2: 1, 1: 1, 6: 1}


def test_stoll_bound_invariant(example_batch):
    for rec in example_batch.records:
        assert len(rec.rational_points) <= rec.fp_count


def test_max_height(example_batch):
    import math

    assert abs(example_batch.max_height - math.log(32)) < 1e-9
    assert example_batch.max_height_points == ["(32, 0)"]


def test_empty_batch():
    report = run_batch([], RunConfig())
    assert report.records == [] and report.histogram == {}


def test_forced_bad_prime_escalates():
    # a curve built to have bad reduction at 7: disc(F) = 0 mod 7
    coeffs = [0, 7, 0, 0, 0, 0, 0, 1]  # y^2 = x^7 + 7x: F = x(x^6 + 7)
    report = run_batch([(1, [Fraction(c) for c in coeffs])], RunConfig(prime=7, height_bound=5))
    rec = report.records[0]
    assert rec.status == "ok"
    assert rec.prime == 11
    assert rec.escalations >= 1


def test_per_curve_failure_recorded():
    # a singular model fails cleanly and the batch continues
    bad = [(1, [Fraction(0)] * 7 + [Fraction(1)])]
    good = [(2, [Fraction(c) for c in EX3_RAW_COEFFS])]
    report = run_batch(bad + good, RunConfig(height_bound=10))
    assert len(report.failures) == 1
    assert report.failures[0]["index"] == 0
    assert report.records[1].status == "ok"


def test_emit_text_contains_disc_table(example_batch):
    text = emit_report(example_batch, "text").decode()
    assert "no common roots" in text
    assert "(4, 0)" in text
    assert "(32, 0)" in text
    assert "histogram" in text


def test_emit_json_deterministic(example_batch):
    a = emit_report(example_batch, "json")
    curves = ingest(str(FIXTURE))
    again = run_batch(curves, RunConfig(height_bound=1000))
    b = emit_report(again, "json")
    assert a == b


def test_parallel_batch_identical(example_batch):
    curves = ingest(str(FIXTURE))
    parallel = run_batch(curves, RunConfig(height_bound=1000, jobs=2))
    assert emit_report(parallel, "json") == emit_report(example_batch, "json")


def test_json_csv_json_roundtrip(example_batch):
    a = json.loads(emit_report(example_batch, "json"))
    csv_bytes = emit_report(example_batch, "csv")
    rebuilt = parse_report_csv(csv_bytes)
    b = json.loads(emit_report(rebuilt, "json"))
    scalar_keys = [
        "index",
        "status",
        "input_coeffs",
        "monic_coeffs",
        "monic_lead",
        "prime",
        "precision",
        "t_precision",
        "escalations",
        "fp_count",
        "stoll_sharp",
        "rational_points",
        "rational_points_input_model",
        "heights",
        "max_height",
        "two_torsion_extras",
        "higher_torsion_extras",
    ]
    for ra, rb in zip(a["records"], b["records"]):
        for k in scalar_keys:
            assert ra[k] == rb[k], k
    assert a["histogram"] == b["histogram"]
    assert a["max_height"] == b["max_height"]


def test_rational_points_revalidate_on_input_model(example_batch):
    # every reported rational point satisfies the original (pre-rescale)
    # equation; process_curve asserts this internally, re-check here
    for rec, coeffs in zip(example_batch.records, (EX1_COEFFS, EX2_COEFFS, EX3_RAW_COEFFS)):
        for text in rec.rational_points_input_model:
            if text == "inf":
                continue
            xs, ys = text.strip("()").split(",")
            x, y = Fraction(xs.strip()), Fraction(ys.strip())
            assert y * y == sum(Fraction(coeffs[j]) * x**j for j in range(8))


# -- CLI ------------------------------------------------------------------------


def _run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "ckpoints.cli", *args],
        capture_output=True,
        text=True,
        timeout=900,
    )


def test_cli_search_points():
    res = _run_cli(
        "search-points",
        "--curve",
        "[1,4,6,4,-7,-16,0,8]",
        "--height-bound",
        "40",
    )
    assert res.returncode == 0
    assert "(-1/2, 0)" in res.stdout


def test_cli_config_error_exit_code():
    res = _run_cli("run", "--input", "/nonexistent/file.txt")
    assert res.returncode == 1


def test_cli_bad_arguments_exit_code():
    res = _run_cli("run", "--no-such-flag")
    assert res.returncode == 1


def test_cli_integrate_smoke(ex1):
    res = _run_cli(
        "integrate",
        "--curve",
        "[-103079215104,59055800320,-13656653824,1613758464,-101220352,3134464,-37024,1]",
        "--from",
        "inf",
        "--to",
        "32,0",
        "--prime",
        "7",
        "--precision",
        "10",
    )
    assert res.returncode == 0
    assert "int x^0 dx/2y : O(7^" in res.stdout


def test_cli_frobenius_smoke():
    res = _run_cli(
        "frobenius",
        "--curve",
        "[1,4,6,4,-7,-16,0,8]",
        "--prime",
        "7",
        "--precision",
        "8",
    )
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert doc["zeta_char_poly"][0] == 1
    assert doc["jacobian_order_fp"] > 0


def test_cli_run_partial_failure_exit_code(tmp_path):
    path = tmp_path / "curves.txt"
    path.write_text("[0,0,0,0,0,0,0,1]\n[1,4,6,4,-7,-16,0,8]\n")
    res = _run_cli(
        "run", "--input", str(path), "--height-bound", "10", "--format", "json"
    )
    assert res.returncode == 2
    doc = json.loads(res.stdout)
    assert len(doc["failures"]) == 1
