"""End-to-end command line behavior: exit codes, reports, re-verification."""

import json
import time
from pathlib import Path

import pytest

from affinor_rank.cli import (
    EXIT_DATA,
    EXIT_INCONCLUSIVE,
    EXIT_NEGATIVE,
    EXIT_POSITIVE,
    EXIT_USAGE,
    main,
    verify_certificate,
)
from affinor_rank.errors import MissingCertificate

FIXTURES = Path(__file__).parent.parent / "docs" / "fixtures"


def _run(capsys, *argv) -> tuple[int, dict]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def _strip_time(report: dict) -> dict:
    cleaned = dict(report)
    cleaned.pop("wall_time_s", None)
    return cleaned


# ---------------------------------------------------------------------------
# rank
# ---------------------------------------------------------------------------


def test_rank_weak_positive(capsys):
    code, report = _run(capsys, "rank", str(FIXTURES / "complex_r4_basis.json"))
    assert code == EXIT_POSITIVE
    assert report["result"]["outcome"] == "certified"
    assert report["result"]["claimed_rank"] == 2


def test_rank_generic_quaternions_r8(capsys, tmp_path):
    out = tmp_path / "report.json"
    code = main([
        "rank", str(FIXTURES / "quaternion_r8_basis.json"), "--generic",
        "--out", str(out),
    ])
    assert code == EXIT_POSITIVE
    report = json.loads(out.read_text())
    assert report["result"]["kind"] == "generic"
    assert report["result"]["claimed_rank"] == 4
    assert verify_certificate(out)


def test_rank_generic_dimension_too_small(capsys):
    code, report = _run(
        capsys, "rank", str(FIXTURES / "quaternion_r4_basis.json"), "--generic"
    )
    assert code == EXIT_INCONCLUSIVE
    assert report["result"]["reason"] == "DimensionTooSmall"


def test_rank_probe_inversion(capsys):
    code, report = _run(
        capsys, "rank", str(FIXTURES / "quaternion_r4_basis.json"),
        "--probe-inversion", "--trials", "16",
    )
    assert code == EXIT_POSITIVE
    assert report["result"]["inversion_probe"]["outcome"] == "all_sampled_invertible"


# ---------------------------------------------------------------------------
# algebra / frobenius
# ---------------------------------------------------------------------------


def test_algebra_verify_positive(capsys):
    code, report = _run(
        capsys, "algebra", "verify", str(FIXTURES / "dual_numbers_constants.json")
    )
    assert code == EXIT_POSITIVE
    assert report["result"]["valid"] is True


def test_algebra_verify_negative(capsys, tmp_path):
    broken = {"n": 2, "C": [[[1, 0], [0, 0]], [[0, 1], [0, 0]]]}
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(broken))
    code, report = _run(capsys, "algebra", "verify", str(path))
    assert code == EXIT_NEGATIVE
    assert report["result"]["unity"]["violations"]


def test_frobenius_positive(capsys):
    code, report = _run(
        capsys, "frobenius", str(FIXTURES / "dual_numbers_constants.json")
    )
    assert code == EXIT_POSITIVE
    assert report["result"]["frobenius"]["status"] == "frobenius"
    assert report["result"]["agree"] is True


def test_frobenius_negative_with_proof(capsys):
    code, report = _run(capsys, "frobenius", str(FIXTURES / "local3_constants.json"))
    assert code == EXIT_NEGATIVE
    assert report["result"]["frobenius"]["status"] == "not_frobenius"
    assert report["result"]["frobenius"]["proof"]["kind"] == "symbolic_zero_determinant"
    assert report["result"]["agree"] is True


# ---------------------------------------------------------------------------
# clifford / distributions
# ---------------------------------------------------------------------------


def test_clifford_emit_and_check(capsys, tmp_path):
    emitted = tmp_path / "cl02.json"
    code, report = _run(
        capsys, "clifford", "--s", "0", "--t", "2",
        "--emit", str(emitted), "--check-rank",
    )
    assert code == EXIT_POSITIVE
    assert report["result"]["relations"]["ok"] is True
    assert report["result"]["claimed_rank"] == 4
    # the emitted basis must round-trip through the rank command
    code2, report2 = _run(capsys, "rank", str(emitted))
    assert code2 == EXIT_POSITIVE
    assert report2["result"]["claimed_rank"] == 4


def test_distributions_generic(capsys):
    code, report = _run(capsys, "distributions", "--dims", "2,2")
    assert code == EXIT_POSITIVE
    assert report["result"]["rank"]["weak"]["claimed_rank"] == 2
    assert report["result"]["rank"]["generic"]["claimed_rank"] == 2


def test_distributions_conjugated(capsys):
    code, report = _run(
        capsys, "distributions", "--dims", "2,2",
        "--conjugate", str(FIXTURES / "conjugation_q4.json"),
    )
    assert code == EXIT_POSITIVE
    assert report["result"]["verification"]["ok"] is True


def test_distributions_inapplicable_dims(capsys):
    code, report = _run(capsys, "distributions", "--dims", "1,1,1,1")
    assert code == EXIT_POSITIVE
    assert report["result"]["rank"]["generic"]["outcome"] == "inapplicable"


def test_distributions_thin_block_inconclusive(capsys):
    code, report = _run(capsys, "distributions", "--dims", "1,3", "--trials", "24")
    assert code == EXIT_INCONCLUSIVE
    assert report["result"]["rank"]["generic"]["outcome"] == "no_witness_found"


def test_distributions_bad_dims_usage(capsys):
    assert main(["distributions", "--dims", "2,x"]) == EXIT_USAGE


# ---------------------------------------------------------------------------
# planar
# ---------------------------------------------------------------------------


def test_planar_helix_counterexample(capsys):
    code, report = _run(
        capsys, "planar",
        "--basis", str(FIXTURES / "complex_r4_basis.json"),
        "--connection", str(FIXTURES / "flat4_connection.json"),
        "--curve", str(FIXTURES / "helix_curve.json"),
    )
    assert code == EXIT_NEGATIVE
    assert report["result"]["verdict"] == "not_planar"
    assert report["result"]["counterexample"]["t"] == 0.0


def test_planar_circle_r2(capsys):
    code, report = _run(
        capsys, "planar",
        "--basis", str(FIXTURES / "complex_r2_basis.json"),
        "--connection", str(FIXTURES / "flat2_connection.json"),
        "--curve", str(FIXTURES / "circle2_curve.json"),
    )
    assert code == EXIT_POSITIVE
    assert report["result"]["verdict"] == "planar"


# ---------------------------------------------------------------------------
# verify-report and error handling
# ---------------------------------------------------------------------------


def test_verify_report_tampered_witness(capsys, tmp_path):
    out = tmp_path / "report.json"
    main(["rank", str(FIXTURES / "complex_r4_basis.json"), "--out", str(out)])
    report = json.loads(out.read_text())
    report["result"]["certificate"]["witness"] = [0, 0, 0, 0]
    tampered = tmp_path / "tampered.json"
    tampered.write_text(json.dumps(report))
    code, verdict = _run(capsys, "verify-report", str(tampered))
    assert code == EXIT_NEGATIVE
    assert verdict["result"]["verified"] is False


def test_verify_report_bumped_rank(capsys, tmp_path):
    out = tmp_path / "report.json"
    main(["rank", str(FIXTURES / "complex_r4_basis.json"), "--out", str(out)])
    report = json.loads(out.read_text())
    report["result"]["certificate"]["claimed_rank"] = 3
    report["result"]["claimed_rank"] = 3
    tampered = tmp_path / "tampered.json"
    tampered.write_text(json.dumps(report))
    assert main(["verify-report", str(tampered)]) == EXIT_NEGATIVE


def test_verify_report_missing_certificate(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text(json.dumps({"result": {}}))
    with pytest.raises(MissingCertificate):
        verify_certificate(path)
    assert main(["verify-report", str(path)]) == EXIT_DATA


def test_malformed_input_exits_with_data_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{oops")
    code = main(["rank", str(path)])
    err = capsys.readouterr().err
    assert code == EXIT_DATA
    assert str(path) in err


def test_unknown_command_is_usage_error():
    assert main(["transmogrify"]) == EXIT_USAGE


def test_env_seed_respected(capsys, monkeypatch):
    monkeypatch.setenv("AFFINOR_RANK_SEED", "17")
    _, report = _run(capsys, "rank", str(FIXTURES / "complex_r4_basis.json"))
    assert report["result"]["evidence"]["seed"] == 17
    _, report2 = _run(
        capsys, "rank", str(FIXTURES / "complex_r4_basis.json"), "--seed", "3"
    )
    assert report2["result"]["evidence"]["seed"] == 3


def test_reports_are_deterministic(capsys):
    runs = []
    for _ in range(2):
        _, report = _run(
            capsys, "rank", str(FIXTURES / "quaternion_r8_basis.json"),
            "--generic", "--seed", "0",
        )
        runs.append(json.dumps(_strip_time(report), sort_keys=True))
    assert runs[0] == runs[1]


def test_text_format(capsys):
    code = main([
        "rank", str(FIXTURES / "complex_r4_basis.json"), "--format", "text"
    ])
    out = capsys.readouterr().out
    assert code == EXIT_POSITIVE
    assert "exit 0" in out
    assert "claimed_rank: 2" in out


def test_doc_fixtures_all_run_quickly(capsys):
    invocations = [
        ["rank", str(FIXTURES / "complex_r4_basis.json")],
        ["rank", str(FIXTURES / "complex_r2_basis.json")],
        ["rank", str(FIXTURES / "quaternion_r8_basis.json"), "--generic"],
        ["rank", str(FIXTURES / "quaternion_r4_basis.json")],
        ["algebra", "verify", str(FIXTURES / "dual_numbers_constants.json")],
        ["algebra", "verify", str(FIXTURES / "local3_constants.json")],
        ["frobenius", str(FIXTURES / "dual_numbers_constants.json")],
        ["frobenius", str(FIXTURES / "local3_constants.json")],
        ["planar",
         "--basis", str(FIXTURES / "complex_r4_basis.json"),
         "--connection", str(FIXTURES / "flat4_connection.json"),
         "--curve", str(FIXTURES / "helix_curve.json")],
        ["planar",
         "--basis", str(FIXTURES / "complex_r2_basis.json"),
         "--connection", str(FIXTURES / "flat2_connection.json"),
         "--curve", str(FIXTURES / "circle2_curve.json")],
        ["distributions", "--dims", "2,2",
         "--conjugate", str(FIXTURES / "conjugation_q4.json")],
    ]
    for argv in invocations:
        start = time.monotonic()
        code = main(argv)
        elapsed = time.monotonic() - start
        capsys.readouterr()
        assert code in (EXIT_POSITIVE, EXIT_NEGATIVE, EXIT_INCONCLUSIVE), argv
        assert elapsed < 10.0, argv
