import json

import numpy as np
import pytest

from formcalc.channels import transpose_map
from formcalc.cli import EXIT_INPUT_ERROR, EXIT_OK, EXIT_VERIFICATION_FAILED, main
from formcalc.harness import channel_to_payload, load_matrix, save_matrix


@pytest.fixture
def files(tmp_path):
    save_matrix(np.diag([0.5, 0.5]).astype(complex), tmp_path / "w.json")
    save_matrix(np.diag([0.75, 0.25]).astype(complex), tmp_path / "v.json")
    save_matrix(np.diag([1.0, 0.0]).astype(complex), tmp_path / "rank1.json")
    save_matrix(np.array([[2, 1], [1, 2]], dtype=complex), tmp_path / "p.json")
    save_matrix(np.array([[2, 1j], [-1j, 2]], dtype=complex), tmp_path / "q.json")
    with open(tmp_path / "transpose.json", "w") as fh:
        json.dump(channel_to_payload(transpose_map(2)), fh)
    pinch = {
        "kind": "kraus",
        "kraus": [
            {"rows": 2, "cols": 2, "data": [[1, 0], [0, 0], [0, 0], [0, 0]]},
            {"rows": 2, "cols": 2, "data": [[0, 0], [0, 0], [0, 0], [1, 0]]},
        ],
    }
    with open(tmp_path / "pinch.json", "w") as fh:
        json.dump(pinch, fh)
    return tmp_path


def test_entropy_closed(files, capsys):
    code = main(
        ["entropy", "--omega", str(files / "w.json"), "--nu", str(files / "v.json")]
    )
    out = capsys.readouterr().out.strip()
    assert code == EXIT_OK
    assert out.startswith("0.1438410362")


def test_entropy_limit(files, capsys):
    code = main(
        [
            "entropy",
            "--omega",
            str(files / "w.json"),
            "--nu",
            str(files / "v.json"),
            "--method",
            "limit",
        ]
    )
    assert code == EXIT_OK
    assert capsys.readouterr().out.strip().startswith("0.14384")


def test_entropy_support_violation_prints_inf(files, capsys):
    code = main(
        ["entropy", "--omega", str(files / "w.json"), "--nu", str(files / "rank1.json")]
    )
    assert code == EXIT_OK
    assert capsys.readouterr().out.strip() == "inf"


def test_repr_build(files, tmp_path, capsys):
    out_path = tmp_path / "rep.json"
    code = main(
        [
            "repr",
            "build",
            "--p",
            str(files / "p.json"),
            "--q",
            str(files / "q.json"),
            "--out",
            str(out_path),
        ]
    )
    assert code == EXIT_OK
    rep = json.loads(out_path.read_text())
    assert rep["support_dim"] == 2


def test_interp_and_geomean(files, tmp_path):
    out_path = tmp_path / "m.json"
    code = main(
        [
            "interp",
            "--p",
            str(files / "p.json"),
            "--q",
            str(files / "q.json"),
            "--t",
            "0.5",
            "--out",
            str(out_path),
        ]
    )
    assert code == EXIT_OK
    via_interp = load_matrix(out_path)
    code = main(
        [
            "geomean",
            "--p",
            str(files / "p.json"),
            "--q",
            str(files / "q.json"),
            "--out",
            str(out_path),
        ]
    )
    assert code == EXIT_OK
    assert np.allclose(load_matrix(out_path), via_interp)


def test_channel_apply(files, tmp_path):
    save_matrix(np.array([[0.5, 0.2], [0.2, 0.5]], dtype=complex), tmp_path / "x.json")
    out_path = tmp_path / "y.json"
    code = main(
        [
            "channel",
            "apply",
            "--channel",
            str(files / "pinch.json"),
            "--input",
            str(tmp_path / "x.json"),
            "--out",
            str(out_path),
        ]
    )
    assert code == EXIT_OK
    assert np.allclose(load_matrix(out_path), np.diag([0.5, 0.5]))


def test_channel_pullback(files, tmp_path):
    out_path = tmp_path / "rho.json"
    code = main(
        [
            "channel",
            "pullback",
            "--channel",
            str(files / "pinch.json"),
            "--omega",
            str(files / "w.json"),
            "--out",
            str(out_path),
        ]
    )
    assert code == EXIT_OK
    assert np.allclose(load_matrix(out_path), np.diag([0.5, 0.5]))


def test_check_schwarz_failure_exits_1(files, capsys):
    code = main(
        ["channel", "check-schwarz", "--channel", str(files / "transpose.json"), "--trials", "5"]
    )
    assert code == EXIT_VERIFICATION_FAILED
    assert "FAIL" in capsys.readouterr().out


def test_verify_paper_example(files, capsys):
    code = main(["verify", "--suites", "paper_example"])
    assert code == EXIT_OK
    assert "pass" in capsys.readouterr().out


def test_verify_report_written(files, tmp_path):
    out_path = tmp_path / "report.json"
    code = main(
        [
            "verify",
            "--suites",
            "paper_example,axioms",
            "--trials",
            "3",
            "--seed",
            "4",
            "--out",
            str(out_path),
        ]
    )
    assert code == EXIT_OK
    report = json.loads(out_path.read_text())
    assert set(report["results"]) == {"paper_example", "axioms"}


def test_verify_failure_writes_counterexample_and_recheck(files, tmp_path, capsys):
    cex_path = tmp_path / "cex.json"
    code = main(
        [
            "verify",
            "--suites",
            "schwarz",
            "--trials",
            "3",
            "--seed",
            "3",
            "--tolerances",
            '{"gap_threshold": 1e6}',
            "--counterexample",
            str(cex_path),
        ]
    )
    assert code == EXIT_VERIFICATION_FAILED
    assert cex_path.exists()
    code = main(["recheck", "--file", str(cex_path)])
    assert code == EXIT_VERIFICATION_FAILED  # still failing, as serialized
    out = capsys.readouterr().out
    assert "reproduced" in out


def test_unknown_subcommand_exits_2(capsys):
    code = main(["frobnicate"])
    assert code == EXIT_INPUT_ERROR
    assert "invalid choice" in capsys.readouterr().err


def test_missing_file_exits_2(files, capsys):
    code = main(["entropy", "--omega", "no-such.json", "--nu", str(files / "v.json")])
    assert code == EXIT_INPUT_ERROR
    assert "error" in capsys.readouterr().err


def test_malformed_matrix_exits_2(files, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"rows": 1, "cols": 1, "data": [[NaN, 0]]}')
    code = main(["entropy", "--omega", str(bad), "--nu", str(files / "v.json")])
    assert code == EXIT_INPUT_ERROR


def test_bad_verify_config_exits_2(files, capsys):
    code = main(["verify", "--suites", "nope"])
    assert code == EXIT_INPUT_ERROR
