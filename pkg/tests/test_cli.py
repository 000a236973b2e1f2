"""CLI tests: document parsing and round-trip, command dispatch, exit codes,
and byte-level report reproducibility."""

import json

import numpy as np
import pytest

from riccati_kyp import DimensionMismatch, ParseError
from riccati_kyp.cli import (
    EXIT_CODES,
    SystemDocument,
    document_from_dict,
    main,
    parse_system,
    write_system,
)
from conftest import two_state_re_solutions


def scalar_interval_doc() -> dict:
    return {
        "name": "scalar-interval",
        "A": [[[-0.125, 0.0]]],
        "B": [[[1.0, 0.0]]],
        "C": [[[0.1875, 0.0]]],
        "D": [[[0.5, 0.0]]],
        "candidates": {
            "Hre": [[[0.046875, 0.0]]],
            "Hmid": [[[0.5, 0.0]]],
            "Hout": [[[0.01, 0.0]]],
        },
    }


def two_state_doc() -> dict:
    a, b = 3.0 / 5.0, 4.0 / 5.0
    enc = lambda m: [[[float(x), 0.0] for x in row] for row in np.atleast_2d(m)]
    return {
        "name": "two-state",
        "A": enc([[0, a], [b, 0]]),
        "B": enc([[0], [a]]),
        "C": enc([[0, b]]),
        "D": enc([[0]]),
        "candidates": {"identity": enc(np.eye(2))},
    }


def coisometry_doc() -> dict:
    return {
        "name": "coisometry",
        "A": [[[0.0, 0.0]]],
        "B": [[[1.0, 0.0], [0.0, 0.0]]],
        "C": [[[1.0, 0.0]]],
        "D": [[[0.0, 0.0], [0.0, 0.0]]],
    }


@pytest.fixture
def scalar_doc_path(tmp_path):
    path = tmp_path / "scalar.json"
    path.write_text(json.dumps(scalar_interval_doc()))
    return str(path)


class TestParsing:
    def test_valid_document(self, scalar_doc_path):
        doc = parse_system(scalar_doc_path)
        assert doc.name == "scalar-interval"
        assert doc.a.shape == (1, 1)
        assert doc.a[0, 0] == -0.125
        assert set(doc.candidates) == {"Hre", "Hmid", "Hout"}
        sigma = doc.realization()
        assert sigma.state_dim == 1

    def test_empty_matrix_rejected(self):
        raw = scalar_interval_doc()
        raw["A"] = []
        with pytest.raises(ParseError):
            document_from_dict(raw)

    def test_malformed_entry_rejected(self):
        raw = scalar_interval_doc()
        raw["B"] = [[[1.0]]]  # not a [re, im] pair
        with pytest.raises(ParseError):
            document_from_dict(raw)

    def test_missing_matrix_rejected(self):
        raw = scalar_interval_doc()
        del raw["C"]
        with pytest.raises(ParseError):
            document_from_dict(raw)

    def test_inconsistent_rows_rejected(self):
        raw = two_state_doc()
        raw["B"] = [[[0.0, 0.0]]]  # one row, state dimension is two
        with pytest.raises(DimensionMismatch):
            document_from_dict(raw)

    def test_candidate_shape_rejected(self):
        raw = scalar_interval_doc()
        raw["candidates"] = {"bad": [[[1.0, 0.0], [0.0, 0.0]]]}
        with pytest.raises(DimensionMismatch):
            document_from_dict(raw)

    def test_round_trip_is_bit_exact(self):
        rng = np.random.default_rng(60)
        mats = {
            "A": rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)),
            "B": rng.standard_normal((2, 1)) + 1j * rng.standard_normal((2, 1)),
            "C": rng.standard_normal((1, 2)) + 1j * rng.standard_normal((1, 2)),
            "D": rng.standard_normal((1, 1)) + 1j * rng.standard_normal((1, 1)),
        }
        doc = SystemDocument(
            name="random",
            a=mats["A"],
            b=mats["B"],
            c=mats["C"],
            d=mats["D"],
            candidates={"H": np.eye(2) * np.pi},
        )
        restored = document_from_dict(json.loads(json.dumps(write_system(doc))))
        for key in ("a", "b", "c", "d"):
            assert np.array_equal(getattr(restored, key), getattr(doc, key))
        assert np.array_equal(restored.candidates["H"], doc.candidates["H"])


class TestCommands:
    def test_extremes_reports_both_endpoints(self, scalar_doc_path, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(
            ["extremes", "--system", scalar_doc_path, "--out", str(out), "--no-timings"]
        )
        assert code == 0
        report = json.loads(out.read_text())
        h_min = report["extremes"]["minimal"][0][0][0]
        h_max = report["extremes"]["maximal"][0][0][0]
        assert abs(h_min - 3.0 / 64.0) <= 1e-9
        assert abs(h_max - 0.75) <= 1e-9
        assert report["extremes"]["duality"]["re_inversion_equal"] is False

    def test_check_identity_on_two_state(self, tmp_path, capsys):
        path = tmp_path / "two_state.json"
        path.write_text(json.dumps(two_state_doc()))
        code = main(
            ["check", "--system", str(path), "--candidate", "identity", "--no-timings"]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["check"]["in_re"] is True
        assert report["check"]["in_ri"] is True

    def test_analyze_coisometry(self, tmp_path, capsys):
        path = tmp_path / "coisometry.json"
        path.write_text(json.dumps(coisometry_doc()))
        code = main(
            ["analyze", "--system", str(path), "--grid", "512", "--no-timings"]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["analyze"]["circle"]["coinner"] is True
        assert report["analyze"]["circle"]["inner"] is False
        assert report["analyze"]["uniqueness"]["verdict"] == "unique_singleton"
        assert report["analyze"]["uniqueness"]["reason"] == "coinner_fl0"

    def test_solve_re_two_state(self, tmp_path, capsys):
        path = tmp_path / "two_state.json"
        path.write_text(json.dumps(two_state_doc()))
        code = main(["solve-re", "--system", str(path), "--no-timings"])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        members = report["solve_re"]["members"]
        assert len(members) == 4
        found = [np.array([[complex(*e) for e in row] for row in m]) for m in members]
        for target in two_state_re_solutions():
            assert min(np.abs(f - target).max() for f in found) <= 1e-8
        assert report["solve_re"]["minimal_index"] == 0
        assert report["solve_re"]["maximal_index"] == 3

    def test_simulate_with_margins(self, scalar_doc_path, tmp_path, capsys):
        inputs = tmp_path / "inputs.json"
        inputs.write_text(
            json.dumps({"x0": [[1.0, 0.0]], "inputs": [[[1.0, 0.0]], [[0.0, 0.0]]]})
        )
        code = main(
            [
                "simulate",
                "--system",
                scalar_doc_path,
                "--inputs",
                str(inputs),
                "--candidate",
                "Hre",
                "--no-timings",
            ]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        states = report["simulate"]["states"]
        assert abs(states[1][0][0] - 7.0 / 8.0) <= 1e-12
        assert abs(states[2][0][0] + 7.0 / 64.0) <= 1e-12
        outputs = report["simulate"]["outputs"]
        assert abs(outputs[0][0][0] - 11.0 / 16.0) <= 1e-12
        assert report["simulate"]["dissipation"]["min_margin"] >= -1e-10

    def test_report_command_covers_candidates(self, scalar_doc_path, capsys):
        code = main(
            ["report", "--system", scalar_doc_path, "--grid", "256", "--no-timings"]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["check"]["Hre"]["in_re"] is True
        assert report["check"]["Hmid"]["in_ri"] is True
        assert report["check"]["Hmid"]["in_re"] is False
        assert report["check"]["Hout"]["in_ri"] is False
        assert report["analyze"]["uniqueness"]["verdict"] == "unknown"
        assert "timings" not in report

    def test_config_echoed_verbatim(self, scalar_doc_path, capsys):
        code = main(
            [
                "analyze",
                "--system",
                scalar_doc_path,
                "--grid",
                "128",
                "--tol",
                "1e-8",
                "--seed",
                "9",
                "--no-timings",
            ]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["config"] == {
            "tol": 1e-8,
            "grid": 128,
            "seed": 9,
            "eq_tol": 1e-7,
            "c3_tol": 1e-7,
        }


class TestExitCodes:
    def test_missing_candidate_is_parse_error(self, scalar_doc_path, capsys):
        code = main(["check", "--system", scalar_doc_path, "--no-timings"])
        payload = json.loads(capsys.readouterr().out)
        assert code == EXIT_CODES[ParseError] == 2
        assert payload["error"]["category"] == "ParseError"
        assert payload["error"]["exit_code"] == code

    def test_unknown_candidate(self, scalar_doc_path, capsys):
        code = main(
            ["check", "--system", scalar_doc_path, "--candidate", "nope", "--no-timings"]
        )
        assert code == EXIT_CODES[ParseError]

    def test_invalid_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{ not json")
        code = main(["analyze", "--system", str(path), "--no-timings"])
        assert code == EXIT_CODES[ParseError]

    def test_indefinite_candidate_maps_to_not_pd(self, tmp_path, capsys):
        raw = scalar_interval_doc()
        raw["candidates"]["neg"] = [[[-1.0, 0.0]]]
        path = tmp_path / "neg.json"
        path.write_text(json.dumps(raw))
        code = main(
            ["check", "--system", str(path), "--candidate", "neg", "--no-timings"]
        )
        payload = json.loads(capsys.readouterr().out)
        assert payload["error"]["category"] == "NotPD"
        from riccati_kyp import NotPD

        assert code == EXIT_CODES[NotPD]

    def test_exit_codes_are_distinct(self):
        codes = list(EXIT_CODES.values())
        assert len(codes) == len(set(codes))
        assert 0 not in codes and 1 not in codes


class TestReproducibility:
    def test_reports_byte_identical_without_timings(self, tmp_path, scalar_doc_path):
        out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
        for out in (out1, out2):
            code = main(
                [
                    "report",
                    "--system",
                    scalar_doc_path,
                    "--grid",
                    "256",
                    "--seed",
                    "3",
                    "--out",
                    str(out),
                    "--no-timings",
                ]
            )
            assert code == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_timings_present_by_default(self, scalar_doc_path, capsys):
        code = main(["analyze", "--system", scalar_doc_path, "--grid", "128"])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert "timings" in report and "analyze" in report["timings"]
