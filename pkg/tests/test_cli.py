import json

import numpy as np
import pytest

from maxconf import max_confidence, parse_spec
from maxconf.cli import main


WORKED = "fixtures/worked_example.json"
TRINE = "fixtures/trine.json"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestBound:
    def test_text_output_lists_every_state(self, capsys):
        code, out, err = run(capsys, "bound", TRINE)
        assert code == 0
        assert err == ""
        assert out.count("bound") >= 3
        assert "0.6666666666666666" in out

    def test_machine_output_round_trips_library_floats(self, capsys):
        code, out, _ = run(capsys, "bound", WORKED, "--output", "machine")
        assert code == 0
        doc = json.loads(out)
        ens = parse_spec(WORKED)
        for entry in doc["states"]:
            assert entry["bound"] == max_confidence(ens, entry["label"])

    def test_worked_example_kinds(self, capsys):
        _, out, _ = run(capsys, "bound", WORKED, "--output", "machine")
        doc = json.loads(out)
        kinds = [entry["kind"] for entry in doc["states"]]
        assert kinds == ["mixed", "pure"]


class TestPom:
    def test_trine_effects_and_no_fail_weight(self, capsys):
        code, out, _ = run(capsys, "pom", TRINE, "--output", "machine")
        assert code == 0
        doc = json.loads(out)
        assert abs(doc["inconclusive_probability"]) <= 1e-12
        fail = np.array([[complex(re, im) for re, im in row] for row in doc["fail_effect"]])
        assert np.abs(fail).max() <= 1e-12
        assert len(doc["states"]) == 3


class TestVerify:
    def test_fixtures_pass(self, capsys):
        for spec in (WORKED, TRINE):
            code, out, _ = run(capsys, "verify", spec)
            assert code == 0
            assert "status" in out
            assert "pass" in out

    def test_impossible_tolerance_fails(self, capsys):
        code, out, _ = run(capsys, "verify", WORKED, "--tolerance", "1e-30", "--output", "machine")
        assert code == 1
        doc = json.loads(out)
        assert doc["status"] == "fail"
        assert doc["exceeded"]

    def test_machine_report_checks_are_tiny(self, capsys):
        _, out, _ = run(capsys, "verify", TRINE, "--output", "machine")
        doc = json.loads(out)
        for name, value in doc["checks"].items():
            if value is None:
                continue
            assert value <= 1e-9, name
        for entry in doc["states"]:
            assert entry["bound_gap"] <= 1e-9
            assert entry["achievability_gap"] <= 1e-9
            assert entry["crosspicture_gap"] <= 1e-9
            assert entry["leakage"] <= 1e-10


class TestSimulate:
    def test_byte_identical_reruns(self, capsys):
        args = ("simulate", TRINE, "--trials", "20000", "--seed", "42", "--output", "machine")
        _, first, _ = run(capsys, *args)
        _, second, _ = run(capsys, *args)
        assert first == second

    def test_seed_changes_counts(self, capsys):
        _, a, _ = run(capsys, "simulate", TRINE, "--trials", "5000", "--seed", "1", "--output", "machine")
        _, b, _ = run(capsys, "simulate", TRINE, "--trials", "5000", "--seed", "2", "--output", "machine")
        assert a != b
        counts = lambda s: [o["count"] for o in json.loads(s)["outcomes"]]
        assert counts(a) != counts(b)

    def test_conditional_frequencies_near_bound(self, capsys):
        _, out, _ = run(
            capsys, "simulate", TRINE, "--trials", "100000", "--seed", "42", "--output", "machine"
        )
        doc = json.loads(out)
        assert doc["trials"] == 100000
        for entry in doc["outcomes"]:
            assert abs(entry["frequency"] - 2.0 / 3.0) <= 0.01
            assert abs(entry["expected_confidence"] - 2.0 / 3.0) <= 1e-12
            assert abs(entry["frequency"] - entry["expected_confidence"]) <= entry["band_3sigma"]
        assert doc["fail"]["count"] == 0


class TestTransform:
    def test_unitary_preserves_bounds(self, capsys, tmp_path):
        kraus = tmp_path / "hadamard.json"
        h = 1.0 / np.sqrt(2.0)
        kraus.write_text(json.dumps([[[h, 0.0], [h, 0.0]], [[h, 0.0], [-h, 0.0]]]))
        code, out, _ = run(capsys, "transform", WORKED, "--kraus", str(kraus), "--output", "machine")
        assert code == 0
        doc = json.loads(out)
        assert doc["status"] == "pass"
        for entry in doc["states"]:
            assert entry["verdict"] == "invariant"

    def test_rank_deficient_filter_reports_decrease(self, capsys, tmp_path):
        kraus = tmp_path / "collapse.json"
        kraus.write_text(json.dumps([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]))
        code, out, _ = run(capsys, "transform", TRINE, "--kraus", str(kraus), "--output", "machine")
        assert code == 0
        doc = json.loads(out)
        verdicts = [entry["verdict"] for entry in doc["states"]]
        assert verdicts.count("decreased") == 2
        assert verdicts.count("invariant") == 1

    def test_missing_kraus_flag_exits_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["transform", WORKED])
        assert exc.value.code == 2
        assert "kraus" in capsys.readouterr().err


class TestConcentrate:
    def test_flattens_schmidt_spectrum(self, capsys):
        code, out, _ = run(capsys, "concentrate", WORKED, "--output", "machine")
        assert code == 0
        doc = json.loads(out)
        after = doc["schmidt_after"]
        assert len(after) == 2
        for lam in after:
            assert abs(lam - 0.5) <= 1e-12
        assert 0.0 < doc["success_probability"] <= 1.0


class TestErrors:
    def test_missing_file_exits_two(self, capsys):
        code, out, err = run(capsys, "bound", "no/such/spec.json")
        assert code == 2
        assert out == ""
        assert err.startswith("error:")
        assert "cannot read" in err

    def test_invalid_json_exits_two(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{broken")
        code, _, err = run(capsys, "verify", str(bad))
        assert code == 2
        assert "not valid JSON" in err

    def test_semantic_error_exits_two(self, capsys, tmp_path):
        doc = {
            "dimension": 2,
            "states": [
                {"prior": 0.6, "ket": [[1.0, 0.0], [0.0, 0.0]]},
                {"prior": 0.5, "ket": [[0.0, 0.0], [1.0, 0.0]]},
            ],
        }
        bad = tmp_path / "sum.json"
        bad.write_text(json.dumps(doc))
        code, _, err = run(capsys, "bound", str(bad))
        assert code == 2
        assert "priors sum to 1.1" in err

    def test_unknown_subcommand_exits_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate", TRINE])
        assert exc.value.code == 2

    def test_overweight_kraus_exits_two(self, capsys, tmp_path):
        kraus = tmp_path / "big.json"
        kraus.write_text(json.dumps([[[2.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [2.0, 0.0]]]))
        code, _, err = run(capsys, "transform", TRINE, "--kraus", str(kraus))
        assert code == 2
        assert "overweights" in err


class TestTextRendering:
    def test_floats_round_trip_in_text_mode(self, capsys):
        _, out, _ = run(capsys, "bound", TRINE)
        assert "0.6666666666666666" in out
        assert "0.3333333333333333" in out

    def test_verify_text_mentions_each_check(self, capsys):
        _, out, _ = run(capsys, "verify", WORKED)
        for key in ("purification_residual", "marginal_deviation", "status"):
            assert key in out
