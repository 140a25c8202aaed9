import csv
import io
import json
import math
import subprocess
import sys
from contextlib import redirect_stdout

import pytest

from kcbsim.cli import main
from kcbsim.kcbs import TERM_NAMES

SQRT5 = math.sqrt(5.0)


def run_cli(*argv):
    """Invoke the CLI in-process, returning (exit_code, parsed_json)."""
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    out = buf.getvalue()
    return code, (json.loads(out) if out.strip() else None)


class TestExact:
    def test_values(self):
        code, rec = run_cli("exact")
        assert code == 0
        assert rec["kcbs_value"] == pytest.approx(SQRT5, abs=1e-9)
        assert rec["modified_kcbs_value"] == pytest.approx(SQRT5, abs=1e-9)
        assert rec["nchv_bound"] == 2
        assert rec["nchv_bound_modified"] == 2
        for i in range(1, 6):
            assert rec["terms"][f"L{i}"] == pytest.approx(1 / SQRT5, abs=1e-9)

    def test_float_fidelity_round_trips(self):
        _, rec = run_cli("exact")
        again = json.loads(json.dumps(rec))
        assert again == rec
        assert again["kcbs_value"] == rec["kcbs_value"]  # bit-exact through JSON


class TestValidate:
    def test_all_checks_pass(self):
        code, rec = run_cli("validate")
        assert code == 0
        assert rec["status"] == "ok"
        names = {c["check"] for c in rec["checks"]}
        assert "pulse_closure" in names
        assert "gram_equivalence" in names
        for check in rec["checks"]:
            assert check["defect"] < check["tolerance"]

    def test_gram_deviation_reported(self):
        _, rec = run_cli("validate")
        gram = next(c for c in rec["checks"] if c["check"] == "gram_equivalence")
        assert gram["defect"] < 1e-10

    def test_injected_wrong_gamma_fails(self):
        code, rec = run_cli("validate", "--gamma", str(math.acos(-0.5)))
        assert code != 0
        assert rec["status"] == "failed"
        assert rec["failed_check"] == "ClosureFailure"


class TestSimulate:
    def test_ideal_run(self):
        code, rec = run_cli(
            "simulate", "--preset", "ideal", "--shots", "2000", "--seed", "42"
        )
        assert code == 0
        value = rec["modified_kcbs_value"]
        assert abs(value - SQRT5) < 5 * rec["inequality_stderr"]
        assert rec["shots_per_term"] == 2000
        assert rec["seed"] == 42
        assert set(rec["terms"]) == set(TERM_NAMES)

    def test_deterministic_record(self):
        args = ("simulate", "--preset", "ideal", "--shots", "1000", "--seed", "7")
        _, a = run_cli(*args)
        _, b = run_cli(*args)
        a.pop("wall_clock_seconds")
        b.pop("wall_clock_seconds")
        assert a == b

    def test_byte_identical_stdout_across_processes(self):
        cmd = [
            sys.executable, "-m", "kcbsim",
            "simulate", "--preset", "ideal", "--shots", "500", "--seed", "3",
        ]
        out1 = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
        out2 = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
        a, b = json.loads(out1), json.loads(out2)
        a.pop("wall_clock_seconds")
        b.pop("wall_clock_seconds")
        assert a == b

    def test_csv_output(self, tmp_path):
        path = tmp_path / "terms.csv"
        code, rec = run_cli(
            "simulate", "--preset", "ideal", "--shots", "500", "--seed", "1",
            "--csv", str(path),
        )
        assert code == 0
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["term", "estimate", "stderr", "shots"]
        assert [r[0] for r in rows[1:]] == list(TERM_NAMES)
        for row in rows[1:]:
            # estimates round-trip at full precision and match the record
            assert float(row[1]) == rec["terms"][row[0]]
            assert float(row[2]) == rec["stderrs"][row[0]]
            assert int(row[3]) == 500

    def test_pair_order_flag(self):
        code, rec = run_cli(
            "simulate", "--preset", "ideal", "--shots", "1000", "--seed", "5",
            "--pair-order", "reverse",
        )
        assert code == 0
        assert rec["config"]["pair_order"] == "reverse"
        assert abs(rec["modified_kcbs_value"] - SQRT5) < 5 * rec["inequality_stderr"]

    def test_config_file(self, tmp_path):
        cfg = tmp_path / "run.yaml"
        cfg.write_text(
            "shots_per_term: 400\nseed: 11\nnoise:\n  lambda_bright: 50.0\n"
            "  lambda_dark: 0.0\n  readout_threshold: 8\n"
        )
        code, rec = run_cli("simulate", "--config", str(cfg))
        assert code == 0
        assert rec["shots_per_term"] == 400
        assert rec["seed"] == 11
        assert rec["config"]["noise"]["lambda_bright"] == 50.0

    def test_flags_override_config_file(self, tmp_path):
        cfg = tmp_path / "run.yaml"
        cfg.write_text("shots_per_term: 400\nseed: 11\n")
        code, rec = run_cli("simulate", "--config", str(cfg), "--seed", "99",
                            "--shots", "300")
        assert code == 0
        assert rec["seed"] == 99
        assert rec["shots_per_term"] == 300

    def test_insufficient_data_exit(self, tmp_path, capsys):
        cfg = tmp_path / "blocked.yaml"
        cfg.write_text("shots_per_term: 10\nnoise:\n  charge_good_prob: 0.0\n")
        code, _ = run_cli("simulate", "--config", str(cfg))
        assert code != 0

    def test_config_error_names_field(self, tmp_path, capsys):
        cfg = tmp_path / "bad.yaml"
        cfg.write_text("noise:\n  init_error_prob: 2.0\n")
        code, _ = run_cli("simulate", "--config", str(cfg))
        assert code != 0
        err = capsys.readouterr().err
        assert "init_error_prob" in err

    def test_unknown_preset(self, capsys):
        code, _ = run_cli("simulate", "--preset", "nope")
        assert code != 0
        assert "nope" in capsys.readouterr().err

    def test_unknown_config_key(self, tmp_path, capsys):
        cfg = tmp_path / "bad.yaml"
        cfg.write_text("shots: 100\n")
        code, _ = run_cli("simulate", "--config", str(cfg))
        assert code != 0
        assert "shots" in capsys.readouterr().err

    def test_paper_preset_loads(self):
        code, rec = run_cli(
            "simulate", "--preset", "paper-2015", "--shots", "500", "--seed", "1"
        )
        assert code == 0
        assert rec["preset"] == "paper-2015"
        assert rec["discarded_shots"] > 0


class TestSpectrum:
    def test_reference_values(self):
        code, rec = run_cli("spectrum")
        assert code == 0
        assert rec["f_low_mhz"] == pytest.approx(3.2158, abs=1e-3)
        assert rec["f_high_mhz"] == pytest.approx(6.6842, abs=1e-3)

    def test_zero_field(self):
        _, rec = run_cli("spectrum", "--B", "0")
        assert rec["f_low_mhz"] == rec["f_high_mhz"] == pytest.approx(4.95)

    def test_zero_gyromagnetic(self):
        _, rec = run_cli("spectrum", "--gamma-n", "0")
        assert rec["f_low_mhz"] == rec["f_high_mhz"] == pytest.approx(4.95)

    def test_nonfinite_rejected(self, capsys):
        code, _ = run_cli("spectrum", "--Q", "nan")
        assert code != 0
