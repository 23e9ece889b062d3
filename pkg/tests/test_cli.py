import csv
import io
import json
import os
import subprocess
import sys

import pytest

from reference_tables import SCP_TABLE_EVE
from secmod.cli import OUTPUT_DIR_ENV, run_cli


def _run(capsys, *argv):
    code = run_cli(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture(autouse=True)
def _no_output_dir(monkeypatch):
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)


class TestSepCurve:
    def test_rows(self, capsys):
        code, out, _ = _run(capsys, "sep-curve", "--snr", "20", "-10", "--a-min", "0.05",
                            "--a-max", "0.06", "--a-step", "0.005")
        assert code == 0
        rows = _rows(out)
        assert [r["snr_db"] for r in rows] == ["20.0"] * 3 + ["-10.0"] * 3
        anchor = next(r for r in rows if r["snr_db"] == "20.0" and abs(float(r["a"]) - 0.055) < 1e-12)
        assert float(anchor["sep"]) == pytest.approx(0.094, abs=0.002)

    def test_bad_range(self, capsys):
        code, _, err = _run(capsys, "sep-curve", "--a-min", "0.3", "--a-max", "0.1")
        assert code == 2
        assert json.loads(err)["error"]["type"] == "usage"


class TestPacTable:
    def test_default_grid(self, capsys):
        code, out, _ = _run(capsys, "pac-table")
        assert code == 0
        rows = _rows(out)
        assert len(rows) == 20
        dash = [r for r in rows if r["pac_a"] == "-"]
        assert [(r["snr_eve"], r["msep_b"], r["status"]) for r in dash] == [
            ("-15.0", "0.71", "ConstraintNonBinding")]
        cell = next(r for r in rows if r["snr_eve"] == "-10.0" and r["msep_b"] == "0.73")
        assert float(cell["pac_a"]) == pytest.approx(0.055, abs=1e-3)

    def test_significant_digits(self, capsys):
        _, out, _ = _run(capsys, "pac-table", "--snr-eve", "-10", "--msep", "0.74")
        (row,) = _rows(out)
        assert len(row["sep_eve"].replace("0.", "", 1).lstrip("0")) >= 12

    def test_bad_threshold(self, capsys):
        code, _, err = _run(capsys, "pac-table", "--msep", "0.8")
        assert code == 2
        assert "error" in json.loads(err)


class TestSepBreakdown:
    def test_reference_fields(self, capsys):
        code, out, _ = _run(capsys, "sep-breakdown", "--a", "0.040", "--snr", "-15")
        assert code == 0
        doc = json.loads(out)
        assert set(doc["scp"]) == set(SCP_TABLE_EVE)
        for name, expected in SCP_TABLE_EVE.items():
            assert doc["scp"][name] == pytest.approx(expected, abs=1e-3)
        assert doc["sep"] == pytest.approx(0.7401, abs=1e-3)

    def test_domain_error(self, capsys):
        code, _, err = _run(capsys, "sep-breakdown", "--a", "0.5")
        assert code == 2
        assert json.loads(err)["error"]["type"] == "PacDomainError"


class TestCapacityGap:
    def test_columns(self, capsys):
        code, out, _ = _run(capsys, "capacity-gap", "--snr-leg", "20", "--snr-eve", "-15")
        assert code == 0
        rows = _rows(out)
        assert [r["msep_b"] for r in rows] == ["0.71", "0.72", "0.73", "0.74"]
        assert rows[0]["gap"] == "" and rows[0]["pac_a"] == ""
        assert float(rows[1]["snr_equ_wiretap"]) > float(rows[1]["snr_equ_actual"])


class TestValidate:
    def test_small_grid_passes(self, capsys):
        code, out, _ = _run(capsys, "validate", "--a", "0.05", "--snr", "0", "--trials", "20000")
        assert code == 0
        doc = json.loads(out)
        assert doc["passed"] and len(doc["cells"]) == 1

    def test_zero_trials(self, capsys):
        code, _, err = _run(capsys, "validate", "--trials", "0")
        assert code == 2
        assert json.loads(err)["error"]["code"] == 2

    def test_parallel_output_is_identical(self, capsys):
        args = ["validate", "--a", "0.1", "--snr", "-5", "--trials", "150000"]
        _, serial, _ = _run(capsys, *args)
        _, parallel, _ = _run(capsys, *args, "--workers", "4")
        assert serial == parallel


class TestTransmit:
    def test_random_bits(self, capsys):
        code, out, _ = _run(capsys, "transmit", "--msep", "0.74", "--n-symbols", "5000")
        assert code == 0
        doc = json.loads(out)
        assert doc["codec"] == "raw-mapping"
        assert doc["pac_status"] == "ConstraintActive"

    def test_non_active_pac(self, capsys):
        code, _, err = _run(capsys, "transmit", "--snr-eve", "-15", "--msep", "0.71", "--n-symbols", "10")
        assert code == 3
        assert json.loads(err)["error"]["type"] == "pac_status"

    def test_unknown_flag(self, capsys):
        code, _, err = _run(capsys, "transmit", "--volume", "11")
        assert code == 2
        assert json.loads(err)["error"]["type"] == "usage"

    def test_payload_file(self, capsys, tmp_path):
        src = tmp_path / "img.raw"
        src.write_bytes(bytes(range(48)))
        code, out, _ = _run(capsys, "transmit", "--pac", "0.1", "--payload-kind", "raw-image",
                            "--width", "4", "--height", "4", "--payload", str(src))
        assert code == 0
        assert json.loads(out)["n_symbols"] == 4 * 48

    def test_payload_required(self, capsys):
        code, _, _ = _run(capsys, "transmit", "--pac", "0.1", "--payload-kind", "raw-bytes")
        assert code == 2

    def test_missing_payload_file(self, capsys, tmp_path):
        code, _, err = _run(capsys, "transmit", "--pac", "0.1", "--payload-kind", "raw-bytes",
                            "--payload", str(tmp_path / "absent"))
        assert code == 2
        assert json.loads(err)["error"]["type"] == "FileNotFoundError"

    def test_config_file_and_override(self, capsys, tmp_path):
        cfg = tmp_path / "run.conf"
        cfg.write_text("snr_leg = 20\nsnr_eve = -10\nmsep_b = 0.73\nn_symbols = 4000\nseed = 5\n")
        _, out, _ = _run(capsys, "transmit", "--config", str(cfg))
        doc = json.loads(out)
        assert doc["config"]["msep_b"] == 0.73 and doc["config"]["seed"] == 5
        _, out, _ = _run(capsys, "transmit", "--config", str(cfg), "--seed", "6")
        assert json.loads(out)["config"]["seed"] == 6

    def test_config_unknown_key(self, capsys, tmp_path):
        cfg = tmp_path / "bad.conf"
        cfg.write_text("volume = 11\n")
        code, _, _ = _run(capsys, "transmit", "--config", str(cfg))
        assert code == 2

    def test_config_list_values(self, capsys, tmp_path):
        cfg = tmp_path / "grid.conf"
        cfg.write_text("snr_eve = -10, 0\nmsep = 0.74 0.72\n")
        _, out, _ = _run(capsys, "pac-table", "--config", str(cfg))
        assert len(_rows(out)) == 4

    def test_no_superposition_from_config(self, capsys, tmp_path):
        cfg = tmp_path / "plain.conf"
        cfg.write_text("superposition_enabled = false\nn_symbols = 100\n")
        _, out, _ = _run(capsys, "transmit", "--config", str(cfg))
        assert json.loads(out)["pac_used"] is None


class TestOutput:
    def test_out_file_is_byte_identical_across_runs(self, capsys, tmp_path):
        args = ["transmit", "--msep", "0.72", "--n-symbols", "3000", "--seed", "8"]
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run_cli(args + ["--out", str(a)]) == 0
        assert run_cli(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert capsys.readouterr().out == ""
        assert not [p for p in os.listdir(tmp_path) if p.startswith(".tmp-")]

    def test_env_output_dir(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "results"))
        assert run_cli(["sep-breakdown"]) == 0
        doc = json.loads((tmp_path / "results" / "sep-breakdown.json").read_text())
        assert doc["a"] == 0.04

    def test_dash_forces_stdout(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
        code, out, _ = _run(capsys, "sep-breakdown", "--out", "-")
        assert code == 0 and json.loads(out)["snr_db"] == -15.0
        assert os.listdir(tmp_path) == []

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "secmod", "sep-breakdown", "--snr", "20"],
                              capture_output=True, text=True, check=False)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["sep"] == pytest.approx(0.1511, abs=1e-3)

    def test_missing_subcommand(self, capsys):
        code, _, _ = _run(capsys)
        assert code == 2
