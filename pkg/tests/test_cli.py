import filecmp
import json
from pathlib import Path

import numpy as np
import pytest

from prodhardy.cli import main
from prodhardy.torus import MultiplierGrid
from prodhardy.corpus import diagonal_lacunary_support


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def dir_bytes(root):
    out = {}
    for p in sorted(Path(root).rglob("*")):
        if p.is_file():
            out[str(p.relative_to(root))] = p.read_bytes()
    return out


@pytest.fixture(scope="module")
def lacunary_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("fixtures") / "lacunary.csv"
    diagonal_lacunary_support(4).indicator((16, 16)).save_csv(path)
    return str(path)


class TestExitCodes:
    def test_malformed_csv_is_usage_error(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("1.0,not-a-number\n")
        assert main(["multiplier-check", str(bad)]) == 2

    def test_missing_file_is_usage_error(self, tmp_path):
        assert main(["multiplier-check", str(tmp_path / "nope.csv")]) == 2

    def test_unknown_command_is_usage_error(self):
        assert main(["frobnicate"]) == 2

    def test_assertion_failure_is_exit_one(self, tmp_path):
        # an unattainable tolerance drives the identity assertion
        code = main(["product-suite", "--grid", "64", "--depth", "1",
                     "--ny", "3", "--tol", "1e-18",
                     "--out", str(tmp_path / "out")])
        assert code == 1


class TestMultiplierCheck:
    def test_lacunary_fixture(self, lacunary_csv, tmp_path):
        out = tmp_path / "mc"
        assert main(["multiplier-check", lacunary_csv, "--out", str(out)]) == 0
        rep = read_json(out / "report.json")
        assert rep["condition_constant"] == 1.0
        assert rep["all_pass"] is True
        for row in rep["witness_lower_bounds"]:
            assert row["value"] >= row["lower_bound"]

    def test_all_ones_window(self, tmp_path):
        path = tmp_path / "ones.csv"
        MultiplierGrid(np.ones((64, 64), dtype=complex)).save_csv(path)
        out = tmp_path / "mc"
        assert main(["multiplier-check", str(path), "--witness-cap", "5",
                     "--out", str(out)]) == 0
        rep = read_json(out / "report.json")
        assert rep["condition_constant"] == 32.0 * 32.0
        assert rep["attaining_block"] == [5, 5]
        top = [r for r in rep["witness_lower_bounds"] if r["block"] == [5, 5]][0]
        assert top["lower_bound"] == 32.0 * 32.0 / 4.0
        assert top["value"] >= top["lower_bound"]


class TestSuites:
    def test_bmo_suite_default(self, tmp_path):
        out = tmp_path / "bmo"
        assert main(["bmo-suite", "--grid", "64", "--out", str(out)]) == 0
        rep = read_json(out / "report.json")
        assert rep["oscillation_identity"]["max_residual_band_limited"] < 1e-8
        assert (out / "tables" / "eps_ladder.csv").exists()
        assert (out / "tables" / "cube_residuals.csv").exists()

    def test_bmo_suite_stdout(self, capsys):
        assert main(["bmo-suite", "--grid", "64"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["command"] == "bmo-suite"

    def test_corpus_size_zero(self, tmp_path):
        out = tmp_path / "corp"
        assert main(["corpus", "--size", "0", "--out", str(out)]) == 0
        stats = read_json(out / "stats.json")
        assert stats["size"] == 0 and stats["paley"] is None
        assert (out / "paley_ratios.csv").read_text().strip() == "index,ratio"

    def test_psi_build_and_reuse(self, tmp_path):
        prof = tmp_path / "psi.json"
        assert main(["psi-build", "--points", "4097", "--window", "4",
                     "--out", str(prof)]) == 0
        out = tmp_path / "prod"
        assert main(["product-suite", "--grid", "64", "--depth", "1",
                     "--ny", "3", "--profile", str(prof),
                     "--out", str(out)]) == 0
        rep = read_json(out / "report.json")
        assert rep["max_box_identity_residual"] < 1e-6
        assert rep["symbol_values"]["one"] == rep["spectral_value"]
        assert (out / "tables" / "scale_identity.csv").exists()


class TestDeterminism:
    def test_bmo_suite_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["bmo-suite", "--grid", "64", "--seed", "3",
                     "--out", str(a)]) == 0
        assert main(["bmo-suite", "--grid", "64", "--seed", "3",
                     "--out", str(b)]) == 0
        assert dir_bytes(a) == dir_bytes(b)
