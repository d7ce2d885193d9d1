import json

import pytest
from click.testing import CliRunner

from lieposet.cli import main
from lieposet.poset import Poset
from lieposet.toral import FIGURE4_TEXT


@pytest.fixture
def runner():
    return CliRunner()


def write_antichain3(tmp_path):
    path = tmp_path / "antichain.json"
    Poset.antichain(3).save(path)
    return path


class TestVerifyPair:
    def test_catalog_family(self, runner):
        result = runner.invoke(main, ["verify-pair", "P2"])
        assert result.exit_code == 0
        assert "toral-pair" in result.output
        assert "FAIL" not in result.output

    def test_parametric_family(self, runner):
        result = runner.invoke(main, ["verify-pair", "P4", "6", "--json"])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["all_ok"] is True

    def test_unknown_family_is_domain_error(self, runner):
        result = runner.invoke(main, ["verify-pair", "P17"])
        assert result.exit_code == 1

    def test_file_pair_round_trip(self, runner, tmp_path):
        emit = runner.invoke(main, ["catalog", "P2", "--emit", "--out", str(tmp_path)])
        assert emit.exit_code == 0
        verify = runner.invoke(main, [
            "verify-pair",
            str(tmp_path / "P2.poset.json"),
            str(tmp_path / "P2.functional.json"),
            "--json",
        ])
        assert verify.exit_code == 0
        assert json.loads(verify.output)["all_ok"] is True


class TestIndexCommand:
    def test_antichain_prints_two(self, runner, tmp_path):
        path = write_antichain3(tmp_path)
        result = runner.invoke(main, ["index", str(path)])
        assert result.exit_code == 0
        assert "index: 2" in result.output
        assert "seed=" in result.output  # reproducibility header

    def test_json_output(self, runner, tmp_path):
        path = write_antichain3(tmp_path)
        result = runner.invoke(main, ["index", str(path), "--json", "--seed", "5"])
        payload = json.loads(result.output)
        assert payload == {"index": 2, "dim": 2, "seed": 5, "trials": 3}

    def test_missing_file_is_usage_error(self, runner):
        result = runner.invoke(main, ["index", "nope.json"])
        assert result.exit_code == 2


class TestSpectrumCommand:
    def test_catalog_pair_files(self, runner, tmp_path):
        runner.invoke(main, ["catalog", "P2", "--emit", "--out", str(tmp_path)])
        result = runner.invoke(main, [
            "spectrum",
            str(tmp_path / "P2.poset.json"),
            str(tmp_path / "P2.functional.json"),
            "--json",
        ])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["binary"] is True
        assert payload["zero_mult"] == payload["one_mult"] == 4
        assert payload["char_poly"][0] == "1"


class TestBuildCommand:
    def test_figure_sequence(self, runner, tmp_path):
        seq = tmp_path / "figure4.seq"
        seq.write_text(FIGURE4_TEXT)
        result = runner.invoke(main, ["build", str(seq), "--emit", "all", "--json"])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["elements"] == 13
        assert payload["index_by_formula"] == 0
        assert payload["functional_defined"] is True

    def test_emit_files(self, runner, tmp_path):
        seq = tmp_path / "figure4.seq"
        seq.write_text(FIGURE4_TEXT)
        out = tmp_path / "out"
        result = runner.invoke(main, [
            "build", str(seq), "--emit", "all", "--out", str(out)])
        assert result.exit_code == 0
        assert (out / "poset.json").exists()
        assert (out / "functional.json").exists()

    def test_index_raising_sequence_fails_functional_emit(self, runner, tmp_path):
        seq = tmp_path / "e1.seq"
        seq.write_text(
            "seed P2\n"
            "attach P2 rule A1 b->q3\n"
            "attach P2 rule E1 a->q5 b->q4\n")
        result = runner.invoke(main, ["build", str(seq), "--emit", "functional"])
        assert result.exit_code == 1
        only_poset = runner.invoke(main, ["build", str(seq), "--emit", "poset", "--json"])
        assert only_poset.exit_code == 0
        assert json.loads(only_poset.output)["functional_defined"] is False

    def test_parse_error_is_domain_error(self, runner, tmp_path):
        seq = tmp_path / "bad.seq"
        seq.write_text("seed P2\nattach P2 rule ZZ b->q3\n")
        result = runner.invoke(main, ["build", str(seq)])
        assert result.exit_code == 1


class TestHomologyCommand:
    def test_example_poset(self, runner, tmp_path, example1):
        path = tmp_path / "p.json"
        example1.save(path)
        result = runner.invoke(main, ["homology", str(path), "--json"])
        payload = json.loads(result.output)
        assert payload == {"betti": [1, 0, 0], "euler": 1, "faces": [4, 5, 2]}


class TestScanCommand:
    def test_small_scan_json(self, runner, tmp_path):
        out = tmp_path / "records.jsonl"
        result = runner.invoke(main, [
            "scan", "--n", "4", "--height", "2", "--seed", "3",
            "--out", str(out), "--json"])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["counterexamples"] == []
        assert payload["posets"] > 0
        lines = out.read_text().strip().splitlines()
        header = json.loads(lines[0])["header"]
        assert header["n_max"] == 4 and header["seed"] == 3
        assert len(lines) == payload["posets"] + 1


class TestCatalogCommand:
    def test_human_output(self, runner):
        result = runner.invoke(main, ["catalog", "P5", "2"])
        assert result.exit_code == 0
        assert "P5,2" in result.output

    def test_bad_parameter(self, runner):
        result = runner.invoke(main, ["catalog", "P4", "2"])
        assert result.exit_code == 1
