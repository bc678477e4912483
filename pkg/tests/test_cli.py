"""
Tests for the encprim command-line interface
"""

from pathlib import Path

import pytest
import yaml
from typer.testing import CliRunner

from encprim.cli import app
from encprim.orchestrator import load_report

runner = CliRunner()

FAST_CONFIG = {
    "rescale_l": 8,
    "hdphmm": {"truncation_L": 5, "iterations": 15},
    "cluster_k": 3,
    "sweep": {"k_min": 2, "k_max": 4, "seeds_per_k": 2},
    "global_seed": 4,
}


@pytest.fixture
def config_file(tmp_path) -> Path:
    path = tmp_path / "fast.yaml"
    path.write_text(yaml.safe_dump(FAST_CONFIG))
    return path


@pytest.fixture
def corpus(tmp_path) -> Path:
    directory = tmp_path / "corpus"
    args = ["synth", "--output", str(directory), "--count", "6", "--seed", "2"]
    result = runner.invoke(app, args)
    assert result.exit_code == 0, result.output
    return directory


class TestSynth:
    """Tests for the synth command."""

    def test_writes_encounters_and_truth(self, corpus):
        """Test one CSV and one truth file per encounter."""
        assert len(list(corpus.glob("*.truth.csv"))) == 6
        assert len(list(corpus.glob("*.csv"))) == 12

    def test_family_filter(self, tmp_path):
        """Test restricting families."""
        result = runner.invoke(
            app,
            ["synth", "-o", str(tmp_path), "-n", "2", "--family", "VerticalCross"],
        )
        assert result.exit_code == 0, result.output
        assert sorted(p.name for p in tmp_path.glob("*.truth.csv")) == [
            "enc_0000_VerticalCross.truth.csv",
            "enc_0001_VerticalCross.truth.csv",
        ]

    def test_planted(self, tmp_path):
        """Test planted-HMM encounters."""
        result = runner.invoke(app, ["synth", "-o", str(tmp_path), "-n", "1", "--planted"])
        assert result.exit_code == 0, result.output
        assert (tmp_path / "planted_0000.csv").is_file()


class TestRun:
    """Tests for the run and report commands."""

    def test_full_run(self, corpus, config_file, tmp_path):
        """Test a full run and the report command on its output."""
        output = tmp_path / "out"
        result = runner.invoke(
            app,
            ["run", "--config", str(config_file), "--input", str(corpus), "--output", str(output)],
        )
        assert result.exit_code == 0, result.output
        report = load_report(output / "report.json")
        assert report.qualified_count == 6
        assert report.cluster_k == 3

        (output / "report.md").unlink()
        result = runner.invoke(app, ["report", "--output", str(output)])
        assert result.exit_code == 0, result.output
        assert (output / "report.md").read_text().startswith("# Driving primitive report")

    def test_stage_by_stage(self, corpus, config_file, tmp_path):
        """Test ingest, segment, featurize, cluster and sweep as separate commands."""
        out = tmp_path / "out"
        cfg = ["--config", str(config_file)]
        steps = [
            ["ingest", "-i", str(corpus), "-o", str(out), *cfg],
            ["segment", "-e", str(out / "encounters"), "-o", str(out / "p.jsonl"), *cfg],
            [
                "featurize",
                "-e", str(out / "encounters"),
                "-p", str(out / "p.jsonl"),
                "-o", str(out / "f.csv"),
                *cfg,
            ],
            ["cluster", "-f", str(out / "f.csv"), "-o", str(out), *cfg],
            ["sweep", "-f", str(out / "f.csv"), "-o", str(out / "s.csv"), "--k-max", "3", *cfg],
        ]
        for args in steps:
            result = runner.invoke(app, args)
            assert result.exit_code == 0, f"{args[0]}: {result.output}"
        assert (out / "assignments.csv").is_file()
        assert (out / "s.csv").read_text().count("\n") == 3

    def test_report_without_run(self, tmp_path):
        """Test report on an empty directory."""
        result = runner.invoke(app, ["report", "--output", str(tmp_path)])
        assert result.exit_code == 1


class TestErrors:
    """Tests for exit codes."""

    def test_config_error_exit_code(self, corpus, tmp_path):
        """Test that an invalid config exits with 2."""
        bad = tmp_path / "bad.yaml"
        bad.write_text("cluster_k: 0\n")
        result = runner.invoke(app, ["run", "-c", str(bad), "-i", str(corpus), "-o", str(tmp_path)])
        assert result.exit_code == 2
        assert "cluster_k" in result.output

    def test_stage_failure_exit_code(self, config_file, tmp_path):
        """Test that a failing stage exits with 1 and names the stage."""
        empty = tmp_path / "empty"
        empty.mkdir()
        result = runner.invoke(
            app, ["run", "-c", str(config_file), "-i", str(empty), "-o", str(tmp_path / "out")]
        )
        assert result.exit_code == 1
        assert "[ingest]" in result.output
