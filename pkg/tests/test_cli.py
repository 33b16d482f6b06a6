"""Command-line surface."""

from __future__ import annotations

from click.testing import CliRunner

from simlearn.cli import main
from simlearn.dataset import bundled_sample_paths
from simlearn.model import SimilarityLabel
from simlearn.store import LabelLog


def test_load_summary():
    schema, records = bundled_sample_paths()
    result = CliRunner().invoke(main, ["load", "--schema", str(schema), "--records", str(records)])
    assert result.exit_code == 0, result.output
    assert "instances: 52" in result.output
    assert "coverage" in result.output


def test_load_with_min_coverage():
    schema, records = bundled_sample_paths()
    result = CliRunner().invoke(
        main, ["load", "--schema", str(schema), "--records", str(records), "--min-coverage", "0.99"]
    )
    assert result.exit_code == 0, result.output
    assert "nat_games" not in result.output


def test_export_active_set(tmp_path):
    path = tmp_path / "labels.jsonl"
    log = LabelLog.open(path)
    log.append(SimilarityLabel("p1", "p2", 0.8, created_at=1.0))
    log.append(SimilarityLabel("p2", "p1", 0.3, created_at=2.0))
    result = CliRunner().invoke(main, ["export", "--labels", str(path)])
    assert result.exit_code == 0, result.output
    lines = [line for line in result.output.splitlines() if line.strip()]
    assert len(lines) == 1
    assert '"score": 0.3' in lines[0]


def test_experiment_poc_synthetic():
    result = CliRunner().invoke(main, ["experiment", "poc", "--labels", "10", "--seed", "3"])
    assert result.exit_code == 0, result.output
    assert "top2_matches: True" in result.output
    assert "age" in result.output and "team" in result.output


def test_experiment_convergence_writes_report(tmp_path):
    out = tmp_path / "report"
    result = CliRunner().invoke(
        main,
        ["experiment", "convergence", "--pool-size", "8", "--runs", "5",
         "--seed", "4", "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    table = out.with_suffix(".txt").read_text()
    series = out.with_suffix(".csv").read_text()
    assert "iteration" in table
    assert series.startswith("iteration,mean_dw,min_dw,max_dw")
    assert len(series.strip().splitlines()) == 8  # header + iterations 2..8
