"""Command-line entry points: dataset inspection, serving, export, experiments."""

from __future__ import annotations

import json
from pathlib import Path

import click
import numpy as np

from .dataset import drop_sparse, load_dataset, normalize
from .experiments import (
    age_team_oracle,
    run_convergence,
    run_proof_of_concept,
    sample_balanced_pairs,
    synthetic_dataset,
)
from .store import replay


@click.group()
def main():
    """Interactive similarity learning over mixed-type records."""


@main.command()
@click.option("--schema", required=True, type=click.Path(exists=True))
@click.option("--records", required=True, type=click.Path(exists=True))
@click.option("--min-coverage", type=float, default=None)
def load(schema, records, min_coverage):
    """Load a dataset and print a summary (instance count, per-attribute coverage)."""
    dataset = load_dataset(schema, records)
    if min_coverage is not None:
        dataset = drop_sparse(dataset, min_coverage)
    dataset = normalize(dataset)
    click.echo(f"instances: {len(dataset.instances)}")
    click.echo(f"attributes: {len(dataset.attributes)} ({len(dataset.feature_attributes)} features)")
    for attr in dataset.attributes:
        if not attr.is_feature:
            click.echo(f"  {attr.name:<24} {attr.kind.value:<12} role={attr.role.value}")
            continue
        coverage = dataset.coverage(attr.name)
        flags = " zero-variance" if attr.zero_variance else ""
        click.echo(f"  {attr.name:<24} {attr.kind.value:<12} coverage={coverage:.2f}{flags}")


@main.command()
@click.option("--schema", required=True, type=click.Path(exists=True))
@click.option("--records", required=True, type=click.Path(exists=True))
@click.option("--labels", "labels_path", type=click.Path(), default="labels.jsonl")
@click.option("--port", type=int, default=8000)
@click.option("--host", default="127.0.0.1")
@click.option("--k-suggest", type=int, default=5)
@click.option("--k-retrieve", type=int, default=6)
@click.option("--min-coverage", type=float, default=None)
@click.option("--static", "static_dir", type=click.Path(exists=True), default=None,
              help="Serve a built UI from this directory.")
def serve(schema, records, labels_path, port, host, k_suggest, k_retrieve, min_coverage, static_dir):
    """Run the HTTP service for the labeling UI and scripts."""
    import uvicorn

    from .service import ServiceConfig, build_session, create_app

    config = ServiceConfig(k_suggest=k_suggest, k_retrieve=k_retrieve, min_coverage=min_coverage)
    session = build_session(schema, records, labels_path, config)
    click.echo(f"dataset: {len(session.dataset.instances)} instances, "
               f"{len(session.dataset.feature_attributes)} feature attributes")
    uvicorn.run(create_app(session, static_dir=static_dir), host=host, port=port)


@main.command()
@click.option("--labels", "labels_path", required=True, type=click.Path(exists=True))
def export(labels_path):
    """Dump the active label set (latest per pair) as JSON lines."""
    active, _ = replay(labels_path)
    for label in active:
        click.echo(json.dumps({
            "pair_a": label.a, "pair_b": label.b, "score": label.score,
            "timestamp": label.created_at, "source": label.source,
        }))


@main.group()
def experiment():
    """Headless reproductions of the evaluation experiments."""


def _experiment_dataset(schema, records, seed):
    if schema and records:
        return load_dataset(schema, records)
    return synthetic_dataset(
        60, seed=seed, correlated_attributes=True, noise_attributes=(1, 1, 1)
    )


@experiment.command()
@click.option("--schema", type=click.Path(exists=True), default=None)
@click.option("--records", type=click.Path(exists=True), default=None)
@click.option("--labels", "n_labels", type=int, default=10)
@click.option("--seed", type=int, default=0)
@click.option("--age-attr", default="age")
@click.option("--team-attr", default="team")
def poc(schema, records, n_labels, seed, age_attr, team_attr):
    """Fixed mental model: can the learner recover the age+team rule?"""
    dataset = _experiment_dataset(schema, records, seed)
    oracle = age_team_oracle(dataset, age_attr=age_attr, team_attr=team_attr)
    report = run_proof_of_concept(
        dataset, oracle, n_labels=n_labels, seed=seed,
        oracle_attributes=(age_attr, team_attr),
    )
    click.echo(f"labels: {len(report.labels)}  top2_matches: {report.top2_matches}")
    for name, weight in report.ranking:
        bar = "#" * int(round(40 * weight))
        click.echo(f"  {name:<24} {weight:.4f} {bar}")


@experiment.command()
@click.option("--schema", type=click.Path(exists=True), default=None)
@click.option("--records", type=click.Path(exists=True), default=None)
@click.option("--pool-size", type=int, default=50)
@click.option("--runs", type=int, default=100)
@click.option("--seed", type=int, default=7)
@click.option("--out", "out_path", type=click.Path(), default=None)
def convergence(schema, records, pool_size, runs, seed, out_path):
    """Weight-shift curve over permuted label orders (mean + min/max envelope)."""
    dataset = _experiment_dataset(schema, records, seed)
    oracle = age_team_oracle(dataset)
    pool = sample_balanced_pairs(dataset, oracle, pool_size, np.random.default_rng(seed))
    report = run_convergence(dataset, pool, runs=runs, seed=seed)
    click.echo(report.to_table())
    if out_path:
        out = Path(out_path)
        out.with_suffix(".txt").write_text(report.to_table() + "\n", encoding="utf-8")
        series = "iteration,mean_dw,min_dw,max_dw\n" + "\n".join(
            f"{i},{m:.9f},{lo:.9f},{hi:.9f}" for i, m, lo, hi in report.series_rows()
        )
        out.with_suffix(".csv").write_text(series + "\n", encoding="utf-8")
        click.echo(f"wrote {out.with_suffix('.txt')} and {out.with_suffix('.csv')}")


if __name__ == "__main__":
    main()
