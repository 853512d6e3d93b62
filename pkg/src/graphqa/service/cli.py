"""Command-line entry points: ingest, ask, eval, serve."""

from __future__ import annotations

import json
from pathlib import Path

import click

from ..evalharness import (
    evaluate_retrieval,
    load_dataset,
    render_retrieval_table,
    render_robustness_table,
    report_to_wire,
    run_robustness,
)
from ..graph import IngestError
from ..llm import render_result_rows
from ..pipeline import PIPELINE_KINDS, PipelineOptions
from .config import ConfigError, load_config
from .runtime import ServiceRuntime, build_runtime


def _runtime(config_path: str) -> ServiceRuntime:
    try:
        return build_runtime(load_config(config_path))
    except (ConfigError, IngestError, OSError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc


config_option = click.option(
    "--config",
    "config_path",
    required=True,
    type=click.Path(),
    help="Path to the service configuration file.",
)


@click.group()
def main() -> None:
    """Graph question answering over a property graph."""


@main.command()
@config_option
def ingest(config_path: str) -> None:
    """Load the graph files and print what was ingested."""
    runtime = _runtime(config_path)
    schema = runtime.schema
    click.echo(f"nodes: {runtime.graph.node_count}")
    click.echo(f"edges: {runtime.graph.edge_count}")
    click.echo(f"node labels: {len(schema.node_types)}")
    click.echo(f"relationship types: {len(schema.rel_types)}")
    click.echo(f"vocabulary entries: {len(runtime.vocab)}")


@main.command()
@config_option
@click.option("--question", required=True, help="The question to answer.")
@click.option(
    "--pipeline",
    "pipeline_kind",
    default="hybrid",
    type=click.Choice(list(PIPELINE_KINDS)),
    show_default=True,
)
@click.option("--ee/--no-ee", "entity_enhancement", default=True, show_default=True)
@click.option("--evidence", is_flag=True, help="Also print the query and result rows.")
def ask(
    config_path: str,
    question: str,
    pipeline_kind: str,
    entity_enhancement: bool,
    evidence: bool,
) -> None:
    """Answer one question and print the result."""
    runtime = _runtime(config_path)
    options = PipelineOptions(
        entity_enhancement=entity_enhancement,
        pipeline_kind=pipeline_kind,
    )
    response = runtime.pipeline.answer(question, options)
    if response.status == "backend_error":
        raise click.ClickException(f"backend error: {response.answer}")
    click.echo(response.answer)
    if evidence:
        bundle = response.evidence
        click.echo("")
        click.echo(f"status: {response.status}")
        if bundle.generated_cypher:
            click.echo(f"generated: {bundle.generated_cypher}")
        if bundle.preprocessed_cypher:
            click.echo(f"executed:  {bundle.preprocessed_cypher}")
        for entry in bundle.change_log.entries:
            click.echo(f"  {entry.step}: {entry.before!r} -> {entry.after!r}")
        for note in bundle.change_log.notes:
            click.echo(f"  note: {note}")
        click.echo("")
        click.echo(render_result_rows(bundle.graph_rows.columns, bundle.graph_rows.rows))
    if response.status != "answered":
        raise SystemExit(1)


@main.command("eval")
@config_option
@click.option(
    "--out",
    "out_path",
    required=True,
    type=click.Path(),
    help="Where to write the JSON report.",
)
@click.option("--ee/--no-ee", "entity_enhancement", default=True, show_default=True)
def eval_command(config_path: str, out_path: str, entity_enhancement: bool) -> None:
    """Run retrieval scoring and the wrong-query robustness check."""
    runtime = _runtime(config_path)
    if runtime.config.dataset_file is None:
        raise click.ClickException("config has no eval.dataset entry")
    samples = load_dataset(runtime.config.dataset_file)
    model_name = runtime.config.model or runtime.config.backend_kind
    options = PipelineOptions(entity_enhancement=entity_enhancement)

    retrieval = evaluate_retrieval(
        samples, runtime.pipeline, options=options, model_name=model_name
    )
    robustness = run_robustness(
        samples, runtime.pipeline, options=options, model_name=model_name
    )
    payload = {
        "retrieval": report_to_wire(retrieval),
        "robustness": report_to_wire(robustness),
    }
    Path(out_path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    click.echo(render_retrieval_table([retrieval]))
    click.echo("")
    click.echo(render_robustness_table(robustness))
    click.echo("")
    click.echo(f"report written to {out_path}")


@main.command()
@config_option
@click.option("--host", default=None, help="Override the configured listen address.")
@click.option("--port", default=None, type=int, help="Override the configured port.")
def serve(config_path: str, host: str | None, port: int | None) -> None:
    """Start the HTTP service."""
    import uvicorn

    from .app import create_app

    runtime = _runtime(config_path)
    app = create_app(runtime)
    uvicorn.run(
        app,
        host=host or runtime.config.host,
        port=port if port is not None else runtime.config.port,
    )


if __name__ == "__main__":
    main()
