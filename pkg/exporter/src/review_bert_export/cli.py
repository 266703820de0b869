"""Command-line entry point: export review sentiment stars to CSV."""

from __future__ import annotations

import sys

import click

from .scoring import DEFAULT_MODEL, ExporterError, ExportJob, export_scores


@click.command()
@click.option("--input", "input_path", required=True, help="JSONL review file.")
@click.option("--out", "output_path", required=True, help="Score CSV output path.")
@click.option("--batch", "batch_size", type=int, default=32, show_default=True)
@click.option("--model", default=DEFAULT_MODEL, show_default=True,
              help="Model id; 'offline[:seed]' uses the deterministic offline backend.")
@click.option("--device", default="cpu", show_default=True)
@click.option("--clean-text", is_flag=True,
              help="Score lightly cleaned text instead of the raw reviews.")
def export(input_path, output_path, batch_size, model, device, clean_text):
    """Batch-score reviews on a 1-5 star scale and write review_id,stars,confidence."""
    try:
        job = ExportJob(
            input_path=input_path,
            output_path=output_path,
            model=model,
            batch_size=batch_size,
            device=device,
            clean_text=clean_text,
        )
        summary = export_scores(job)
    except ExporterError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(
        f"wrote {summary['rows']} rows -> {summary['output_path']} "
        f"(model {summary['model']}, {summary['truncated']} truncated)"
    )


if __name__ == "__main__":
    export()
