"""Command-line client for the workbench service.

Every subcommand builds a JSON request and sends it through the HTTP API.
By default the service app runs in-process (no server needed); set
``--server`` or ``RATEBENCH_SERVER`` to talk to a remote ``ratebench
serve`` instance instead. Exit codes: 0 success, 1 validation failure,
2 runtime failure.
"""

from __future__ import annotations

import asyncio
import json

import click
import httpx
import yaml

from . import __version__

REQUEST_TIMEOUT = 3600.0  # experiment runs can train the full grid


class ServiceClient:
    def __init__(self, server: str | None):
        self.server = server

    def call(self, method: str, path: str, payload: dict | None = None) -> dict:
        try:
            if self.server:
                with httpx.Client(base_url=self.server, timeout=REQUEST_TIMEOUT) as client:
                    response = client.request(method, path, json=payload)
            else:
                response = asyncio.run(self._call_local(method, path, payload))
        except httpx.HTTPError as exc:
            click.echo(f"error: cannot reach service: {exc}", err=True)
            raise SystemExit(2) from None
        if response.status_code >= 400:
            try:
                body = response.json()
                message = body.get("message") or body.get("detail") or response.text
                kind = body.get("kind", "runtime")
            except ValueError:
                message, kind = response.text, "runtime"
            click.echo(f"error ({kind}): {message}", err=True)
            raise SystemExit(1 if response.status_code == 400 else 2)
        return response.json()

    async def _call_local(self, method: str, path: str, payload: dict | None) -> httpx.Response:
        from .service.app import create_app

        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(transport=transport, base_url="http://service") as client:
            return await client.request(method, path, json=payload)


def _echo(payload: dict) -> None:
    click.echo(json.dumps(payload, indent=2, sort_keys=True))


def _parse_kv(pairs: tuple[str, ...]) -> dict:
    out = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep:
            raise click.UsageError(f"expected key=value, got {pair!r}")
        out[key] = yaml.safe_load(value)
    return out


@click.group()
@click.version_option(__version__)
@click.option("--server", envvar="RATEBENCH_SERVER", default=None, metavar="URL",
              help="Remote service URL; default runs the service in-process.")
@click.pass_context
def main(ctx, server):
    """Benchmark review-rating pipelines and their interpretability scores."""
    ctx.obj = ServiceClient(server)


@main.command()
@click.option("--input", "input_path", required=True, help="Raw JSONL review file.")
@click.option("--per-class", type=int, default=None, help="Balanced sample size per star.")
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--out", "out_dir", required=True, help="Output directory.")
@click.option("--name", default=None, help="Dataset name (default: file stem).")
@click.option("--stopwords", "stopwords_path", default=None, help="Custom stopword file.")
@click.pass_obj
def ingest(client, input_path, per_class, seed, out_dir, name, stopwords_path):
    """Load, clean, and balance a raw review file into a canonical dataset."""
    _echo(client.call("POST", "/corpus/ingest", {
        "input_path": input_path, "per_class": per_class, "seed": seed,
        "out_dir": out_dir, "name": name, "stopwords_path": stopwords_path,
    }))


@main.command()
@click.option("--dataset", "dataset_path", required=True)
@click.option("--test-frac", type=float, default=0.3, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--out", "out_path", required=True)
@click.pass_obj
def split(client, dataset_path, test_frac, seed, out_path):
    """Write a deterministic stratified train/test split."""
    _echo(client.call("POST", "/corpus/split", {
        "dataset_path": dataset_path, "test_fraction": test_frac,
        "seed": seed, "out_path": out_path,
    }))


@main.command()
@click.option("--dataset", "dataset_path", required=True)
@click.option("--method", type=click.Choice(["count", "tfidf", "word2vec"]), required=True)
@click.option("--out", "out_path", required=True, help="Document-matrix CSV output.")
@click.option("--split", "split_path", default=None, help="Fit on the split's train rows only.")
@click.option("--min-df", type=int, default=2, show_default=True)
@click.option("--max-features", type=int, default=None)
@click.option("--vectors-out", default=None, help="Also write word2vec term vectors here.")
@click.option("--w2v", "w2v_options", multiple=True, metavar="KEY=VALUE",
              help="Word2vec options (dim, window, epochs, ...).")
@click.pass_obj
def embed(client, dataset_path, method, out_path, split_path, min_df, max_features,
          vectors_out, w2v_options):
    """Turn cleaned review text into a document-by-feature matrix."""
    _echo(client.call("POST", "/embeddings/build", {
        "dataset_path": dataset_path, "method": method, "out_path": out_path,
        "split_path": split_path, "min_df": min_df, "max_features": max_features,
        "vectors_out": vectors_out, "word2vec": _parse_kv(w2v_options),
    }))


@main.group()
def sentiment():
    """Sentiment scoring commands."""


@sentiment.command("score")
@click.option("--dataset", "dataset_path", required=True)
@click.option("--engine", type=click.Choice(["vader", "external"]), default="vader",
              show_default=True)
@click.option("--scores", "scores_path", default=None, help="External score CSV (engine=external).")
@click.option("--lexicon", "lexicon_path", default=None, help="Custom lexicon file.")
@click.option("--out", "out_path", required=True)
@click.pass_obj
def sentiment_score(client, dataset_path, engine, scores_path, lexicon_path, out_path):
    """Score a dataset with the rule engine or ingest external scores."""
    _echo(client.call("POST", "/sentiment/score", {
        "dataset_path": dataset_path, "engine": engine, "scores_path": scores_path,
        "lexicon_path": lexicon_path, "out_path": out_path,
    }))


@main.command()
@click.option("--matrix", "matrix_path", required=True, help="Document-matrix CSV.")
@click.option("--dataset", "dataset_path", required=True, help="Canonical dataset (labels).")
@click.option("--split", "split_path", required=True)
@click.option("--family", type=click.Choice(["LR", "NB", "SVM", "NN"]), required=True)
@click.option("--scores", "scores_path", default=None,
              help="External score CSV appended as an extra feature column.")
@click.option("--out", "out_path", required=True, help="Model file output.")
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--hyper", "hyper", multiple=True, metavar="KEY=VALUE",
              help="Hyperparameter overrides.")
@click.pass_obj
def train(client, matrix_path, dataset_path, split_path, family, scores_path, out_path,
          seed, hyper):
    """Train one classifier on the split's train rows."""
    _echo(client.call("POST", "/models/train", {
        "matrix_path": matrix_path, "dataset_path": dataset_path, "split_path": split_path,
        "family": family, "scores_path": scores_path, "out_path": out_path,
        "seed": seed, "hyperparameters": _parse_kv(hyper),
    }))


@main.command("eval")
@click.option("--matrix", "matrix_path", required=True)
@click.option("--dataset", "dataset_path", required=True)
@click.option("--split", "split_path", required=True)
@click.option("--model", "model_path", required=True)
@click.option("--scores", "scores_path", default=None)
@click.option("--confusion-out", default=None, help="Write the confusion matrix CSV here.")
@click.pass_obj
def eval_cmd(client, matrix_path, dataset_path, split_path, model_path, scores_path,
             confusion_out):
    """Evaluate a trained model on the split's test rows."""
    _echo(client.call("POST", "/models/evaluate", {
        "matrix_path": matrix_path, "dataset_path": dataset_path, "split_path": split_path,
        "model_path": model_path, "scores_path": scores_path, "confusion_out": confusion_out,
    }))


@main.group()
def ci():
    """Interpretability scoring commands."""


@ci.command("score")
@click.option("--pipeline", default=None, help='Pipeline name, e.g. "TFIDF+LR-BS".')
@click.option("--model", default=None, help='Single model name, e.g. "VADER".')
@click.option("--table", "table_path", default=None, help="Interpretability table JSON.")
@click.option("--recompute", is_flag=True, help="Recompute scores from ranks instead of using canonical values.")
@click.pass_obj
def ci_score(client, pipeline, model, table_path, recompute):
    """Score one pipeline (or one model) for interpretability."""
    _echo(client.call("POST", "/ci/score", {
        "pipeline": pipeline, "model": model, "table_path": table_path,
        "recompute": recompute,
    }))


@ci.command("enumerate")
@click.option("--table", "table_path", default=None)
@click.option("--recompute", is_flag=True)
@click.option("--out", "out_path", default=None, help="Also write the ranking CSV here.")
@click.pass_obj
def ci_enumerate(client, table_path, recompute, out_path):
    """Enumerate all 26 pipelines sorted by CI score."""
    _echo(client.call("POST", "/ci/enumerate", {
        "table_path": table_path, "recompute": recompute, "out_path": out_path,
    }))


@main.command()
@click.option("--config", "config_path", required=True, help="YAML run configuration.")
@click.option("--jobs", type=int, default=None, help="Concurrent grid cells.")
@click.option("--out", "out_dir", default=None, help="Override the output directory.")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.pass_obj
def run(client, config_path, jobs, out_dir, seed):
    """Run the full experiment grid described by a config file."""
    _echo(client.call("POST", "/experiments/run", {
        "config_path": config_path, "jobs": jobs, "out_dir": out_dir, "seed": seed,
    }))


@main.command()
@click.option("--config", "config_path", required=True)
@click.pass_obj
def validate(client, config_path):
    """Check a run configuration; exit 1 if it has errors."""
    body = client.call("POST", "/experiments/validate", {"config_path": config_path})
    for message in body["errors"]:
        click.echo(f"error: {message}", err=True)
    for message in body["warnings"]:
        click.echo(f"warning: {message}", err=True)
    if body["ok"]:
        click.echo("config ok")
    else:
        raise SystemExit(1)


@main.command()
@click.option("--manifest", "manifest_path", required=True, help="manifest.json from a run.")
@click.option("--out", "out_dir", default=None, help="Report directory (default: next to manifest).")
@click.pass_obj
def report(client, manifest_path, out_dir):
    """Re-render the CSV/SVG report bundle from a run manifest."""
    _echo(client.call("POST", "/reports/render", {
        "manifest_path": manifest_path, "out_dir": out_dir,
    }))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8321, show_default=True)
def serve(host, port):
    """Start the workbench HTTP service."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
