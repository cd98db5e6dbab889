"""Command-line interface for the full verification workflow.

Machine-readable JSON goes to stdout, diagnostics to stderr. Every command is
deterministic under a fixed --seed. Commands that operate per instance accept
--jobs; output order is always by instance_id regardless of parallelism.
The stateless commands can delegate to a running service via --server.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from . import __version__
from .datamodel import (
    Config,
    ParseError,
    SchemaError,
    load_config,
    load_dataset,
    load_predictions,
    parse_srl_document,
    prediction_to_json,
    write_predictions,
)
from .graphs import build_graph, graph_to_json
from .metrics import evaluate as run_evaluate
from .model import load_checkpoint, predict as model_predict, save_checkpoint
from .ordering import sort_evidence
from .retrieval import load_corpus, retrieve_documents, select_evidence
from .synthdata import generate, load_srl_map, write_synth
from .training import accuracy, train as run_train

CONFIG_ENV = "EVIGRAPH_CONFIG"


def _load_cfg(config_path: str | None, seed: int | None, desk: bool = True) -> Config:
    path = config_path or os.environ.get(CONFIG_ENV)
    if path:
        cfg = load_config(path)
    else:
        cfg = Config.desk() if desk else Config()
    if seed is not None:
        cfg = Config.from_json({**cfg.to_json(), "seed": seed})
    return cfg.validate()


def _emit(obj) -> None:
    click.echo(json.dumps(obj, sort_keys=True))


def _post(server: str, route: str, payload: dict) -> dict:
    import httpx

    response = httpx.post(server.rstrip("/") + route, json=payload, timeout=120.0)
    if response.status_code != 200:
        raise click.ClickException(f"server error {response.status_code}: {response.text}")
    return response.json()


def _fail(message: str) -> "click.ClickException":
    return click.ClickException(message)


@click.group()
@click.version_option(version=__version__)
def main() -> None:
    """Graph-based claim verification toolkit."""


@main.command("build-graph")
@click.option("--input", "input_path", required=True, type=click.Path())
@click.option("--origin", type=click.Choice(["claim", "evidence"]), default="evidence",
              show_default=True)
@click.option("--server", default=None, help="Delegate to a running service URL.")
def build_graph_cmd(input_path: str, origin: str, server: str | None) -> None:
    """Build the semantic graph from an SRL document."""
    try:
        text = Path(input_path).read_text(encoding="utf-8")
    except OSError as e:
        raise _fail(f"file not found: {input_path}") from e
    if server:
        _emit(_post(server, "/graph", {"document": json.loads(text), "origin": origin}))
        return
    try:
        es = parse_srl_document(text)
    except (ParseError, SchemaError) as e:
        raise _fail(str(e)) from e
    _emit(graph_to_json(build_graph(es, origin)))


@main.command("sort")
@click.option("--input", "input_path", required=True, type=click.Path())
@click.option("--server", default=None)
def sort_cmd(input_path: str, server: str | None) -> None:
    """Print the topology-sorted node order and sentence permutation."""
    try:
        text = Path(input_path).read_text(encoding="utf-8")
    except OSError as e:
        raise _fail(f"file not found: {input_path}") from e
    if server:
        _emit(_post(server, "/sort", {"document": json.loads(text)}))
        return
    try:
        es = parse_srl_document(text)
    except (ParseError, SchemaError) as e:
        raise _fail(str(e)) from e
    order = sort_evidence(es, build_graph(es, "evidence"))
    _emit({"node_order": list(order.node_order),
           "sentence_order": list(order.sentence_order)})


@main.command("retrieve")
@click.option("--claim", required=True)
@click.option("--corpus", "corpus_path", required=True, type=click.Path())
@click.option("--m", default=10, show_default=True)
def retrieve_cmd(claim: str, corpus_path: str, m: int) -> None:
    """Keyword-match documents for a claim."""
    try:
        corpus = load_corpus(corpus_path)
    except FileNotFoundError as e:
        raise _fail(str(e)) from e
    _emit({"documents": retrieve_documents(claim, corpus, m)})


@main.command("select")
@click.option("--claim", required=True)
@click.option("--corpus", "corpus_path", required=True, type=click.Path())
@click.option("--m", default=10, show_default=True)
@click.option("--k", default=5, show_default=True)
def select_cmd(claim: str, corpus_path: str, m: int, k: int) -> None:
    """Rank evidence sentences from the retrieved documents."""
    try:
        corpus = load_corpus(corpus_path)
    except FileNotFoundError as e:
        raise _fail(str(e)) from e
    doc_ids = set(retrieve_documents(claim, corpus, m))
    documents = [d for d in corpus if d.doc_id in doc_ids]
    ranked = select_evidence(claim, documents, k)
    _emit({"evidence": [[doc, idx, score] for doc, idx, score in ranked.items]})


@main.command("synth")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--n", default=300, show_default=True, help="Training instances.")
@click.option("--n-dev", default=60, show_default=True, help="Dev instances.")
@click.option("--seed", default=7, show_default=True)
def synth_cmd(out_dir: str, n: int, n_dev: int, seed: int) -> None:
    """Generate the synthetic dataset with template-emitted SRL parses."""
    data = generate(n_train=n, n_dev=n_dev, seed=seed)
    paths = write_synth(data, out_dir)
    _emit({"written": paths, "train": len(data.train), "dev": len(data.dev)})


@main.command("train")
@click.option("--data", "data_path", required=True, type=click.Path())
@click.option("--srl", "srl_path", required=True, type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--mode", type=click.Choice(["full", "no_reorder", "no_graph", "no_both"]),
              default="full", show_default=True)
@click.option("--config", "config_path", default=None, type=click.Path())
@click.option("--seed", default=None, type=int)
@click.option("--preset", type=click.Choice(["desk", "reference"]), default="desk",
              show_default=True)
def train_cmd(data_path: str, srl_path: str, out_path: str, mode: str,
              config_path: str | None, seed: int | None, preset: str) -> None:
    """Train a checkpoint with the two-stage schedule."""
    try:
        instances = load_dataset(data_path)
        srl = load_srl_map(srl_path)
    except (FileNotFoundError, ParseError, SchemaError) as e:
        raise _fail(str(e)) from e
    cfg = _load_cfg(config_path, seed, desk=(preset == "desk"))
    result = run_train(instances, srl, cfg, mode=mode)
    save_checkpoint(result.checkpoint, out_path)
    last = result.entries[-1] if result.entries else {}
    _emit({
        "checkpoint": out_path,
        "mode": mode,
        "epochs": len(result.entries),
        "skipped": result.skipped,
        "final_loss": last.get("loss"),
        "final_train_accuracy": last.get("train_accuracy"),
    })


@main.command("predict")
@click.option("--checkpoint", "checkpoint_path", required=True, type=click.Path())
@click.option("--srl", "srl_path", required=True, type=click.Path())
@click.option("--out", "out_path", default=None, type=click.Path())
@click.option("--jobs", default=1, show_default=True)
def predict_cmd(checkpoint_path: str, srl_path: str, out_path: str | None,
                jobs: int) -> None:
    """Predict labels for every instance in an SRL file."""
    try:
        checkpoint = load_checkpoint(checkpoint_path)
        srl = load_srl_map(srl_path)
    except (FileNotFoundError, ParseError, SchemaError) as e:
        raise _fail(str(e)) from e

    def run_one(instance_id: str):
        return model_predict(instance_id, srl[instance_id], checkpoint)

    ids = sorted(srl)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            preds = list(pool.map(run_one, ids))
    else:
        preds = [run_one(i) for i in ids]
    preds.sort(key=lambda p: p.instance_id)
    if out_path:
        write_predictions(preds, out_path)
        _emit({"written": out_path, "count": len(preds)})
    else:
        for p in preds:
            _emit(prediction_to_json(p))


@main.command("evaluate")
@click.option("--preds", "preds_path", required=True, type=click.Path())
@click.option("--gold", "gold_path", required=True, type=click.Path())
@click.option("--k", default=5, show_default=True)
def evaluate_cmd(preds_path: str, gold_path: str, k: int) -> None:
    """Score predictions with the official metrics."""
    try:
        preds = load_predictions(preds_path)
        gold = load_dataset(gold_path)
    except (FileNotFoundError, ParseError, SchemaError) as e:
        raise _fail(str(e)) from e
    try:
        report = run_evaluate(preds, gold, k_ev=k)
    except ValueError as e:
        raise _fail(str(e)) from e
    _emit(report.to_json())
    click.echo("metric               value", err=True)
    click.echo(f"label_accuracy       {report.label_accuracy:.4f}", err=True)
    click.echo(f"fever_score          {report.fever_score:.4f}", err=True)
    click.echo(f"evidence_precision   {report.evidence_precision:.4f}", err=True)
    click.echo(f"evidence_recall      {report.evidence_recall:.4f}", err=True)
    click.echo(f"evidence_f1          {report.evidence_f1:.4f}", err=True)


@main.command("ablate")
@click.option("--data", "data_path", required=True, type=click.Path())
@click.option("--dev", "dev_path", required=True, type=click.Path())
@click.option("--srl", "srl_path", required=True, type=click.Path())
@click.option("--config", "config_path", default=None, type=click.Path())
@click.option("--seed", default=None, type=int)
@click.option("--out-dir", default=None, type=click.Path(),
              help="Optionally save the four checkpoints here.")
def ablate_cmd(data_path: str, dev_path: str, srl_path: str,
               config_path: str | None, seed: int | None,
               out_dir: str | None) -> None:
    """Train all four structural variants and compare dev accuracy."""
    try:
        instances = load_dataset(data_path)
        dev = load_dataset(dev_path)
        srl = load_srl_map(srl_path)
    except (FileNotFoundError, ParseError, SchemaError) as e:
        raise _fail(str(e)) from e
    cfg = _load_cfg(config_path, seed)
    rows = {}
    for mode in ("full", "no_reorder", "no_graph", "no_both"):
        result = run_train(instances, srl, cfg, mode=mode)
        dev_acc = accuracy(result.checkpoint, dev, srl)
        train_acc = result.entries[-1]["train_accuracy"] if result.entries else 0.0
        rows[mode] = {"dev_accuracy": dev_acc, "train_accuracy": train_acc}
        if out_dir:
            out = Path(out_dir)
            out.mkdir(parents=True, exist_ok=True)
            save_checkpoint(result.checkpoint, out / f"{mode}.ck.json")
        click.echo(f"{mode:>12}  dev={dev_acc:.4f}  train={train_acc:.4f}", err=True)
    _emit({"variants": rows, "seed": cfg.seed})


@main.command("serve")
@click.option("--checkpoint", "checkpoint_path", default=None, type=click.Path())
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8471, show_default=True)
def serve_cmd(checkpoint_path: str | None, host: str, port: int) -> None:
    """Run the HTTP service wrapping this package."""
    import uvicorn

    from .service import create_app

    app = create_app(checkpoint_path=checkpoint_path)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
