"""Full verification model: graphs, reordering, encoding, graph reasoning, head.

The four ablation modes mirror the structural study the design is built
around: "full" uses both graph-based sentence reordering and graph reasoning,
"no_reorder" keeps evidence in document order but still reasons on graphs,
"no_graph" reorders but classifies from the sequence summary alone, and
"no_both" is the plain concatenation baseline that never builds a graph.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import attention as att
from . import gcn
from .datamodel import (
    LABEL_ORDER,
    Config,
    EvidenceSet,
    Prediction,
    Role,
    SchemaError,
    Sentence,
)
from .encoder import Vocab, encode_sequence, init_encoder_params
from .graphs import Graph, Node, build_graph
from .ordering import sort_evidence
from .tensor import Parameters, Tensor

CHECKPOINT_VERSION = 1

MODES = ("full", "no_reorder", "no_graph", "no_both")


def mode_uses_graph_reasoning(mode: str) -> bool:
    return mode in ("full", "no_reorder")


def mode_reorders(mode: str) -> bool:
    return mode in ("full", "no_graph")


@dataclass
class ForwardResult:
    logits: Tensor
    probabilities: Tensor
    sentence_order: tuple[str, ...]
    dropped_nodes: tuple[int, ...]
    truncated: bool


@dataclass
class Checkpoint:
    config: Config
    vocab: Vocab
    mode: str
    params: Parameters


def init_params(cfg: Config, vocab_size: int, mode: str) -> Parameters:
    """Create all parameters for `mode` in a fixed order from the config seed."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    params = Parameters(np.random.default_rng(cfg.seed))
    init_encoder_params(params, vocab_size, cfg)
    att.init_cls_head_params(params, cfg)
    if mode_uses_graph_reasoning(mode):
        gcn.init_gcn_params(params, cfg)
        att.init_attention_params(params, cfg)
    return params


def _synthetic_node(sentence: Sentence) -> Node:
    return Node(
        node_id=0,
        sentence_id=sentence.sentence_id,
        tuple_id="synthetic",
        role=Role.ARGUMENT,
        text=sentence.text,
        span=(0, len(sentence.tokens)),
    )


def ensure_nonempty(g: Graph, es: EvidenceSet) -> Graph:
    """Replace an empty graph with a single node covering a whole sentence.

    Downstream attention needs at least one node on each side. The node spans
    the claim sentence for claim graphs; for evidence graphs it spans the
    first evidence sentence, falling back to the claim when there is none.
    """
    if g.nodes:
        return g
    if g.origin == "claim":
        anchor = es.claim
    else:
        anchor = es.evidence[0] if es.evidence else es.claim
    return Graph(nodes=(_synthetic_node(anchor),), edges=frozenset(), origin=g.origin)


def forward(params: Parameters, cfg: Config, vocab: Vocab, es: EvidenceSet,
            mode: str = "full") -> ForwardResult:
    reorder = mode_reorders(mode)
    if mode == "no_both":
        evidence_graph = None
    else:
        evidence_graph = build_graph(es, "evidence")

    if evidence_graph is not None and (reorder or mode_uses_graph_reasoning(mode)):
        order = sort_evidence(es, evidence_graph, reorder=reorder)
    else:
        # Plain concatenation baseline: document order, no graph involved.
        empty = Graph(nodes=(), edges=frozenset(), origin="evidence")
        order = sort_evidence(es, empty, reorder=False)

    enc = encode_sequence(params, cfg, vocab, order)
    dropped: tuple[int, ...] = ()

    if mode_uses_graph_reasoning(mode):
        assert evidence_graph is not None
        e_graph = ensure_nonempty(evidence_graph, es)
        c_graph = ensure_nonempty(build_graph(es, "claim"), es)
        h0_c, dropped_c = gcn.init_node_matrix(c_graph, enc, order, params)
        h0_e, dropped_e = gcn.init_node_matrix(e_graph, enc, order, params)
        a_c = gcn.normalize_adjacency(c_graph)
        a_e = gcn.normalize_adjacency(e_graph)
        w_claim = [params[n] for n in gcn.gcn_weight_names(cfg, "claim")]
        w_evidence = [params[n] for n in gcn.gcn_weight_names(cfg, "evidence")]
        h_c = gcn.gcn_forward(h0_c, a_c, w_claim)
        h_e = gcn.gcn_forward(h0_e, a_e, w_evidence)
        scores = att.attention_scores(h_c, h_e, params["gat.Wc"], params["gat.We"])
        alpha = att.normalize_attention(scores)
        x = att.claim_centric(alpha, h_e)
        aligned = att.align(h_c, x, params["align.Wa"])
        logits, probs = att.classify(aligned, enc.cls_vector, params)
        dropped = tuple(dropped_c) + tuple(dropped_e)
    else:
        logits, probs = att.classify_cls_only(enc.cls_vector, params)

    return ForwardResult(
        logits=logits,
        probabilities=probs,
        sentence_order=order.sentence_order,
        dropped_nodes=dropped,
        truncated=enc.truncated,
    )


def evidence_refs(es: EvidenceSet) -> list[tuple[str, int]]:
    """(doc, index) pairs for the evidence actually fed to the model.

    Sentence ids of the form "doc:idx" carry the index directly; otherwise the
    position of the sentence within its document's appearance order is used.
    """
    refs = []
    counters: dict[str, int] = {}
    for s in es.evidence:
        doc = s.source_doc
        _, _, suffix = s.sentence_id.rpartition(":")
        if suffix.isdigit():
            refs.append((doc, int(suffix)))
        else:
            refs.append((doc, counters.get(doc, 0)))
        counters[doc] = counters.get(doc, 0) + 1
    return refs


def predict(instance_id: str, es: EvidenceSet, checkpoint: Checkpoint) -> Prediction:
    """Run the full pipeline for one instance and pick the argmax label.

    Ties resolve to the first class in SUPPORTED, REFUTED, NEI order.
    """
    result = forward(checkpoint.params, checkpoint.config, checkpoint.vocab,
                     es, checkpoint.mode)
    probs = result.probabilities.data
    label = LABEL_ORDER[int(np.argmax(probs))]
    return Prediction(
        instance_id=instance_id,
        predicted_label=label,
        probabilities=tuple(float(p) for p in probs),  # type: ignore[arg-type]
        predicted_evidence=tuple(evidence_refs(es)),
    )


# ---------------------------------------------------------------------------
# Checkpoint serialization
# ---------------------------------------------------------------------------

def checkpoint_to_json(ck: Checkpoint) -> dict:
    params = {}
    for name, t in ck.params.items():
        params[name] = {
            "shape": list(t.shape),
            "values": [format(v, ".17g") for v in t.data.reshape(-1)],
        }
    cfg = ck.config.to_json()
    cfg["mode"] = ck.mode
    return {
        "version": CHECKPOINT_VERSION,
        "config": cfg,
        "vocab": ck.vocab.to_json(),
        "params": params,
    }


def checkpoint_from_json(obj: dict) -> Checkpoint:
    version = obj.get("version")
    if version != CHECKPOINT_VERSION:
        raise SchemaError(f"unsupported checkpoint version {version!r}", "version")
    cfg_obj = dict(obj["config"])
    mode = cfg_obj.pop("mode", "full")
    cfg = Config.from_json(cfg_obj)
    vocab = Vocab.from_json(obj["vocab"])
    params = Parameters(np.random.default_rng(cfg.seed))
    for name, entry in obj["params"].items():
        values = np.array([float(v) for v in entry["values"]], dtype=np.float64)
        t = Tensor(values.reshape(entry["shape"]), requires_grad=True)
        params.store[name] = t
    return Checkpoint(config=cfg, vocab=vocab, mode=mode, params=params)


def save_checkpoint(ck: Checkpoint, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(checkpoint_to_json(ck), sort_keys=True, separators=(",", ":")) + "\n",
        encoding="utf-8",
    )


def load_checkpoint(path: str | Path) -> Checkpoint:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"checkpoint file not found: {path}")
    return checkpoint_from_json(json.loads(path.read_text(encoding="utf-8")))
