"""Two-stage training loop.

Stage 1 fits the sequence encoder and the summary-vector classifier under the
mode's sentence ordering. Stage 2 freezes the encoder and trains the
downstream modules: graph convolution, graph attention, alignment, and the
joint head for graph modes, or the summary classifier alone otherwise. Both
stages use AdamW with per-batch gradient accumulation in dataset order, so a
fixed seed reproduces checkpoints bit for bit.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .datamodel import LABEL_INDEX, Config, Instance
from .encoder import Vocab
from .model import Checkpoint, forward, init_params, mode_uses_graph_reasoning, predict
from .optim import AdamW
from .tensor import Parameters, cross_entropy

log = logging.getLogger(__name__)

STAGE1_PREFIXES = ("enc.", "head.cls.")


def stage1_mode(mode: str) -> str:
    """Stage 1 is always summary-only, under the mode's sentence ordering."""
    return {"full": "no_graph", "no_reorder": "no_both",
            "no_graph": "no_graph", "no_both": "no_both"}[mode]


def stage2_prefixes(mode: str) -> tuple[str, ...]:
    if mode_uses_graph_reasoning(mode):
        return ("gcn.", "gat.", "align.", "head.joint.")
    return ("head.cls.",)


def set_trainable(params: Parameters, prefixes: tuple[str, ...], trainable: bool) -> None:
    for name, t in params.store.items():
        if name.startswith(prefixes):
            t.requires_grad = trainable


def build_vocab(srl: dict, instance_ids: list[str]) -> Vocab:
    token_lists = []
    for instance_id in sorted(instance_ids):
        es = srl[instance_id]
        token_lists.append(es.claim.token_texts)
        for s in es.evidence:
            token_lists.append(s.token_texts)
    return Vocab.build(token_lists)


@dataclass
class TrainResult:
    checkpoint: Checkpoint
    entries: list[dict]
    skipped: int


def _run_stage(stage: int, epochs: int, forward_mode: str, optimizer: AdamW,
               usable: list[Instance], srl: dict, params: Parameters,
               cfg: Config, vocab: Vocab, rng: np.random.Generator,
               entries: list[dict]) -> None:
    n = len(usable)
    for epoch in range(epochs):
        order = rng.permutation(n)
        total_loss = 0.0
        correct = 0
        for start in range(0, n, cfg.batch_size):
            chunk = [usable[int(i)] for i in order[start:start + cfg.batch_size]]
            params.zero_grad()
            for inst in chunk:
                es = srl[inst.instance_id]
                result = forward(params, cfg, vocab, es, forward_mode)
                gold = LABEL_INDEX[inst.label]
                loss = cross_entropy(result.logits, gold)
                total_loss += loss.item()
                if int(np.argmax(result.probabilities.data)) == gold:
                    correct += 1
                (loss * (1.0 / len(chunk))).backward()
            optimizer.step()
        entries.append({
            "stage": stage,
            "epoch": epoch,
            "loss": total_loss / n,
            "train_accuracy": correct / n,
        })


def train(instances: list[Instance], srl: dict, cfg: Config,
          mode: str = "full") -> TrainResult:
    """Train a checkpoint for `mode` on instances that have SRL parses."""
    cfg.validate()
    usable = [inst for inst in instances if inst.instance_id in srl]
    skipped = len(instances) - len(usable)
    if skipped:
        log.warning("skipping %d instances without SRL parses", skipped)
    if not usable:
        raise ValueError("no trainable instances: every instance lacks an SRL parse")

    vocab = build_vocab(srl, [inst.instance_id for inst in usable])
    params = init_params(cfg, vocab.size, mode)
    rng = np.random.default_rng([cfg.seed, 1])
    entries: list[dict] = []

    opt1 = AdamW(params, params.subset(STAGE1_PREFIXES),
                 lr=cfg.learning_rate, weight_decay=cfg.weight_decay)
    _run_stage(1, cfg.stage1_epochs, stage1_mode(mode), opt1,
               usable, srl, params, cfg, vocab, rng, entries)

    set_trainable(params, ("enc.",), False)
    opt2 = AdamW(params, params.subset(stage2_prefixes(mode)),
                 lr=cfg.learning_rate, weight_decay=cfg.weight_decay)
    _run_stage(2, cfg.stage2_epochs, mode, opt2,
               usable, srl, params, cfg, vocab, rng, entries)
    set_trainable(params, ("enc.",), True)

    checkpoint = Checkpoint(config=cfg, vocab=vocab, mode=mode, params=params)
    return TrainResult(checkpoint=checkpoint, entries=entries, skipped=skipped)


def accuracy(checkpoint: Checkpoint, instances: list[Instance], srl: dict) -> float:
    """Fraction of instances (with SRL available) whose label is predicted."""
    usable = [inst for inst in instances if inst.instance_id in srl]
    if not usable:
        return 0.0
    hits = 0
    for inst in usable:
        pred = predict(inst.instance_id, srl[inst.instance_id], checkpoint)
        if pred.predicted_label == inst.label:
            hits += 1
    return hits / len(usable)
