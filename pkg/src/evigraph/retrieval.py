"""Keyword document retrieval and sentence-level evidence selection.

Documents are scored by title-token overlap with the claim (plus a small bonus
when the whole title appears contiguously inside the claim). Sentences are
scored by a normalized token-overlap ratio by default; a trained scorer backed
by the sequence encoder exposes the same interface.
"""

from __future__ import annotations

import json
import logging
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .datamodel import tokenize

log = logging.getLogger(__name__)

TITLE_IN_CLAIM_BONUS = 0.5


@dataclass(frozen=True)
class Document:
    doc_id: str
    title: str
    sentences: tuple[str, ...]


@dataclass(frozen=True)
class RankedEvidence:
    # (doc_id, sentence_index, score), best first; ties broken by (doc_id, index).
    items: tuple[tuple[str, int, float], ...]

    def pairs(self) -> list[tuple[str, int]]:
        return [(doc, idx) for doc, idx, _ in self.items]


def load_corpus(path: str | Path) -> list[Document]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"corpus file not found: {path}")
    docs = []
    with path.open(encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            docs.append(Document(
                doc_id=str(obj["doc_id"]),
                title=str(obj["title"]),
                sentences=tuple(str(s) for s in obj["sentences"]),
            ))
    return docs


def document_to_json(doc: Document) -> dict:
    return {"doc_id": doc.doc_id, "title": doc.title, "sentences": list(doc.sentences)}


def _contains_seq(big: list[str], small: list[str]) -> bool:
    if not small or len(small) > len(big):
        return False
    k = len(small)
    return any(big[i:i + k] == small for i in range(len(big) - k + 1))


def retrieve_documents(claim: str, corpus: list[Document], m: int = 10) -> list[str]:
    """Top-m doc ids by title keyword overlap; deterministic doc_id tie-break."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    claim_tokens = tokenize(claim)
    claim_set = set(claim_tokens)
    scored = []
    for doc in corpus:
        title_tokens = tokenize(doc.title)
        score = float(len(claim_set & set(title_tokens)))
        if title_tokens and _contains_seq(claim_tokens, title_tokens):
            score += TITLE_IN_CLAIM_BONUS
        scored.append((doc.doc_id, score))
    scored.sort(key=lambda item: (-item[1], item[0]))
    top = scored[:m]
    if top and all(score == 0.0 for _, score in top):
        log.warning("no document title overlaps claim %r; returning lowest-id documents", claim)
    return [doc_id for doc_id, _ in top]


class LexicalScorer:
    """overlap(claim, sentence) / sqrt(|claim| * |sentence|), multiset overlap."""

    def score(self, claim: str, sentence: str) -> float:
        a = tokenize(claim)
        b = tokenize(sentence)
        if not a or not b:
            return 0.0
        overlap = sum((Counter(a) & Counter(b)).values())
        return overlap / math.sqrt(len(a) * len(b))


class TrainedScorer:
    """Relevance head over the sequence encoder; interface-identical to LexicalScorer.

    Scores the [claim, SEP, sentence, SEP, CLS] pair and returns the
    probability of the relevant class.
    """

    def __init__(self, cfg, vocab, params):
        self.cfg = cfg
        self.vocab = vocab
        self.params = params

    def _logits(self, claim: str, sentence: str):
        from .encoder import encode_sequence
        from .ordering import CLS, SEP, SortedOrder
        from .tensor import linear, reshape

        claim_tokens = tokenize(claim)
        tokens = claim_tokens + [SEP] + tokenize(sentence) + [SEP, CLS]
        order = SortedOrder(node_order=(), sentence_order=(), token_positions={},
                            sequence_tokens=tuple(tokens),
                            claim_len=len(claim_tokens))
        enc = encode_sequence(self.params, self.cfg, self.vocab, order)
        row = reshape(enc.cls_vector, (1, -1))
        return reshape(linear(row, self.params["scorer.W"], self.params["scorer.b"]), (2,))

    def score(self, claim: str, sentence: str) -> float:
        from .tensor import softmax

        if not tokenize(claim) or not tokenize(sentence):
            return 0.0
        return float(softmax(self._logits(claim, sentence)).data[1])


def train_scorer(pairs: list[tuple[str, str]], pool: list[str], cfg,
                 epochs: int = 10, negatives_per_gold: int = 4) -> TrainedScorer:
    """Fit a TrainedScorer on (claim, gold sentence) pairs.

    Negatives are sampled uniformly from `pool`, skipping the gold itself,
    `negatives_per_gold` per pair. Deterministic under cfg.seed.
    """
    import numpy as np

    from .encoder import Vocab, init_encoder_params
    from .optim import AdamW
    from .tensor import Parameters, cross_entropy

    cfg.validate()
    rng = np.random.default_rng([cfg.seed, 2])
    token_lists = [tokenize(c) + tokenize(s) for c, s in pairs]
    token_lists += [tokenize(s) for s in pool]
    vocab = Vocab.build(token_lists)
    params = Parameters(np.random.default_rng(cfg.seed))
    init_encoder_params(params, vocab.size, cfg)
    params.create("scorer.W", (cfg.encoder_dim, 2))
    params.create("scorer.b", (2,))
    scorer = TrainedScorer(cfg, vocab, params)
    optimizer = AdamW(params, lr=cfg.learning_rate, weight_decay=cfg.weight_decay)

    examples = []
    for claim, gold in pairs:
        examples.append((claim, gold, 1))
        candidates = [s for s in pool if s != gold]
        for _ in range(negatives_per_gold):
            if not candidates:
                break
            examples.append((claim, candidates[int(rng.integers(len(candidates)))], 0))

    for _ in range(epochs):
        order = rng.permutation(len(examples))
        for start in range(0, len(order), cfg.batch_size):
            chunk = order[start:start + cfg.batch_size]
            params.zero_grad()
            for idx in chunk:
                claim, sentence, label = examples[int(idx)]
                loss = cross_entropy(scorer._logits(claim, sentence), label)
                (loss * (1.0 / len(chunk))).backward()
            optimizer.step()
    return scorer


def score_evidence(claim: str, sentence: str, scorer=None) -> float:
    scorer = scorer if scorer is not None else LexicalScorer()
    return scorer.score(claim, sentence)


def select_evidence(claim: str, documents: list[Document], k: int = 5,
                    scorer=None) -> RankedEvidence:
    """Score every sentence of every document and keep the top k."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    scorer = scorer if scorer is not None else LexicalScorer()
    scored = []
    for doc in documents:
        for idx, sentence in enumerate(doc.sentences):
            scored.append((doc.doc_id, idx, scorer.score(claim, sentence)))
    scored.sort(key=lambda item: (-item[2], item[0], item[1]))
    return RankedEvidence(items=tuple(scored[:k]))
