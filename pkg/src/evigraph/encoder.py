"""Word-level self-attention encoder with learned relative-position biases.

A small stand-in for a pretrained contextual encoder: an embedding table plus
a stack of single-head self-attention blocks. Each block adds a learned bias
indexed by the clipped relative offset j - i to its attention logits, so the
sentence reordering upstream directly changes what the encoder attends to.
The final position of the sequence is the summary ([CLS]) vector for the
joint claim-plus-evidence input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .datamodel import Config
from .ordering import CLS, SEP, SortedOrder
from .tensor import Parameters, Tensor, add, linear, matmul, relu, softmax, take

UNK = "[UNK]"
SPECIALS = (UNK, SEP, CLS)


@dataclass(frozen=True)
class Vocab:
    index: dict  # token -> id

    @classmethod
    def build(cls, token_lists) -> "Vocab":
        seen = set()
        for toks in token_lists:
            seen.update(toks)
        ordered = list(SPECIALS) + sorted(seen - set(SPECIALS))
        return cls(index={tok: i for i, tok in enumerate(ordered)})

    @property
    def size(self) -> int:
        return len(self.index)

    def id(self, token: str) -> int:
        return self.index.get(token, self.index[UNK])

    def encode(self, tokens) -> list[int]:
        return [self.id(t) for t in tokens]

    def to_json(self) -> list[str]:
        return [tok for tok, _ in sorted(self.index.items(), key=lambda kv: kv[1])]

    @classmethod
    def from_json(cls, tokens: list[str]) -> "Vocab":
        return cls(index={tok: i for i, tok in enumerate(tokens)})


@dataclass(frozen=True)
class EncoderOutput:
    vectors: Tensor          # (n, encoder_dim) contextual vectors
    cls_vector: Tensor       # (encoder_dim,) final-position summary
    kept: int                # sequence length actually encoded
    truncated: bool
    dropped_tokens: int


def init_encoder_params(params: Parameters, vocab_size: int, cfg: Config) -> None:
    d = cfg.encoder_dim
    params.create("enc.embed", (vocab_size, d))
    for i in range(cfg.encoder_layers):
        pre = f"enc.layer{i}."
        for name in ("Wq", "Wk", "Wv", "Wo"):
            params.create(pre + name, (d, d))
        params.create(pre + "rel_bias", (2 * cfg.rel_window + 1,))
        params.create(pre + "ffn_W1", (d, 2 * d))
        params.create(pre + "ffn_b1", (2 * d,))
        params.create(pre + "ffn_W2", (2 * d, d))
        params.create(pre + "ffn_b2", (d,))


def truncate_tokens(tokens: list[str], claim_len: int, max_seq_len: int) -> tuple[list[str], bool, int]:
    """Drop evidence-tail tokens so the sequence fits; the claim is never cut.

    The trailing CLS token is always preserved as the final position.
    """
    if claim_len + 2 > max_seq_len:
        raise ValueError(
            f"claim of {claim_len} tokens cannot fit max_seq_len={max_seq_len}"
        )
    if len(tokens) <= max_seq_len:
        return list(tokens), False, 0
    dropped = len(tokens) - max_seq_len
    kept = list(tokens[: max_seq_len - 1]) + [CLS]
    return kept, True, dropped


def _relative_index(n: int, window: int) -> np.ndarray:
    offsets = np.arange(n)[None, :] - np.arange(n)[:, None]
    return np.clip(offsets, -window, window) + window


def encode_sequence(params: Parameters, cfg: Config, vocab: Vocab,
                    order: SortedOrder, include_rel_bias: bool = True) -> EncoderOutput:
    """Contextualize the joint claim+evidence sequence laid out by `order`."""
    tokens, truncated, dropped = truncate_tokens(
        list(order.sequence_tokens), order.claim_len, cfg.max_seq_len
    )
    ids = np.array(vocab.encode(tokens), dtype=np.int64)
    n = len(ids)
    rel_idx = _relative_index(n, cfg.rel_window)
    scale = 1.0 / math.sqrt(cfg.encoder_dim)

    h = take(params["enc.embed"], ids)
    for i in range(cfg.encoder_layers):
        pre = f"enc.layer{i}."
        q = matmul(h, params[pre + "Wq"])
        k = matmul(h, params[pre + "Wk"])
        v = matmul(h, params[pre + "Wv"])
        scores = matmul(q, k.T) * scale
        if include_rel_bias:
            scores = add(scores, take(params[pre + "rel_bias"], rel_idx))
        attn = softmax(scores, axis=-1)
        h = add(h, matmul(matmul(attn, v), params[pre + "Wo"]))
        hidden = relu(linear(h, params[pre + "ffn_W1"], params[pre + "ffn_b1"]))
        h = add(h, linear(hidden, params[pre + "ffn_W2"], params[pre + "ffn_b2"]))

    return EncoderOutput(
        vectors=h,
        cls_vector=h[n - 1],
        kept=n,
        truncated=truncated,
        dropped_tokens=dropped,
    )
