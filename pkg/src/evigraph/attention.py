"""Claim-over-evidence graph attention, node alignment, and the prediction head.

Each claim node queries all evidence nodes with a dot product in a shared
attention space, the softmax-weighted sum gives a claim-centric evidence
vector per claim node, and alignment concatenates [x, y, x - y, x * y] before
a linear map. The head mean-pools the aligned rows and classifies the pooled
vector together with the encoder summary through a one-hidden-layer MLP.
"""

from __future__ import annotations

from .datamodel import Config
from .tensor import (
    Parameters,
    Tensor,
    concat,
    linear,
    matmul,
    mean_pool,
    mul,
    relu,
    reshape,
    softmax,
)

HEAD_HIDDEN_FACTOR = 2


def init_attention_params(params: Parameters, cfg: Config) -> None:
    params.create("gat.Wc", (cfg.attention_dim, cfg.node_dim))
    params.create("gat.We", (cfg.attention_dim, cfg.node_dim))
    params.create("align.Wa", (cfg.node_dim, 4 * cfg.node_dim))
    hidden = HEAD_HIDDEN_FACTOR * cfg.node_dim
    params.create("head.joint.W1", (cfg.node_dim + cfg.encoder_dim, hidden))
    params.create("head.joint.b1", (hidden,))
    params.create("head.joint.W2", (hidden, 3))
    params.create("head.joint.b2", (3,))


def init_cls_head_params(params: Parameters, cfg: Config) -> None:
    hidden = HEAD_HIDDEN_FACTOR * cfg.node_dim
    params.create("head.cls.W1", (cfg.encoder_dim, hidden))
    params.create("head.cls.b1", (hidden,))
    params.create("head.cls.W2", (hidden, 3))
    params.create("head.cls.b2", (3,))


def attention_scores(h_c: Tensor, h_e: Tensor, w_c: Tensor, w_e: Tensor) -> Tensor:
    """e[i, j] = (Wc h_c_i) . (We h_e_j); shape (N_c, N_e)."""
    if h_e.shape[0] == 0:
        raise ValueError("no evidence nodes")
    return matmul(matmul(h_c, w_c.T), matmul(h_e, w_e.T).T)


def normalize_attention(e: Tensor) -> Tensor:
    """Row-wise softmax over evidence nodes."""
    return softmax(e, axis=-1)


def claim_centric(alpha: Tensor, h_e: Tensor) -> Tensor:
    """X = alpha @ H_e: one weighted evidence summary per claim node."""
    return matmul(alpha, h_e)


def align(h_c: Tensor, x: Tensor, w_a: Tensor) -> Tensor:
    """A = [h_c, x, h_c - x, h_c * x] @ Wa^T, row per claim node."""
    features = concat([h_c, x, h_c - x, mul(h_c, x)], axis=1)
    return matmul(features, w_a.T)


def classify(aligned: Tensor, h_cls: Tensor, params: Parameters,
             prefix: str = "head.joint") -> tuple[Tensor, Tensor]:
    """Mean-pool aligned rows, join the sequence summary, and score 3 classes."""
    g = mean_pool(aligned)
    z = reshape(concat([g, h_cls], axis=0), (1, -1))
    hidden = relu(linear(z, params[f"{prefix}.W1"], params[f"{prefix}.b1"]))
    logits = reshape(linear(hidden, params[f"{prefix}.W2"], params[f"{prefix}.b2"]), (3,))
    return logits, softmax(logits, axis=-1)


def classify_cls_only(h_cls: Tensor, params: Parameters,
                      prefix: str = "head.cls") -> tuple[Tensor, Tensor]:
    """Classifier over the sequence summary alone (graph-free paths)."""
    z = reshape(h_cls, (1, -1))
    hidden = relu(linear(z, params[f"{prefix}.W1"], params[f"{prefix}.b1"]))
    logits = reshape(linear(hidden, params[f"{prefix}.W2"], params[f"{prefix}.b2"]), (3,))
    return logits, softmax(logits, axis=-1)
