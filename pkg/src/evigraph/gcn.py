"""Graph convolution: node initialization from encoder spans plus k-layer propagation.

Node vectors start as the mean of the contextual vectors of the tokens inside
the node's span, projected into the node dimension. Each layer then computes
relu(A_hat @ H @ W) over the symmetric-normalized adjacency with self-loops,
aggregating one hop of neighborhood per layer. Claim and evidence graphs run
the same machinery separately.
"""

from __future__ import annotations

import numpy as np

from .datamodel import Config
from .encoder import EncoderOutput
from .graphs import Graph
from .ordering import SortedOrder
from .tensor import Parameters, Tensor, matmul, relu


def normalize_adjacency(g: Graph) -> np.ndarray:
    """A_hat = D^{-1/2} (A + I) D^{-1/2} with D the degree of A + I."""
    n = len(g.nodes)
    a = np.zeros((n, n), dtype=np.float64)
    for e in g.edges:
        a[e.a, e.b] = 1.0
        a[e.b, e.a] = 1.0
    a += np.eye(n)
    d = a.sum(axis=1)
    inv_sqrt = 1.0 / np.sqrt(d) if n else d
    return a * inv_sqrt[:, None] * inv_sqrt[None, :] if n else a


def span_positions(g: Graph, order: SortedOrder, limit: int) -> tuple[list[list[int]], list[int]]:
    """Encoder positions for each node's tokens; ids of fully truncated nodes.

    `limit` is the first invalid position: after truncation the final encoder
    slot holds the summary token, so original positions >= limit are gone.
    """
    per_node: list[list[int]] = []
    dropped: list[int] = []
    for node in g.nodes:
        positions = []
        for t in range(node.span[0], node.span[1]):
            pos = order.token_positions.get((node.sentence_id, t))
            if pos is not None and pos < limit:
                positions.append(pos)
        if not positions:
            dropped.append(node.node_id)
        per_node.append(positions)
    return per_node, dropped


def init_node_matrix(g: Graph, enc: EncoderOutput, order: SortedOrder,
                     params: Parameters) -> tuple[Tensor, list[int]]:
    """H0 = span-mean of contextual vectors, projected to node_dim via gcn.Wp.

    A node whose span was entirely truncated away gets the zero vector; its id
    is returned so callers can log a warning.
    """
    per_node, dropped = span_positions(g, order, enc.kept - 1)
    n_nodes = len(g.nodes)
    pooling = np.zeros((n_nodes, enc.kept), dtype=np.float64)
    for i, positions in enumerate(per_node):
        if positions:
            for pos in positions:
                pooling[i, pos] += 1.0 / len(positions)
    h0 = matmul(matmul(Tensor(pooling), enc.vectors), params["gcn.Wp"])
    return h0, dropped


def init_gcn_params(params: Parameters, cfg: Config) -> None:
    params.create("gcn.Wp", (cfg.encoder_dim, cfg.node_dim))
    d = cfg.node_dim
    if cfg.tied_gcn:
        for j in range(cfg.gcn_layers):
            params.create(f"gcn.shared.W{j}", (d, d))
    else:
        for origin in ("claim", "evidence"):
            for j in range(cfg.gcn_layers):
                params.create(f"gcn.{origin}.W{j}", (d, d))


def gcn_weight_names(cfg: Config, origin: str) -> list[str]:
    if cfg.tied_gcn:
        return [f"gcn.shared.W{j}" for j in range(cfg.gcn_layers)]
    return [f"gcn.{origin}.W{j}" for j in range(cfg.gcn_layers)]


def gcn_layer(h: Tensor, a_hat: Tensor, w: Tensor) -> Tensor:
    """One propagation hop: relu(A_hat @ H @ W)."""
    return relu(matmul(matmul(a_hat, h), w))


def gcn_forward(h0: Tensor, a_hat: np.ndarray, weights: list[Tensor]) -> Tensor:
    """Stacked layers; an empty weight list returns H0 unchanged (ablation only)."""
    a = Tensor(a_hat)
    h = h0
    for w in weights:
        h = gcn_layer(h, a, w)
    return h
