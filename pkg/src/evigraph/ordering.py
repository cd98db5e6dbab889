"""Evidence reordering via graph topology.

The undirected semantic graph is oriented by document order, cycles are broken
by removing DFS back-edges, and a depth-first topological sort produces a node
sequence in which closely linked nodes sit near each other. Evidence sentences
are then reordered by the first appearance of any of their nodes; the claim is
never reordered and always leads the token sequence.

Only the reordering is computed. A full node-distance matrix over all token
pairs is deliberately avoided: it is quadratic in sequence length and the
encoder only needs the relative positions induced by the new sentence order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .datamodel import EvidenceSet
from .graphs import Graph

SEP = "[SEP]"
CLS = "[CLS]"


class CycleError(RuntimeError):
    """topology_sort received a graph that still contains a directed cycle."""


@dataclass(frozen=True)
class DirectedGraph:
    nodes: tuple[int, ...]
    relations: tuple[tuple[int, int], ...]  # (parent, child)

    def children(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {n: [] for n in self.nodes}
        for u, v in self.relations:
            out[u].append(v)
        for n in out:
            out[n].sort()
        return out

    def in_degree(self) -> dict[int, int]:
        deg = {n: 0 for n in self.nodes}
        for _, v in self.relations:
            deg[v] += 1
        return deg


@dataclass(frozen=True)
class SortedOrder:
    node_order: tuple[int, ...]
    sentence_order: tuple[str, ...]
    # (sentence_id, token_index) -> position in the concatenated sequence
    # [claim tokens, SEP, evidence tokens per reordered sentence with SEPs, CLS].
    token_positions: dict[tuple[str, int], int]
    sequence_tokens: tuple[str, ...]
    claim_len: int


def orient_graph(g: Graph) -> DirectedGraph:
    """Direct every undirected edge from the document-earlier node to the later.

    Ordering key is (sentence_id, tuple_id, node_id); because every edge gets
    a consistent total-order direction, the result is always acyclic.
    """
    def key(node_id: int):
        n = g.node(node_id)
        return (n.sentence_id, n.tuple_id, n.node_id)

    relations = []
    for e in sorted(g.edges, key=lambda e: (e.a, e.b)):
        u, v = (e.a, e.b) if key(e.a) <= key(e.b) else (e.b, e.a)
        relations.append((u, v))
    return DirectedGraph(
        nodes=tuple(n.node_id for n in g.nodes),
        relations=tuple(sorted(relations)),
    )


def make_acyclic(dg: DirectedGraph) -> DirectedGraph:
    """Drop exactly the back-edges found by a deterministic DFS in id order."""
    children = dg.children()
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in dg.nodes}
    removed: set[tuple[int, int]] = set()

    def visit(u: int) -> None:
        color[u] = GRAY
        for v in children[u]:
            if v == u or color.get(v) == GRAY:
                removed.add((u, v))
            elif color.get(v) == WHITE:
                visit(v)
        color[u] = BLACK

    for n in sorted(dg.nodes):
        if color[n] == WHITE:
            visit(n)

    kept = tuple(r for r in dg.relations if r not in removed)
    return DirectedGraph(nodes=dg.nodes, relations=kept)


def topology_sort(dg: DirectedGraph) -> list[int]:
    """Depth-first topological sort starting from nodes with no incoming relation.

    Nodes are prepended when their subtree is finished (reverse postorder), so
    every parent precedes all of its descendants. Roots and children are taken
    in reverse id order purely so that smaller ids surface first among ties;
    isolated nodes keep their input order.
    """
    children = dg.children()
    in_deg = dg.in_degree()
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in dg.nodes}
    order: list[int] = []

    def visit(u: int) -> None:
        color[u] = GRAY
        for v in reversed(children[u]):
            if color[v] == GRAY:
                raise CycleError(f"cycle through relation {u}->{v}; run make_acyclic first")
            if color[v] == WHITE:
                visit(v)
        color[u] = BLACK
        order.insert(0, u)

    roots = [n for n in dg.nodes if in_deg[n] == 0]
    for root in reversed(roots):
        if color[root] == WHITE:
            visit(root)
    if len(order) != len(dg.nodes):
        raise CycleError("unreachable nodes remain; graph contains a cycle")
    return order


def reorder_sentences(es: EvidenceSet, node_order: list[int], g: Graph) -> list[str]:
    """Order evidence sentences by first node appearance; node-less ones go last."""
    seen: list[str] = []
    for node_id in node_order:
        sid = g.node(node_id).sentence_id
        if sid not in seen:
            seen.append(sid)
    for s in es.evidence:
        if s.sentence_id not in seen:
            seen.append(s.sentence_id)
    return seen


def build_layout(es: EvidenceSet, sentence_order: list[str]) -> tuple[list[str], dict[tuple[str, int], int], int]:
    """Concatenate claim and ordered evidence into one token sequence.

    Returns (tokens, positions, claim_len) where tokens is
    [claim..., SEP, sentence..., SEP, ..., CLS] and positions maps each real
    (sentence_id, token_index) to its sequence position.
    """
    tokens: list[str] = []
    positions: dict[tuple[str, int], int] = {}
    for i, tok in enumerate(es.claim.tokens):
        positions[(es.claim.sentence_id, i)] = len(tokens)
        tokens.append(tok.text)
    claim_len = len(tokens)
    tokens.append(SEP)
    for sid in sentence_order:
        sentence = es.sentence(sid)
        for i, tok in enumerate(sentence.tokens):
            positions[(sid, i)] = len(tokens)
            tokens.append(tok.text)
        tokens.append(SEP)
    tokens.append(CLS)
    return tokens, positions, claim_len


def sort_evidence(es: EvidenceSet, evidence_graph: Graph, reorder: bool = True) -> SortedOrder:
    """Run the full reordering pipeline and lay out the joint token sequence."""
    if reorder:
        dg = make_acyclic(orient_graph(evidence_graph))
        node_order = topology_sort(dg)
        sentence_order = reorder_sentences(es, node_order, evidence_graph)
    else:
        node_order = [n.node_id for n in evidence_graph.nodes]
        sentence_order = [s.sentence_id for s in es.evidence]
    tokens, positions, claim_len = build_layout(es, sentence_order)
    return SortedOrder(
        node_order=tuple(node_order),
        sentence_order=tuple(sentence_order),
        token_positions=positions,
        sequence_tokens=tuple(tokens),
        claim_len=claim_len,
    )
