"""Semantic graphs over SRL argument spans.

Each kept argument (verb, argument, location, temporal) becomes a node.
Nodes of one tuple form a clique; nodes from different tuples are linked when
their texts are lexically similar: equal token sequences, contiguous
containment, or a token-multiset overlap strictly larger than half the
shorter span. Claim and evidence graphs are built by the same pipeline but
never linked to each other.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .datamodel import EvidenceSet, Role, SrlTuple, tokenize

KEPT_ROLES = (Role.VERB, Role.ARGUMENT, Role.LOCATION, Role.TEMPORAL)

# Incremented on every build_graph call; lets tests assert that ablation
# paths which promise "no graph" really construct none.
BUILD_COUNT = 0


@dataclass(frozen=True)
class Node:
    node_id: int
    sentence_id: str
    tuple_id: str
    role: Role
    text: str
    span: tuple[int, int]


@dataclass(frozen=True)
class Edge:
    a: int
    b: int
    kind: str  # "intra_tuple" | "cross_tuple"

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError(f"self-loop edge on node {self.a}")
        if self.a > self.b:
            raise ValueError("edge endpoints must be stored sorted")


@dataclass(frozen=True)
class Graph:
    nodes: tuple[Node, ...]
    edges: frozenset[Edge]
    origin: str  # "claim" | "evidence"

    def node(self, node_id: int) -> Node:
        return self.nodes[node_id]

    @property
    def edge_pairs(self) -> set[tuple[int, int]]:
        return {(e.a, e.b) for e in self.edges}


def make_edge(a: int, b: int, kind: str) -> Edge:
    if a > b:
        a, b = b, a
    return Edge(a=a, b=b, kind=kind)


def extract_nodes(tup: SrlTuple, start_id: int = 0) -> list[Node]:
    """One node per argument whose role is kept; order follows argument order."""
    nodes = []
    nid = start_id
    for arg in tup.arguments:
        if arg.role not in KEPT_ROLES:
            continue
        nodes.append(
            Node(
                node_id=nid,
                sentence_id=tup.sentence_id,
                tuple_id=tup.tuple_id,
                role=arg.role,
                text=arg.text,
                span=arg.span,
            )
        )
        nid += 1
    return nodes


def intra_tuple_edges(nodes: list[Node]) -> set[Edge]:
    """Complete graph over the nodes of one tuple: n nodes -> n(n-1)/2 edges."""
    edges = set()
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            edges.add(make_edge(nodes[i].node_id, nodes[j].node_id, "intra_tuple"))
    return edges


def _contains(big: list[str], small: list[str]) -> bool:
    if not small or len(small) > len(big):
        return False
    k = len(small)
    return any(big[i:i + k] == small for i in range(len(big) - k + 1))


def _link_tokens(ta: list[str], tb: list[str]) -> bool:
    if not ta or not tb:
        return False
    if ta == tb:
        return True
    if _contains(ta, tb) or _contains(tb, ta):
        return True
    overlap = sum((Counter(ta) & Counter(tb)).values())
    # Strictly larger than half the shorter span; a tie creates no edge.
    return overlap > min(len(ta), len(tb)) / 2


def cross_tuple_link(a: Node, b: Node) -> bool:
    """Lexical-similarity test for linking nodes from different tuples."""
    return _link_tokens(tokenize(a.text), tokenize(b.text))


def build_graph(es: EvidenceSet, origin: str) -> Graph:
    """Build the semantic graph for the claim or for all evidence sentences.

    Node ids are assigned in (sentence, tuple, argument) order, so two builds
    of the same input are identical. No tuples means an empty, valid graph.
    """
    global BUILD_COUNT
    BUILD_COUNT += 1
    if origin == "claim":
        sentences = [es.claim]
    elif origin == "evidence":
        sentences = list(es.evidence)
    else:
        raise ValueError(f"origin must be 'claim' or 'evidence', got {origin!r}")

    nodes: list[Node] = []
    edges: set[Edge] = set()
    for sentence in sentences:
        for tup in sentence.tuples:
            tuple_nodes = extract_nodes(tup, start_id=len(nodes))
            nodes.extend(tuple_nodes)
            edges |= intra_tuple_edges(tuple_nodes)

    token_cache = [tokenize(n.text) for n in nodes]
    for i in range(len(nodes)):
        key_i = (nodes[i].sentence_id, nodes[i].tuple_id)
        for j in range(i + 1, len(nodes)):
            if (nodes[j].sentence_id, nodes[j].tuple_id) == key_i:
                continue
            if _link_tokens(token_cache[i], token_cache[j]):
                edges.add(make_edge(i, j, "cross_tuple"))

    return Graph(nodes=tuple(nodes), edges=frozenset(edges), origin=origin)


def graph_to_json(g: Graph) -> dict:
    """Stable JSON export: nodes in id order, edges sorted by endpoints."""
    return {
        "origin": g.origin,
        "nodes": [
            {
                "node_id": n.node_id,
                "sentence_id": n.sentence_id,
                "tuple_id": n.tuple_id,
                "role": n.role.value,
                "text": n.text,
                "span": [n.span[0], n.span[1]],
            }
            for n in g.nodes
        ],
        "edges": [
            {"a": e.a, "b": e.b, "kind": e.kind}
            for e in sorted(g.edges, key=lambda e: (e.a, e.b))
        ],
    }
