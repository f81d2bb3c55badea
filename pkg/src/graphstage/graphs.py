"""Canonical graph representation shared by every other module.

Graphs are immutable once built: nodes are the dense ids ``0..node_count-1``,
edges are simple (no self-loops, no duplicates) and carry an integer weight
exactly when ``weight_kind`` says they should.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence, Tuple

Edge = Tuple[int, int, Optional[int]]


class WeightKind(str, Enum):
    NONE = "none"
    WEIGHT = "weight"
    CAPACITY = "capacity"


class GraphError(ValueError):
    """Base class for graph construction failures."""


class InvalidEdge(GraphError):
    """Edge references an unknown node, is a self-loop, or repeats another edge."""


class WeightMismatch(GraphError):
    """Weight presence on an edge disagrees with the graph's weight kind."""


@dataclass(frozen=True)
class Graph:
    directed: bool
    node_count: int
    edges: Tuple[Edge, ...]
    weight_kind: WeightKind

    @property
    def weighted(self) -> bool:
        return self.weight_kind is not WeightKind.NONE


def _normalize_edge(raw) -> Edge:
    if len(raw) == 2:
        u, v = raw
        return (int(u), int(v), None)
    if len(raw) == 3:
        u, v, w = raw
        return (int(u), int(v), None if w is None else int(w))
    raise InvalidEdge(f"edge must have 2 or 3 components, got {raw!r}")


def build_graph(
    directed: bool,
    node_count: int,
    edges: Iterable[Sequence],
    weight_kind: WeightKind | str = WeightKind.NONE,
) -> Graph:
    """Validate and freeze a graph.

    Raises InvalidEdge for out-of-range ids, self-loops and duplicates
    (undirected duplicates are checked orientation-insensitively), and
    WeightMismatch when weight presence disagrees with ``weight_kind``.
    """
    kind = WeightKind(weight_kind)
    if node_count < 0:
        raise GraphError(f"node_count must be non-negative, got {node_count}")
    normalized = []
    seen: set[Tuple[int, int]] = set()
    for raw in edges:
        u, v, w = _normalize_edge(raw)
        if not (0 <= u < node_count) or not (0 <= v < node_count):
            raise InvalidEdge(f"edge ({u}, {v}) references a node outside 0..{node_count - 1}")
        if u == v:
            raise InvalidEdge(f"self-loop ({u}, {v}) is not allowed")
        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in seen:
            raise InvalidEdge(f"duplicate edge ({u}, {v})")
        seen.add(key)
        if kind is WeightKind.NONE:
            if w is not None:
                raise WeightMismatch(f"edge ({u}, {v}) carries a weight but weight_kind is none")
        else:
            if w is None:
                raise WeightMismatch(f"edge ({u}, {v}) is missing a {kind.value}")
            if w < 1:
                raise WeightMismatch(f"edge ({u}, {v}) has non-positive {kind.value} {w}")
        normalized.append((u, v, w))
    return Graph(bool(directed), node_count, tuple(normalized), kind)


def canonical_edge_set(g: Graph) -> frozenset:
    """Order-insensitive edge set; undirected edges are normalized to (min, max).

    Unweighted graphs yield (u, v) pairs, weighted graphs (u, v, w) triples.
    """
    out = set()
    for u, v, w in g.edges:
        if not g.directed and u > v:
            u, v = v, u
        out.add((u, v) if w is None else (u, v, w))
    return frozenset(out)


def graphs_equal(a: Graph, b: Graph) -> bool:
    """Edge-level equality used for graph-accuracy scoring.

    Two graphs are equal iff they agree on directedness, weight kind and the
    canonical edge set. Node counts are deliberately not compared: a graph
    reconstructed from an edge list cannot know about trailing isolated
    nodes, and edge comparison is what the accuracy metric is defined over.
    """
    return (
        a.directed == b.directed
        and a.weight_kind == b.weight_kind
        and canonical_edge_set(a) == canonical_edge_set(b)
    )


def max_referenced_node(g: Graph) -> int:
    """Largest node id appearing in any edge, or -1 for an edgeless graph."""
    best = -1
    for u, v, _ in g.edges:
        if u > best:
            best = u
        if v > best:
            best = v
    return best
