"""Immutable graph structure, BFS shortest paths and JSON serialization."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DisconnectedGraphError, UnreachableError


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with optional planted cluster labels.

    Edges are stored as sorted (i, j) pairs with i < j; duplicates and
    self-loops are rejected on construction.
    """

    node_count: int
    edges: tuple[tuple[int, int], ...]
    clusters: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.node_count < 1:
            raise ValueError("graph needs at least one node")
        canon = []
        seen = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if not (0 <= i < self.node_count and 0 <= j < self.node_count):
                raise ValueError(f"edge ({i}, {j}) out of range")
            e = (i, j) if i < j else (j, i)
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            canon.append(e)
        object.__setattr__(self, "edges", tuple(canon))
        if self.clusters is not None:
            labels = tuple(int(c) for c in self.clusters)
            if len(labels) != self.node_count:
                raise ValueError("cluster labels must cover all nodes")
            object.__setattr__(self, "clusters", labels)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def density(self) -> float:
        possible = self.node_count * (self.node_count - 1) / 2
        return self.edge_count / possible if possible else 0.0


def adjacency(g: Graph) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(g.node_count)]
    for i, j in g.edges:
        adj[i].append(j)
        adj[j].append(i)
    return adj


def bfs_distances(g: Graph, source: int, adj: list[list[int]] | None = None) -> list[int]:
    """Hop distances from source; unreachable nodes get -1."""
    if adj is None:
        adj = adjacency(g)
    dist = [-1] * g.node_count
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def is_connected(g: Graph) -> bool:
    return min(bfs_distances(g, 0)) >= 0


def all_pairs_distances(g: Graph) -> np.ndarray:
    """All-pairs BFS hop counts as an (n, n) int matrix.

    Raises DisconnectedGraphError when any pair is unreachable.
    """
    adj = adjacency(g)
    n = g.node_count
    out = np.zeros((n, n), dtype=np.int64)
    for s in range(n):
        row = bfs_distances(g, s, adj)
        if min(row) < 0:
            raise DisconnectedGraphError("graph is not connected")
        out[s] = row
    return out


def shortest_path_length(g: Graph, s: int, t: int) -> int:
    """BFS hop count between two nodes; raises UnreachableError if none."""
    d = bfs_distances(g, s)[t]
    if d < 0:
        raise UnreachableError(f"no path from {s} to {t}")
    return d


def diameter(g: Graph) -> int:
    return int(all_pairs_distances(g).max())


def graph_to_json(g: Graph, spec: dict | None = None, seed: int | None = None) -> dict:
    return {
        "schemaVersion": 1,
        "nodes": g.node_count,
        "edges": [list(e) for e in g.edges],
        "clusters": list(g.clusters) if g.clusters is not None else None,
        "spec": spec,
        "seed": seed,
    }


def graph_from_json(obj: dict) -> Graph:
    clusters = obj.get("clusters")
    return Graph(
        node_count=int(obj["nodes"]),
        edges=tuple((int(i), int(j)) for i, j in obj["edges"]),
        clusters=tuple(clusters) if clusters is not None else None,
    )


def dump_json(obj: dict, path: str) -> None:
    """Write canonical JSON: sorted keys, fixed separators, trailing newline."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
