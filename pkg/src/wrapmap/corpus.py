"""Study graph corpora: clustered graphs generated by planted partition with
a modularity target, and scale-free graphs with a density target.

Clustered graphs: nodes are split into k nearly equal groups; with equal
groups the expected Newman modularity of the planted labels is the intra-edge
fraction minus sum of squared group edge-endpoint shares, so the intra
fraction is tuned toward target + sum((size/n)^2), corrected after measuring
and resampled until the realized modularity is within tolerance.

Scale-free graphs: preferential attachment seeded with a small clique, then
uniform random extra edges up to the exact target edge count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .errors import SpecInfeasibleError
from .graphs import Graph, is_connected

MAX_REJECTION_ROUNDS = 200


@dataclass(frozen=True)
class ClusteredGraphSpec:
    node_range: tuple[int, int]
    edge_range: tuple[int, int]
    cluster_range: tuple[int, int] = (4, 7)
    target_modularity: float = 0.4
    modularity_tol: float = 0.02

    def __post_init__(self) -> None:
        if not 0.0 < self.target_modularity < 1.0:
            raise ValueError("target modularity must be in (0, 1)")
        if self.cluster_range[0] < 1 or self.cluster_range[1] < self.cluster_range[0]:
            raise ValueError("bad cluster range")


@dataclass(frozen=True)
class ScaleFreeGraphSpec:
    node_range: tuple[int, int]
    target_density: float

    def __post_init__(self) -> None:
        if not 0.0 < self.target_density < 1.0:
            raise ValueError("target density must be in (0, 1)")


CLUSTERED_PRESETS: dict[str, ClusteredGraphSpec] = {
    "small-easy": ClusteredGraphSpec((68, 80), (710, 925), (4, 7), 0.4),
    "small-hard": ClusteredGraphSpec((68, 80), (710, 925), (4, 7), 0.3),
    "large-easy": ClusteredGraphSpec((126, 134), (2310, 2590), (4, 7), 0.4),
    "large-hard": ClusteredGraphSpec((126, 134), (2310, 2590), (4, 7), 0.3),
}

SCALE_FREE_PRESETS: dict[str, ScaleFreeGraphSpec] = {
    "path-easy": ScaleFreeGraphSpec((50, 57), 0.075),
    "path-hard": ScaleFreeGraphSpec((50, 57), 0.11),
}


def modularity(g: Graph, labels) -> float:
    """Newman modularity Q = sum_c (e_cc - a_c^2) of a node partition."""
    labels = list(labels)
    if len(labels) != g.node_count:
        raise ValueError("labels must cover all nodes")
    m = g.edge_count
    if m == 0:
        return 0.0
    groups = sorted(set(labels))
    index = {c: k for k, c in enumerate(groups)}
    intra = [0] * len(groups)
    ends = [0] * len(groups)
    for i, j in g.edges:
        ci, cj = index[labels[i]], index[labels[j]]
        ends[ci] += 1
        ends[cj] += 1
        if ci == cj:
            intra[ci] += 1
    return sum(intra[c] / m - (ends[c] / (2 * m)) ** 2 for c in range(len(groups)))


def _balanced_sizes(n: int, k: int) -> list[int]:
    base = n // k
    sizes = [base + (1 if c < n % k else 0) for c in range(k)]
    return sizes


def _sample_pairs(rng, pool_size: int, count: int) -> np.ndarray:
    return rng.choice(pool_size, size=count, replace=False)


def generate_clustered(spec: ClusteredGraphSpec, seed: int) -> Graph:
    """Connected clustered graph with planted labels whose Newman modularity
    is within spec.modularity_tol of the target; node and edge counts land
    inside the spec ranges. Raises SpecInfeasibleError after 200 rounds."""
    rng = np.random.default_rng(seed)
    for _ in range(MAX_REJECTION_ROUNDS):
        n = int(rng.integers(spec.node_range[0], spec.node_range[1] + 1))
        k = int(rng.integers(spec.cluster_range[0], spec.cluster_range[1] + 1))
        m = int(rng.integers(spec.edge_range[0], spec.edge_range[1] + 1))
        sizes = _balanced_sizes(n, k)
        labels = np.repeat(np.arange(k), sizes)
        rng.shuffle(labels)
        members = [np.flatnonzero(labels == c) for c in range(k)]

        intra_pairs = []
        for c in range(k):
            s = sizes[c]
            idx = members[c]
            intra_pairs.append([(int(idx[a]), int(idx[b])) for a in range(s) for b in range(a + 1, s)])
        inter_pairs = [
            (i, j)
            for i in range(n - 1)
            for j in range(i + 1, n)
            if labels[i] != labels[j]
        ]
        total_intra = sum(len(p) for p in intra_pairs)

        share = sum((s / n) ** 2 for s in sizes)
        f = spec.target_modularity + share
        graph = None
        for _ in range(6):  # corrective retune on the measured modularity
            m_in = int(round(f * m))
            m_out = m - m_in
            if m_in > total_intra or m_out > len(inter_pairs) or m_in < k or m_out < k - 1:
                break
            quota = [len(p) / total_intra * m_in for p in intra_pairs]
            alloc = [min(int(q), len(intra_pairs[c])) for c, q in enumerate(quota)]
            order = sorted(range(k), key=lambda c: quota[c] - alloc[c], reverse=True)
            for c in order:
                if sum(alloc) >= m_in:
                    break
                alloc[c] = min(alloc[c] + 1, len(intra_pairs[c]))
            if sum(alloc) != m_in:
                break
            edges: list[tuple[int, int]] = []
            for c in range(k):
                for t in _sample_pairs(rng, len(intra_pairs[c]), alloc[c]):
                    edges.append(intra_pairs[c][int(t)])
            for t in _sample_pairs(rng, len(inter_pairs), m_out):
                edges.append(inter_pairs[int(t)])
            candidate = Graph(n, tuple(edges), clusters=tuple(int(c) for c in labels))
            if not is_connected(candidate):
                continue
            q = modularity(candidate, candidate.clusters)
            if abs(q - spec.target_modularity) <= spec.modularity_tol:
                graph = candidate
                break
            f += spec.target_modularity - q
        if graph is not None:
            return graph
    raise SpecInfeasibleError("could not hit the modularity target in 200 rounds")


def generate_scale_free(spec: ScaleFreeGraphSpec, seed: int) -> Graph:
    """Connected preferential-attachment graph with density within 10% of the
    target and a heavy-tailed degree distribution (max >= 3x median)."""
    rng = np.random.default_rng(seed)
    for _ in range(MAX_REJECTION_ROUNDS):
        n = int(rng.integers(spec.node_range[0], spec.node_range[1] + 1))
        m_target = int(round(spec.target_density * n * (n - 1) / 2))
        ba_m = 1
        while (ba_m + 1) * (ba_m + 2) // 2 + (n - ba_m - 2) * (ba_m + 1) <= m_target:
            ba_m += 1
        edges: set[tuple[int, int]] = set()
        core = ba_m + 1
        for i in range(core - 1):
            for j in range(i + 1, core):
                edges.add((i, j))
        # repeated-endpoints list makes attachment probability proportional to degree
        endpoints: list[int] = [v for e in edges for v in e]
        for v in range(core, n):
            chosen: set[int] = set()
            while len(chosen) < ba_m:
                pick = int(endpoints[int(rng.integers(0, len(endpoints)))])
                chosen.add(pick)
            for u in chosen:
                edges.add((min(u, v), max(u, v)))
                endpoints.extend((u, v))
        while len(edges) < m_target:
            a = int(rng.integers(0, n))
            b = int(rng.integers(0, n))
            if a == b:
                continue
            e = (min(a, b), max(a, b))
            if e not in edges:
                edges.add(e)
        g = Graph(n, tuple(sorted(edges)))
        degrees = np.zeros(n, dtype=int)
        for i, j in g.edges:
            degrees[i] += 1
            degrees[j] += 1
        realized = g.density()
        if not is_connected(g):
            continue
        if abs(realized - spec.target_density) / spec.target_density > 0.10:
            continue
        # tail check is unachievable on very small graphs (max degree < 3 * median)
        if n >= 20 and degrees.max() < 3 * np.median(degrees):
            continue
        return g
    raise SpecInfeasibleError("could not build a scale-free graph meeting the spec")


def spec_to_dict(spec) -> dict:
    return asdict(spec)
