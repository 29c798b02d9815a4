"""Study stimulus generators: geographic comparison trials (distance, area,
direction) and network trials (cluster counting, shortest path), all
seed-deterministic with ground truth re-verified before emission.

Difficulty conventions follow the study design: distance pairs differ by the
stated fraction of the larger separation; polygon areas differ by the stated
ratio (larger / smaller = 1 + fraction); miss trajectories pass 40 degrees
off track. The geographic payloads are plain lon/lat so any projection can
render them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .corpus import (
    CLUSTERED_PRESETS,
    SCALE_FREE_PRESETS,
    generate_clustered,
    generate_scale_free,
    modularity,
    spec_to_dict,
)
from .errors import SpecInfeasibleError
from .graphs import Graph, graph_to_json, shortest_path_length
from .layout import Geometry, Layout, SgdSchedule, apply_torus_offset, sgd_layout
from .autopan import PanSearchConfig, auto_pan_sphere, auto_pan_torus
from .projections import ProjectionKind
from .sphere import (
    DEFAULT_HIT_EPSILON,
    GeoPoint,
    geo_to_vec,
    geodesic_interpolate,
    great_circle_distance,
    spherical_polygon_area,
    trajectory_hit_test,
    vec_to_geo,
)

MAX_ATTEMPTS = 10_000

DISTANCE_RATIO = {"easy": 0.10, "hard": 0.05, "attention": 0.40}
AREA_RATIO = {"easy": 0.10, "hard": 0.07, "attention": 0.40}
SEPARATION_BOUNDS_DEG = (40.0, 60.0)
MIN_CROSS_ITEM_SEPARATION_DEG = 60.0
MISS_CROSS_TRACK_DEG = 40.0

# Polygon area bounds: areas of spherical caps whose angular diameters match
# the 40..60 degree separation convention of the distance task.
DEFAULT_AREA_BOUNDS_SR = (
    2.0 * math.pi * (1.0 - math.cos(math.radians(20.0))),
    2.0 * math.pi * (1.0 - math.cos(math.radians(30.0))),
)


@dataclass(frozen=True)
class TrialSpec:
    task: str
    difficulty: str | None
    payload: dict
    ground_truth: Any
    is_attention_check: bool
    seed: int

    def to_json(self) -> dict:
        return {
            "schemaVersion": 1,
            "task": self.task,
            "difficulty": self.difficulty,
            "payload": self.payload,
            "groundTruth": self.ground_truth,
            "isAttentionCheck": self.is_attention_check,
            "seed": self.seed,
        }


def _random_point(rng) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def _tangent_at(rng, v: np.ndarray) -> np.ndarray:
    while True:
        t = rng.normal(size=3)
        t -= np.dot(t, v) * v
        n = np.linalg.norm(t)
        if n > 1e-9:
            return t / n


def _point_at_distance(rng, origin: np.ndarray, dist_rad: float) -> np.ndarray:
    t = _tangent_at(rng, origin)
    return origin * math.cos(dist_rad) + t * math.sin(dist_rad)


def _geo(v: np.ndarray) -> list[float]:
    p = vec_to_geo(v)
    return [p.lon, p.lat]


def generate_distance_trial(difficulty: str, seed: int) -> TrialSpec:
    """Two point pairs whose great-circle separations differ by the exact
    difficulty fraction of the larger; pair midpoints at least 60 deg apart."""
    ratio = DISTANCE_RATIO[difficulty]
    attention = difficulty == "attention"
    rng = np.random.default_rng(seed)
    lo, hi = (math.radians(x) for x in SEPARATION_BOUNDS_DEG)
    for _ in range(MAX_ATTEMPTS):
        # keep the larger separation inside bounds; the smaller one also stays
        # inside for study difficulties (attention checks drop below by design)
        d_large = rng.uniform(max(lo, lo / (1.0 - ratio)) if not attention else lo, hi)
        d_small = d_large * (1.0 - ratio)
        a1 = _random_point(rng)
        a2 = _point_at_distance(rng, a1, d_large)
        b1 = _random_point(rng)
        b2 = _point_at_distance(rng, b1, d_small)
        mid_a = geodesic_interpolate(a1, a2, 0.5)
        mid_b = geodesic_interpolate(b1, b2, 0.5)
        if great_circle_distance(mid_a, mid_b) < math.radians(MIN_CROSS_ITEM_SEPARATION_DEG):
            continue
        larger_is_a = bool(rng.integers(0, 2))
        pair_a, pair_b = ((a1, a2), (b1, b2)) if larger_is_a else ((b1, b2), (a1, a2))
        # closed-loop verification before emission
        da = great_circle_distance(*pair_a)
        db = great_circle_distance(*pair_b)
        big, small = max(da, db), min(da, db)
        assert abs((big - small) / big - ratio) < 1e-9
        if not attention:
            assert lo - 1e-9 <= small and big <= hi + 1e-9
        return TrialSpec(
            task="distance",
            difficulty=None if attention else difficulty,
            payload={
                "pairA": [_geo(pair_a[0]), _geo(pair_a[1])],
                "pairB": [_geo(pair_b[0]), _geo(pair_b[1])],
                "separationDegA": math.degrees(da),
                "separationDegB": math.degrees(db),
            },
            ground_truth="A" if da > db else "B",
            is_attention_check=attention,
            seed=seed,
        )
    raise SpecInfeasibleError("distance trial rejection sampling exhausted")


def _octagon_area(center: np.ndarray, azimuths_sorted: np.ndarray, radius_rad: float, e1, e2) -> float:
    ring = [
        vec_to_geo(center * math.cos(radius_rad) + (e1 * math.cos(a) + e2 * math.sin(a)) * math.sin(radius_rad))
        for a in azimuths_sorted
    ]
    return spherical_polygon_area(ring)


def _octagon_with_area(rng, center: np.ndarray, target_sr: float) -> list[np.ndarray]:
    """Scale a random octagon about its center until its spherical area hits
    the target (bisection on the circumradius)."""
    for _ in range(MAX_ATTEMPTS):
        az = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=8))
        gaps = np.diff(np.concatenate([az, [az[0] + 2.0 * math.pi]]))
        if gaps.min() >= math.radians(12.0):
            break
    else:
        raise SpecInfeasibleError("octagon azimuth sampling exhausted")
    ref = np.array([0.0, 0.0, 1.0]) if abs(center[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = np.cross(center, ref)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(center, e1)
    lo, hi = math.radians(1.0), math.radians(85.0)
    area_fn = lambda rho: _octagon_area(center, az, rho, e1, e2)
    if not (area_fn(lo) <= target_sr <= area_fn(hi)):
        raise SpecInfeasibleError("target polygon area out of reachable range")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if area_fn(mid) < target_sr:
            lo = mid
        else:
            hi = mid
    rho = 0.5 * (lo + hi)
    return [
        center * math.cos(rho) + (e1 * math.cos(a) + e2 * math.sin(a)) * math.sin(rho)
        for a in az
    ]


def generate_area_trial(
    difficulty: str,
    seed: int,
    area_bounds_sr: tuple[float, float] = DEFAULT_AREA_BOUNDS_SR,
) -> TrialSpec:
    """Two convex spherical octagons whose areas differ by the exact
    difficulty ratio; centroids at least 60 deg apart."""
    ratio = AREA_RATIO[difficulty]
    attention = difficulty == "attention"
    rng = np.random.default_rng(seed)
    lo, hi = area_bounds_sr
    for _ in range(MAX_ATTEMPTS):
        area_large = rng.uniform(lo * (1.0 + ratio), hi)
        area_small = area_large / (1.0 + ratio)
        c1 = _random_point(rng)
        c2 = _random_point(rng)
        if great_circle_distance(c1, c2) < math.radians(MIN_CROSS_ITEM_SEPARATION_DEG):
            continue
        poly_large = _octagon_with_area(rng, c1, area_large)
        poly_small = _octagon_with_area(rng, c2, area_small)
        large_is_a = bool(rng.integers(0, 2))
        poly_a, poly_b = (poly_large, poly_small) if large_is_a else (poly_small, poly_large)
        ring_a = [vec_to_geo(v) for v in poly_a]
        ring_b = [vec_to_geo(v) for v in poly_b]
        got_a = spherical_polygon_area(ring_a)
        got_b = spherical_polygon_area(ring_b)
        big, small = max(got_a, got_b), min(got_a, got_b)
        assert abs(big / small - (1.0 + ratio)) < 1e-6
        return TrialSpec(
            task="area",
            difficulty=None if attention else difficulty,
            payload={
                "polygonA": [[p.lon, p.lat] for p in ring_a],
                "polygonB": [[p.lon, p.lat] for p in ring_b],
                "areaSrA": got_a,
                "areaSrB": got_b,
            },
            ground_truth="A" if got_a > got_b else "B",
            is_attention_check=attention,
            seed=seed,
        )
    raise SpecInfeasibleError("area trial rejection sampling exhausted")


def generate_direction_trial(
    seed: int, hit_probability: float = 0.5, attention: bool = False
) -> TrialSpec:
    """Trajectory judgment: dot A, an arrowhead fixing the heading, and dot B
    either on the forward track (hit) or exactly 40 deg off it (miss)."""
    if not 0.0 <= hit_probability <= 1.0:
        raise ValueError("hit probability must be in [0, 1]")
    rng = np.random.default_rng(seed)
    if attention:
        a = np.array(geo_to_vec(GeoPoint(0.0, 0.0)))
        head = np.array(geo_to_vec(GeoPoint(20.0, 0.0)))
        b = np.array(geo_to_vec(GeoPoint(80.0, 0.0)))
        is_hit = True
    else:
        is_hit = bool(rng.random() < hit_probability)
        a = _random_point(rng)
        heading = _tangent_at(rng, a)
        pole = np.cross(a, heading)
        pole /= np.linalg.norm(pole)
        along = math.radians(rng.uniform(62.0, 130.0))
        on_track = a * math.cos(along) + heading * math.sin(along)
        if is_hit:
            b = on_track
        else:
            side = 1.0 if rng.random() < 0.5 else -1.0
            off = math.radians(MISS_CROSS_TRACK_DEG)
            b = on_track * math.cos(off) + side * pole * math.sin(off)
        head_dist = math.radians(rng.uniform(15.0, 35.0))
        head = a * math.cos(head_dist) + heading * math.sin(head_dist)
        if great_circle_distance(a, b) < math.radians(MIN_CROSS_ITEM_SEPARATION_DEG):
            return generate_direction_trial(seed + MAX_ATTEMPTS, hit_probability)
    verdict = trajectory_hit_test(vec_to_geo(a), vec_to_geo(head), vec_to_geo(b), DEFAULT_HIT_EPSILON)
    assert verdict == is_hit
    return TrialSpec(
        task="direction",
        difficulty=None,
        payload={
            "pointA": _geo(a),
            "arrowHead": _geo(head),
            "pointB": _geo(b),
            "hitEpsilonDeg": math.degrees(DEFAULT_HIT_EPSILON),
        },
        ground_truth="hit" if is_hit else "miss",
        is_attention_check=attention,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# Network trials
# ---------------------------------------------------------------------------

def _attention_two_cluster_graph(rng_seed: int) -> Graph:
    """Quality-control stimulus: two obvious communities joined sparsely."""
    rng = np.random.default_rng(rng_seed)
    half = 12
    edges = set()
    for base in (0, half):
        for i in range(half):
            for j in range(i + 1, half):
                if rng.random() < 0.7:
                    edges.add((base + i, base + j))
    for i in range(half):  # ring inside each half keeps it connected
        edges.add((min(i, (i + 1) % half), max(i, (i + 1) % half)))
        edges.add((min(half + i, half + (i + 1) % half), max(half + i, half + (i + 1) % half)))
    edges.add((0, half))
    labels = tuple([0] * half + [1] * half)
    return Graph(2 * half, tuple(sorted(edges)), clusters=labels)


def _layout_with_pan(
    g: Graph,
    geometry: Geometry,
    seed: int,
    projection: ProjectionKind | None,
    pan_samples: int,
) -> tuple[Layout, dict | None]:
    layout = sgd_layout(g, geometry, SgdSchedule(seed=seed))
    pan = None
    if geometry is Geometry.TORUS:
        result = auto_pan_torus(g, layout)
        layout = apply_torus_offset(layout, *result.best_offset)
        pan = result.to_json()
    elif geometry is Geometry.SPHERE:
        kind = projection or ProjectionKind.EQUAL_EARTH
        result = auto_pan_sphere(g, layout, kind, PanSearchConfig(samples=pan_samples, seed=seed))
        pan = result.to_json()
        pan["projection"] = kind.value
    return layout, pan


def _positions_payload(layout: Layout) -> list[list[float]]:
    if layout.geometry is Geometry.SPHERE:
        out = []
        for row in layout.positions:
            p = vec_to_geo(row)
            out.append([p.lon, p.lat])
        return out
    return [[float(a), float(b)] for a, b in layout.positions]


def generate_network_trial(
    task: str,
    corpus_preset: str,
    geometry: Geometry,
    seed: int,
    projection: ProjectionKind | None = None,
    path_length: int | None = None,
    attention: bool = False,
    pan_samples: int = 100,
) -> TrialSpec:
    """Bundle a corpus graph, its layout (auto-panned for wrapping
    geometries) and the task ground truth, re-verified independently."""
    if task == "cluster-count":
        if attention:
            g = _attention_two_cluster_graph(seed)
            spec_dict = {"attention": True}
        else:
            spec = CLUSTERED_PRESETS[corpus_preset]
            g = generate_clustered(spec, seed)
            spec_dict = spec_to_dict(spec)
        truth = len(set(g.clusters))
        if not attention:
            assert 4 <= truth <= 7
            assert abs(modularity(g, g.clusters) - spec.target_modularity) <= spec.modularity_tol
        layout, pan = _layout_with_pan(g, geometry, seed, projection, pan_samples)
        payload = {
            "graph": graph_to_json(g, spec=spec_dict, seed=seed),
            "layout": {"geometry": geometry.value, "positions": _positions_payload(layout)},
            "pan": pan,
        }
        difficulty = None if attention else ("easy" if "easy" in corpus_preset else "hard")
        return TrialSpec("cluster-count", difficulty, payload, truth, attention, seed)

    if task == "shortest-path":
        spec = SCALE_FREE_PRESETS[corpus_preset]
        rng = np.random.default_rng(seed)
        for round_idx in range(50):
            g = generate_scale_free(spec, seed + round_idx * 1009)
            n = g.node_count
            if attention:
                wanted = 2
            elif path_length is not None:
                wanted = path_length
            else:
                wanted = int(rng.integers(1, 5))
            found = None
            for _ in range(MAX_ATTEMPTS):
                s = int(rng.integers(0, n))
                t = int(rng.integers(0, n))
                if s == t:
                    continue
                if shortest_path_length(g, s, t) == wanted:
                    found = (s, t)
                    break
            if found:
                break
        if not found:
            raise SpecInfeasibleError(f"no node pair at distance {wanted}")
        truth = shortest_path_length(g, *found)
        assert 1 <= truth <= 4
        layout, pan = _layout_with_pan(g, geometry, seed, projection, pan_samples)
        payload = {
            "graph": graph_to_json(g, spec=spec_to_dict(spec), seed=seed),
            "layout": {"geometry": geometry.value, "positions": _positions_payload(layout)},
            "pan": pan,
            "highlightNodes": list(found),
        }
        if attention:
            path_nodes = _bfs_path(g, *found)
            payload["highlightEdges"] = [
                sorted((path_nodes[k], path_nodes[k + 1])) for k in range(len(path_nodes) - 1)
            ]
        difficulty = "easy" if "easy" in corpus_preset else "hard"
        return TrialSpec("shortest-path", None if attention else difficulty, payload, truth, attention, seed)

    raise ValueError(f"unknown network task {task!r}")


def _bfs_path(g: Graph, s: int, t: int) -> list[int]:
    from collections import deque

    from .graphs import adjacency

    adj = adjacency(g)
    prev = {s: None}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        if u == t:
            break
        for v in adj[u]:
            if v not in prev:
                prev[v] = u
                queue.append(v)
    path = [t]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


# ---------------------------------------------------------------------------
# Batches and ordering
# ---------------------------------------------------------------------------

def williams_orders(n: int) -> list[list[int]]:
    """Williams Latin-square orderings balanced for first-order carryover:
    n sequences for even n, 2n for odd n."""
    base = []
    left, right = 0, n - 1
    toggle = True
    for _ in range(n):
        base.append(left if toggle else right)
        if toggle:
            left += 1
        else:
            right -= 1
        toggle = not toggle
    rows = [[(x + k) % n for x in base] for k in range(n)]
    if n % 2 == 1:
        rows += [list(reversed(r)) for r in rows]
    return rows
