import math

import numpy as np
import pytest

from wrapmap.autopan import (
    EqualEarthPanScorer,
    PanResult,
    PanSearchConfig,
    auto_pan_sphere,
    auto_pan_torus,
    equal_earth_boundary_penalty,
    equal_earth_masks,
    equal_earth_pixel_counts,
    orthographic_crossing_count,
    sample_rotations,
    torus_wrapped_edge_count,
)
from wrapmap.graphs import Graph
from wrapmap.layout import Geometry, Layout, apply_torus_offset
from wrapmap.projections import ProjectionKind, ProjectionSpec, project
from wrapmap.sphere import GeoPoint, RotationTriple, geo_to_vec, vec_to_geo

CFG_SMALL = PanSearchConfig(samples=30, seed=5, raster_width=300, raster_height=106)


def ring_graph(n):
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def sphere_layout_from_geo(points):
    return Layout(Geometry.SPHERE, np.array([geo_to_vec(p) for p in points]))


def test_crossing_count_zero_when_clustered():
    pts = [GeoPoint(-90 + lon, lat) for lon, lat in [(-20, 0), (-10, 5), (0, -5), (10, 0)]]
    g = ring_graph(4)
    layout = sphere_layout_from_geo(pts)
    assert orthographic_crossing_count(g, layout, RotationTriple()) == 0


def test_crossing_count_antipodal_edge_always_crosses():
    g = Graph(2, ((0, 1),))
    layout = Layout(Geometry.SPHERE, np.array([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]]))
    rng = np.random.default_rng(5)
    for _ in range(50):
        r = RotationTriple(*rng.uniform(-180, 180, size=3))
        assert orthographic_crossing_count(g, layout, r) == 1


def test_crossing_count_matches_per_edge_projection_recheck():
    rng = np.random.default_rng(7)
    n = 24
    g = Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n) if (i + j) % 3 == 0))
    pos = rng.normal(size=(n, 3))
    pos /= np.linalg.norm(pos, axis=1)[:, None]
    layout = Layout(Geometry.SPHERE, pos)
    spec_canvas = ProjectionSpec(ProjectionKind.ORTHOGRAPHIC_HEMISPHERE, 700, 350)
    for _ in range(10):
        r = RotationTriple(*rng.uniform(-180, 180, size=3))
        spec = ProjectionSpec(spec_canvas.kind, 700, 350, r)
        manual = 0
        for i, j in g.edges:
            fi = project(spec, vec_to_geo(pos[i])).face
            fj = project(spec, vec_to_geo(pos[j])).face
            manual += fi is not fj
        assert orthographic_crossing_count(g, layout, r) == manual


def test_crossing_count_invariant_under_face_relabel():
    rng = np.random.default_rng(11)
    n = 16
    g = ring_graph(n)
    pos = rng.normal(size=(n, 3))
    pos /= np.linalg.norm(pos, axis=1)[:, None]
    layout = Layout(Geometry.SPHERE, pos)
    from wrapmap.sphere import rotation_matrix

    for _ in range(10):
        r = RotationTriple(*rng.uniform(-180, 180, size=3))
        ours = orthographic_crossing_count(g, layout, r)
        east = (pos @ rotation_matrix(r).T[:, 1]) >= 0.0  # swapped predicate
        manual = sum(bool(east[i] != east[j]) for i, j in g.edges)
        assert ours == manual


def test_equal_earth_penalty_empty_and_centered():
    g = Graph(2, ())
    layout = Layout(Geometry.SPHERE, np.array([[1.0, 0, 0], [0.99, 0.141, 0]]) / 1.0)
    assert equal_earth_boundary_penalty(g, layout, RotationTriple(), CFG_SMALL) == 0
    g2 = Graph(2, ((0, 1),))
    a = geo_to_vec(GeoPoint(-3, 0))
    b = geo_to_vec(GeoPoint(3, 0))
    layout2 = Layout(Geometry.SPHERE, np.array([a, b]))
    band, interior = equal_earth_pixel_counts(g2, layout2, RotationTriple(), CFG_SMALL)
    assert band == 0
    assert interior > 0


def test_equal_earth_penalty_matches_pixel_recount():
    rng = np.random.default_rng(13)
    n = 12
    g = ring_graph(n)
    pos = rng.normal(size=(n, 3))
    pos /= np.linalg.norm(pos, axis=1)[:, None]
    layout = Layout(Geometry.SPHERE, pos)
    scorer = EqualEarthPanScorer(g, layout, CFG_SMALL)
    band_mask, interior_mask = equal_earth_masks(
        CFG_SMALL.raster_width, CFG_SMALL.raster_height, CFG_SMALL.mask_band_pct
    )
    for _ in range(5):
        r = RotationTriple(*rng.uniform(-180, 180, size=3))
        bitmap = scorer.bitmap(r)
        recount_band = 0
        recount_interior = 0
        h, w = bitmap.shape
        for yy in range(h):
            for xx in range(w):
                if bitmap[yy, xx]:
                    if band_mask[yy, xx]:
                        recount_band += 1
                    elif interior_mask[yy, xx]:
                        recount_interior += 1
        band, interior = scorer.counts(r)
        assert band == recount_band
        assert interior == recount_interior


def test_equal_earth_band_monotone_in_width():
    rng = np.random.default_rng(17)
    n = 10
    g = ring_graph(n)
    pos = rng.normal(size=(n, 3))
    pos /= np.linalg.norm(pos, axis=1)[:, None]
    layout = Layout(Geometry.SPHERE, pos)
    r = RotationTriple(40, 20, -30)
    widths = [1.0, 2.0, 4.0, 8.0, 16.0]
    counts = [
        equal_earth_boundary_penalty(
            g, layout, r, PanSearchConfig(samples=1, raster_width=300, raster_height=106, mask_band_pct=wd)
        )
        for wd in widths
    ]
    assert counts == sorted(counts)


def test_auto_pan_sphere_single_sample_is_identity():
    g = ring_graph(8)
    rng = np.random.default_rng(19)
    pos = rng.normal(size=(8, 3))
    pos /= np.linalg.norm(pos, axis=1)[:, None]
    layout = Layout(Geometry.SPHERE, pos)
    res = auto_pan_sphere(g, layout, ProjectionKind.ORTHOGRAPHIC_HEMISPHERE, PanSearchConfig(samples=1))
    assert res.best_rotation.is_identity()
    assert res.best_score == res.identity_score


def test_auto_pan_sphere_best_not_above_identity_and_deterministic():
    g = ring_graph(12)
    rng = np.random.default_rng(23)
    pos = rng.normal(size=(12, 3))
    pos /= np.linalg.norm(pos, axis=1)[:, None]
    layout = Layout(Geometry.SPHERE, pos)
    cfg = PanSearchConfig(samples=40, seed=3, raster_width=300, raster_height=106)
    a = auto_pan_sphere(g, layout, ProjectionKind.ORTHOGRAPHIC_HEMISPHERE, cfg)
    b = auto_pan_sphere(g, layout, ProjectionKind.ORTHOGRAPHIC_HEMISPHERE, cfg)
    assert a == b
    assert a.best_score <= a.identity_score
    ee = auto_pan_sphere(g, layout, ProjectionKind.EQUAL_EARTH, cfg)
    assert ee.best_score <= ee.identity_score


def test_auto_pan_more_samples_never_worse():
    g = ring_graph(10)
    rng = np.random.default_rng(29)
    pos = rng.normal(size=(10, 3))
    pos /= np.linalg.norm(pos, axis=1)[:, None]
    layout = Layout(Geometry.SPHERE, pos)
    few = auto_pan_sphere(g, layout, ProjectionKind.ORTHOGRAPHIC_HEMISPHERE, PanSearchConfig(samples=20, seed=9))
    many = auto_pan_sphere(g, layout, ProjectionKind.ORTHOGRAPHIC_HEMISPHERE, PanSearchConfig(samples=40, seed=9))
    assert many.best_score <= few.best_score


def test_sample_rotations_prefix_property():
    assert sample_rotations(20, 7) == sample_rotations(40, 7)[:20]
    assert sample_rotations(5, 7)[0].is_identity()


def test_auto_pan_torus_clustered_layout_unwraps():
    rng = np.random.default_rng(31)
    n = 15
    g = ring_graph(n)
    pos = 0.4 + 0.2 * rng.random((n, 2))
    pos[0] = [0.01, 0.5]  # drag one node across the seam
    pos[1] = [0.99, 0.5]
    layout = Layout(Geometry.TORUS, np.mod(pos, 1.0))
    res = auto_pan_torus(g, layout)
    assert res.best_score <= res.identity_score
    panned = apply_torus_offset(layout, *res.best_offset)
    assert ((panned.positions >= 0) & (panned.positions < 1)).all()
    assert torus_wrapped_edge_count(g, panned) == res.best_score


def test_auto_pan_torus_fully_clustered_reaches_zero():
    rng = np.random.default_rng(37)
    n = 12
    g = ring_graph(n)
    layout = Layout(Geometry.TORUS, 0.4 + 0.2 * rng.random((n, 2)))
    res = auto_pan_torus(g, layout)
    assert res.best_score == 0


def _dense_axis_minimum(g, layout, axis, steps=256):
    best = math.inf
    for k in range(steps):
        shift = [0.0, 0.0]
        shift[axis] = k / steps
        coords = apply_torus_offset(layout, *shift).positions[:, axis]
        wraps = sum(bool(abs(coords[j] - coords[i]) > 0.5) for i, j in g.edges)
        best = min(best, wraps)
    return best


def _our_axis_count(g, layout, axis, offset):
    shift = [0.0, 0.0]
    shift[axis] = offset
    coords = apply_torus_offset(layout, *shift).positions[:, axis]
    return sum(bool(abs(coords[j] - coords[i]) > 0.5) for i, j in g.edges)


def test_auto_pan_torus_matches_dense_offset_oracle():
    # Coordinates on a jittered grid keep every count interval wider than
    # 1/256, so the dense oracle sees every achievable count.
    rng = np.random.default_rng(41)
    n = 16
    edges = set()
    while len(edges) < 40:
        a, b = rng.integers(0, n, size=2)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    g = Graph(n, tuple(sorted(edges)))
    coords = np.stack(
        [
            (rng.permutation(n) + rng.uniform(0.2, 0.8, size=n)) / n,
            (rng.permutation(n) + rng.uniform(0.2, 0.8, size=n)) / n,
        ],
        axis=1,
    )
    layout = Layout(Geometry.TORUS, coords)
    res = auto_pan_torus(g, layout)
    for axis, offset in ((0, res.best_offset[0]), (1, res.best_offset[1])):
        assert _our_axis_count(g, layout, axis, offset) == _dense_axis_minimum(g, layout, axis)


def test_auto_pan_torus_never_worse_than_dense_oracle():
    rng = np.random.default_rng(43)
    n = 30
    edges = set()
    while len(edges) < 60:
        a, b = rng.integers(0, n, size=2)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    g = Graph(n, tuple(sorted(edges)))
    layout = Layout(Geometry.TORUS, rng.random((n, 2)))
    res = auto_pan_torus(g, layout)
    for axis, offset in ((0, res.best_offset[0]), (1, res.best_offset[1])):
        assert _our_axis_count(g, layout, axis, offset) <= _dense_axis_minimum(g, layout, axis)
