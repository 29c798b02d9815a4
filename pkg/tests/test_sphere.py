import math

import numpy as np
import pytest

from wrapmap.errors import AntipodalPairError, DegeneratePolygonError
from wrapmap.sphere import (
    GeoPoint,
    RotationTriple,
    apply_rotation,
    compose_rotations,
    cross_track_distance,
    geo_to_vec,
    geodesic_interpolate,
    great_circle_distance,
    inverse_rotation,
    normalize_lon,
    rotation_from_matrix,
    rotation_matrix,
    spherical_polygon_area,
    trajectory_hit_test,
    vec_to_geo,
)


def random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def test_normalize_lon_range():
    for lon in [-180, 180, 540, -540, 0, 179.999, -359.5]:
        w = normalize_lon(lon)
        assert -180.0 <= w < 180.0
    assert normalize_lon(540.0) == -180.0
    assert normalize_lon(190.0) == -170.0


def test_geopoint_invariants():
    p = GeoPoint(270.0, 95.0)
    assert p.lon == -90.0
    assert p.lat == 90.0


def test_geo_to_vec_axes():
    assert np.allclose(geo_to_vec(GeoPoint(0, 0)), [1, 0, 0])
    assert np.allclose(geo_to_vec(GeoPoint(0, 90)), [0, 0, 1])
    assert np.allclose(geo_to_vec(GeoPoint(90, 0)), [0, 1, 0])


def test_vec_to_geo_trivials():
    p = vec_to_geo(np.array([1.0, 0.0, 0.0]))
    assert p.lon == 0.0 and p.lat == 0.0
    south = vec_to_geo(np.array([0.0, 0.0, -1.0]))
    assert south.lon == 0.0 and south.lat == -90.0


def test_geo_vec_round_trip():
    p = GeoPoint(123.4, -56.7)
    q = vec_to_geo(geo_to_vec(p))
    assert abs(q.lon - p.lon) < 1e-9
    assert abs(q.lat - p.lat) < 1e-9


def test_vec_geo_round_trip_property():
    rng = np.random.default_rng(7)
    for _ in range(500):
        v = random_unit(rng)
        w = geo_to_vec(vec_to_geo(v))
        assert np.linalg.norm(w - v) < 1e-9


def test_great_circle_distance_trivials():
    a = geo_to_vec(GeoPoint(0, 0))
    b = geo_to_vec(GeoPoint(90, 0))
    assert great_circle_distance(a, a) == 0.0
    assert abs(great_circle_distance(a, -a) - math.pi) < 1e-12
    assert abs(great_circle_distance(a, b) - math.pi / 2) < 1e-12


def test_great_circle_distance_clamps_near_boundary():
    a = np.array([1.0, 0.0, 0.0])
    b = np.array([1.0, 1e-16, 0.0])
    d = great_circle_distance(a, b / np.linalg.norm(b))
    assert not math.isnan(d)
    d2 = great_circle_distance(a, -(b / np.linalg.norm(b)))
    assert not math.isnan(d2)


def test_distance_is_a_metric():
    rng = np.random.default_rng(11)
    for _ in range(200):
        a, b, c = (random_unit(rng) for _ in range(3))
        dab = great_circle_distance(a, b)
        dba = great_circle_distance(b, a)
        assert abs(dab - dba) < 1e-9
        assert great_circle_distance(a, a) < 1e-9
        assert dab <= great_circle_distance(a, c) + great_circle_distance(c, b) + 1e-9


def test_rotation_identity():
    rng = np.random.default_rng(3)
    v = random_unit(rng)
    assert np.allclose(apply_rotation(RotationTriple(0, 0, 0), v), v)


def test_rotation_sign_convention_regression():
    # Pinned convention: lam rotation adds to longitude, (0, 90, 0) lifts the
    # origin to the north pole.
    out = vec_to_geo(apply_rotation(RotationTriple(90, 0, 0), geo_to_vec(GeoPoint(0, 0))))
    assert abs(out.lon - 90.0) < 1e-9
    assert abs(out.lat) < 1e-9
    pole = vec_to_geo(apply_rotation(RotationTriple(0, 90, 0), geo_to_vec(GeoPoint(0, 0))))
    assert abs(pole.lat - 90.0) < 1e-9


def test_rotation_matches_explicit_matrix_product():
    # Oracle: build the same rotation from axis-aligned matrices.
    def rz(t):
        c, s = math.cos(t), math.sin(t)
        return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])

    def ry(t):
        c, s = math.cos(t), math.sin(t)
        return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])

    def rx(t):
        c, s = math.cos(t), math.sin(t)
        return np.array([[1, 0, 0], [0, c, -s], [0, s, c]])

    rng = np.random.default_rng(5)
    for _ in range(50):
        lam, phi, gam = rng.uniform(-180, 180, size=3)
        r = RotationTriple(lam, phi, gam)
        m = rx(math.radians(gam)) @ ry(-math.radians(phi)) @ rz(math.radians(lam))
        assert np.allclose(rotation_matrix(r), m, atol=1e-12)


def test_rotation_isometry():
    rng = np.random.default_rng(13)
    for _ in range(100):
        r = RotationTriple(*rng.uniform(-180, 180, size=3))
        a, b = random_unit(rng), random_unit(rng)
        d0 = great_circle_distance(a, b)
        d1 = great_circle_distance(apply_rotation(r, a), apply_rotation(r, b))
        assert abs(d0 - d1) < 1e-9


def test_rotation_composition_matches_matrix_product():
    rng = np.random.default_rng(17)
    for _ in range(100):
        r1 = RotationTriple(*rng.uniform(-180, 180, size=3))
        r2 = RotationTriple(*rng.uniform(-180, 180, size=3))
        c = compose_rotations(r1, r2)
        assert np.allclose(rotation_matrix(c), rotation_matrix(r1) @ rotation_matrix(r2), atol=1e-9)


def test_rotation_matrix_round_trip():
    rng = np.random.default_rng(19)
    for _ in range(200):
        r = RotationTriple(*rng.uniform(-180, 180, size=3))
        m = rotation_matrix(r)
        assert np.allclose(rotation_matrix(rotation_from_matrix(m)), m, atol=1e-9)
    inv = inverse_rotation(RotationTriple(30, 40, 50))
    assert np.allclose(rotation_matrix(inv) @ rotation_matrix(RotationTriple(30, 40, 50)), np.eye(3), atol=1e-12)


def test_geodesic_interpolate_endpoints_and_midpoint():
    a = geo_to_vec(GeoPoint(0, 0))
    b = geo_to_vec(GeoPoint(90, 0))
    assert np.allclose(geodesic_interpolate(a, b, 0.0), a)
    assert np.allclose(geodesic_interpolate(a, b, 1.0), b)
    mid = vec_to_geo(geodesic_interpolate(a, b, 0.5))
    assert abs(mid.lon - 45.0) < 1e-9
    assert abs(mid.lat) < 1e-9


def test_geodesic_interpolate_norm_property():
    rng = np.random.default_rng(23)
    for _ in range(200):
        a, b = random_unit(rng), random_unit(rng)
        if np.dot(a, b) <= -1 + 1e-9:
            continue
        t = rng.random()
        v = geodesic_interpolate(a, b, t)
        assert abs(np.linalg.norm(v) - 1.0) < 1e-9


def test_geodesic_interpolate_antipodal_rejected():
    a = np.array([1.0, 0.0, 0.0])
    with pytest.raises(AntipodalPairError):
        geodesic_interpolate(a, -a, 0.5)


def test_polygon_area_octant():
    tri = [GeoPoint(0, 0), GeoPoint(90, 0), GeoPoint(0, 90)]
    assert abs(spherical_polygon_area(tri) - math.pi / 2) < 1e-9


def test_polygon_area_hemisphere_boundary():
    ring = [GeoPoint(0, 0), GeoPoint(90, 0), GeoPoint(180, 0), GeoPoint(-90, 0)]
    assert abs(spherical_polygon_area(ring) - 2 * math.pi) < 1e-9


def test_polygon_area_mirror_invariance():
    rng = np.random.default_rng(29)
    ring = _random_convex_octagon(rng)
    mirrored = [GeoPoint(-p.lon, p.lat) for p in ring]
    assert abs(spherical_polygon_area(ring) - spherical_polygon_area(mirrored)) < 1e-9
    assert abs(spherical_polygon_area(ring) - spherical_polygon_area(list(reversed(ring)))) < 1e-9


def test_polygon_degenerate_errors():
    with pytest.raises(DegeneratePolygonError):
        spherical_polygon_area([GeoPoint(0, 0), GeoPoint(10, 0)])
    with pytest.raises(DegeneratePolygonError):
        spherical_polygon_area([GeoPoint(0, 0), GeoPoint(0, 0), GeoPoint(10, 10)])


def _random_convex_octagon(rng, radius_deg=25.0):
    center = random_unit(rng)
    ref = np.array([0.0, 0.0, 1.0]) if abs(center[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = np.cross(center, ref)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(center, e1)
    az = np.sort(rng.uniform(0, 2 * math.pi, size=8))
    if np.min(np.diff(np.concatenate([az, [az[0] + 2 * math.pi]]))) < math.radians(10):
        return _random_convex_octagon(rng, radius_deg)
    rho = math.radians(radius_deg)
    ring = []
    for a in az:
        v = center * math.cos(rho) + (e1 * math.cos(a) + e2 * math.sin(a)) * math.sin(rho)
        ring.append(vec_to_geo(v))
    return ring


def _point_in_convex_polygon(vecs, pts):
    # Independent containment test: consistent sign against each edge plane.
    n = len(vecs)
    inside = np.ones(len(pts), dtype=bool)
    orient = np.dot(np.cross(vecs[0], vecs[1]), np.mean(vecs, axis=0))
    sign = 1.0 if orient > 0 else -1.0
    for i in range(n):
        plane = np.cross(vecs[i], vecs[(i + 1) % n]) * sign
        inside &= pts @ plane >= 0.0
    return inside


def test_polygon_area_monte_carlo_oracle():
    # 1e6 samples drawn from the bounding cap; frozen seed keeps it exact.
    rng = np.random.default_rng(31)
    for _ in range(3):
        ring = _random_convex_octagon(rng)
        vecs = np.array([geo_to_vec(p) for p in ring])
        center = vecs.mean(axis=0)
        center /= np.linalg.norm(center)
        cap = max(math.acos(np.clip(vecs @ center, -1, 1).min()) for _ in [0]) + 0.05
        n_samples = 1_000_000
        z = rng.uniform(math.cos(cap), 1.0, size=n_samples)
        theta = rng.uniform(0, 2 * math.pi, size=n_samples)
        s = np.sqrt(1 - z**2)
        ref = np.array([0.0, 0.0, 1.0]) if abs(center[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
        e1 = np.cross(center, ref)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(center, e1)
        pts = (
            center[None, :] * z[:, None]
            + e1[None, :] * (s * np.cos(theta))[:, None]
            + e2[None, :] * (s * np.sin(theta))[:, None]
        )
        cap_area = 2 * math.pi * (1 - math.cos(cap))
        frac = _point_in_convex_polygon(list(vecs), pts).mean()
        mc_area = frac * cap_area
        area = spherical_polygon_area(ring)
        assert abs(area - mc_area) / area < 0.01


def test_trajectory_hit_on_arc():
    a = GeoPoint(0, 0)
    head = GeoPoint(30, 0)
    b = GeoPoint(20, 0)
    assert trajectory_hit_test(a, head, b) is True


def test_trajectory_miss_forty_degrees():
    a = GeoPoint(0, 0)
    head = GeoPoint(30, 0)
    b = GeoPoint(60, 40)  # roughly 40 deg off the equator track
    va, vh = geo_to_vec(a), geo_to_vec(head)
    pole = np.cross(va, vh)
    pole /= np.linalg.norm(pole)
    along = geo_to_vec(GeoPoint(70, 0))
    off = along * math.cos(math.radians(40)) + pole * math.sin(math.radians(40))
    b = vec_to_geo(off)
    assert abs(abs(cross_track_distance(va, vh, geo_to_vec(b))) - math.radians(40)) < 1e-9
    assert trajectory_hit_test(a, head, b, epsilon=math.radians(1.0)) is False


def test_trajectory_degenerate_inputs():
    with pytest.raises(AntipodalPairError):
        trajectory_hit_test(GeoPoint(0, 0), GeoPoint(0, 0), GeoPoint(10, 10))
    with pytest.raises(AntipodalPairError):
        trajectory_hit_test(GeoPoint(0, 0), GeoPoint(-180, 0), GeoPoint(10, 10))


def test_trajectory_agrees_with_dense_sampling():
    # Oracle: walk the forward great circle in 0.1 degree steps and look for
    # any sample within epsilon of b. Trials are kept away from the decision
    # boundary so discretization cannot flip the answer.
    rng = np.random.default_rng(37)
    eps = math.radians(1.0)
    checked = 0
    while checked < 120:
        a = random_unit(rng)
        h = random_unit(rng)
        if abs(np.dot(a, h)) > 0.999:
            continue
        b = random_unit(rng)
        pole = np.cross(a, h)
        pole /= np.linalg.norm(pole)
        cross = abs(math.asin(np.clip(np.dot(pole, b), -1, 1)))
        if abs(cross - eps) < math.radians(0.3):
            continue
        proj = b - np.dot(pole, b) * pole
        if np.linalg.norm(proj) < 1e-9:
            continue
        proj /= np.linalg.norm(proj)
        along = math.atan2(np.dot(np.cross(a, proj), pole), np.clip(np.dot(a, proj), -1, 1))
        if cross <= eps and not (math.radians(5) <= along <= math.radians(175)):
            continue  # borderline forward/backward, excluded by construction
        ts = np.radians(np.arange(0.0, 180.0 + 1e-9, 0.1))
        circle = a[None, :] * np.cos(ts)[:, None] + np.cross(pole, a)[None, :] * np.sin(ts)[:, None]
        dmin = np.arccos(np.clip(circle @ b, -1, 1)).min()
        expected = bool(dmin <= eps)
        got = trajectory_hit_test(vec_to_geo(a), vec_to_geo(h), vec_to_geo(b), epsilon=eps)
        assert got == expected
        checked += 1
