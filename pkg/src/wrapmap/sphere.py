"""Unit-sphere geometry: geographic/Cartesian conversion, great-circle
distances, three-axis rotations, geodesic interpolation, polygon areas and
trajectory hit testing.

Conventions:
  * longitude/latitude in degrees, lon wrapped to [-180, 180), lat in [-90, 90]
  * (lon, lat) = (0, 0) maps to the +x axis, the north pole to +z
  * a rotation triple (lam, phi, gam) acts as Rx(gam) @ Ry(-phi) @ Rz(lam),
    so (90, 0, 0) moves the point at lon 0 to lon +90 (the convention used
    by interactive globe viewers; pinned by a regression test)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AntipodalPairError, DegeneratePolygonError

DEFAULT_HIT_EPSILON = math.radians(1.0)

_COINCIDENT_TOL = 1e-12


def normalize_lon(lon: float) -> float:
    """Wrap a longitude (or any angle) in degrees into [-180, 180)."""
    lon = math.fmod(lon + 180.0, 360.0)
    if lon < 0.0:
        lon += 360.0
    return lon - 180.0


def clamp(x: float, lo: float = -1.0, hi: float = 1.0) -> float:
    return lo if x < lo else hi if x > hi else x


@dataclass(frozen=True)
class GeoPoint:
    """Geographic point in degrees; lon normalized, lat clamped on construction."""

    lon: float
    lat: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "lon", normalize_lon(float(self.lon)))
        object.__setattr__(self, "lat", clamp(float(self.lat), -90.0, 90.0))


@dataclass(frozen=True)
class RotationTriple:
    """Three-axis rotation (lam, phi, gam) in degrees, each wrapped to [-180, 180)."""

    lam: float = 0.0
    phi: float = 0.0
    gam: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "lam", normalize_lon(float(self.lam)))
        object.__setattr__(self, "phi", normalize_lon(float(self.phi)))
        object.__setattr__(self, "gam", normalize_lon(float(self.gam)))

    def is_identity(self) -> bool:
        return self.lam == 0.0 and self.phi == 0.0 and self.gam == 0.0


def unit(v: np.ndarray) -> np.ndarray:
    """Normalize a vector to unit length."""
    n = math.sqrt(float(v[0]) ** 2 + float(v[1]) ** 2 + float(v[2]) ** 2)
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return np.asarray(v, dtype=float) / n


def geo_to_vec(p: GeoPoint) -> np.ndarray:
    """Unit vector for a geographic point."""
    lon = math.radians(p.lon)
    lat = math.radians(p.lat)
    cl = math.cos(lat)
    return np.array([cl * math.cos(lon), cl * math.sin(lon), math.sin(lat)])


def vec_to_geo(v: np.ndarray) -> GeoPoint:
    """Geographic point for a unit vector; at the poles lon is fixed to 0."""
    x, y, z = float(v[0]), float(v[1]), float(v[2])
    lat = math.degrees(math.asin(clamp(z)))
    if x == 0.0 and y == 0.0:
        return GeoPoint(0.0, lat)
    return GeoPoint(math.degrees(math.atan2(y, x)), lat)


def great_circle_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Arc length in radians between two unit vectors, in [0, pi].

    Same value as arccos of the clamped dot product, but computed as
    atan2(|a x b|, a . b), which never returns NaN and stays accurate for
    nearly coincident and nearly antipodal inputs.
    """
    d = clamp(float(a[0]) * float(b[0]) + float(a[1]) * float(b[1]) + float(a[2]) * float(b[2]))
    cx = float(a[1]) * float(b[2]) - float(a[2]) * float(b[1])
    cy = float(a[2]) * float(b[0]) - float(a[0]) * float(b[2])
    cz = float(a[0]) * float(b[1]) - float(a[1]) * float(b[0])
    return math.atan2(math.sqrt(cx * cx + cy * cy + cz * cz), d)


def rotation_matrix(r: RotationTriple) -> np.ndarray:
    """3x3 matrix for a rotation triple: Rx(gam) @ Ry(-phi) @ Rz(lam)."""
    cl, sl = math.cos(math.radians(r.lam)), math.sin(math.radians(r.lam))
    cp, sp = math.cos(math.radians(r.phi)), math.sin(math.radians(r.phi))
    cg, sg = math.cos(math.radians(r.gam)), math.sin(math.radians(r.gam))
    return np.array(
        [
            [cp * cl, -cp * sl, -sp],
            [cg * sl - sg * sp * cl, cg * cl + sg * sp * sl, -sg * cp],
            [sg * sl + cg * sp * cl, sg * cl - cg * sp * sl, cg * cp],
        ]
    )


def rotation_from_matrix(m: np.ndarray) -> RotationTriple:
    """Recover the (lam, phi, gam) triple from a rotation matrix.

    At the gimbal-lock latitudes (|phi| = 90) gam is fixed to 0 and the
    remaining freedom folded into lam.
    """
    sp = clamp(-float(m[0][2]))
    phi = math.degrees(math.asin(sp))
    cp = math.cos(math.radians(phi))
    if cp > 1e-12:
        lam = math.degrees(math.atan2(-float(m[0][1]), float(m[0][0])))
        gam = math.degrees(math.atan2(-float(m[1][2]), float(m[2][2])))
    else:
        lam = math.degrees(math.atan2(float(m[1][0]), float(m[1][1])))
        gam = 0.0
    return RotationTriple(lam, phi, gam)


def apply_rotation(r: RotationTriple, v: np.ndarray) -> np.ndarray:
    """Rotate a unit vector by a rotation triple."""
    return rotation_matrix(r) @ np.asarray(v, dtype=float)


def compose_rotations(outer: RotationTriple, inner: RotationTriple) -> RotationTriple:
    """Triple equivalent to applying `inner` first, then `outer`."""
    return rotation_from_matrix(rotation_matrix(outer) @ rotation_matrix(inner))


def inverse_rotation(r: RotationTriple) -> RotationTriple:
    return rotation_from_matrix(rotation_matrix(r).T)


def geodesic_interpolate(a: np.ndarray, b: np.ndarray, t: float) -> np.ndarray:
    """Point at fraction t along the minor great-circle arc from a to b.

    Raises AntipodalPairError when a and b are antipodal (no unique arc).
    """
    d = clamp(float(np.dot(a, b)))
    if d <= -1.0 + _COINCIDENT_TOL:
        raise AntipodalPairError("antipodal endpoints have no unique geodesic")
    omega = math.acos(d)
    if omega < 1e-12:
        return np.asarray(a, dtype=float).copy()
    s = math.sin(omega)
    w = (math.sin((1.0 - t) * omega) * np.asarray(a) + math.sin(t * omega) * np.asarray(b)) / s
    return unit(w)


def _tangent_toward(at: np.ndarray, toward: np.ndarray) -> np.ndarray:
    """Unit tangent at `at` pointing along the arc toward `toward`."""
    w = np.asarray(toward, dtype=float) - float(np.dot(at, toward)) * np.asarray(at, dtype=float)
    n = float(np.linalg.norm(w))
    if n < _COINCIDENT_TOL:
        raise DegeneratePolygonError("coincident or antipodal neighbouring vertices")
    return w / n


def spherical_polygon_area(vertices: list[GeoPoint]) -> float:
    """Area in steradians of a simple spherical polygon (great-circle edges)
    via the spherical excess: sum of interior angles minus (n - 2) * pi.

    Vertices are an open ring (the closing edge is implicit), traversed in
    either orientation. Raises DegeneratePolygonError for rings with fewer
    than 3 vertices or coincident consecutive vertices.
    """
    n = len(vertices)
    if n < 3:
        raise DegeneratePolygonError("a spherical polygon needs at least 3 vertices")
    vecs = [geo_to_vec(p) for p in vertices]
    for i in range(n):
        if great_circle_distance(vecs[i], vecs[(i + 1) % n]) < 1e-9:
            raise DegeneratePolygonError("consecutive vertices coincide")
    total = 0.0
    for i in range(n):
        prev_v = vecs[(i - 1) % n]
        next_v = vecs[(i + 1) % n]
        tp = _tangent_toward(vecs[i], prev_v)
        tn = _tangent_toward(vecs[i], next_v)
        total += math.acos(clamp(float(np.dot(tp, tn))))
    return abs(total - (n - 2) * math.pi)


def cross_track_distance(a: np.ndarray, heading: np.ndarray, b: np.ndarray) -> float:
    """Signed angular distance (radians) from b to the great circle through
    a and heading; positive on the side of the circle's pole a x heading."""
    pole = np.cross(a, heading)
    norm = float(np.linalg.norm(pole))
    if norm < _COINCIDENT_TOL:
        raise AntipodalPairError("trajectory direction undefined for (anti)parallel points")
    pole = pole / norm
    return math.asin(clamp(float(np.dot(pole, b))))


def trajectory_hit_test(
    a: GeoPoint,
    arrow_head: GeoPoint,
    b: GeoPoint,
    epsilon: float = DEFAULT_HIT_EPSILON,
) -> bool:
    """Whether the great-circle trajectory from a through arrow_head,
    continued forward from a, passes within `epsilon` radians of b.

    Forward means b's along-track position lies in [0, pi] (ahead of a).
    """
    va, vh, vb = geo_to_vec(a), geo_to_vec(arrow_head), geo_to_vec(b)
    pole = np.cross(va, vh)
    norm = float(np.linalg.norm(pole))
    if norm < _COINCIDENT_TOL:
        raise AntipodalPairError("trajectory direction undefined for (anti)parallel points")
    pole = pole / norm
    cross = math.asin(clamp(float(np.dot(pole, vb))))
    if abs(cross) > epsilon:
        return False
    proj = vb - float(np.dot(pole, vb)) * pole
    pn = float(np.linalg.norm(proj))
    if pn < _COINCIDENT_TOL:
        return False
    proj = proj / pn
    along = math.atan2(float(np.dot(np.cross(va, proj), pole)), clamp(float(np.dot(va, proj))))
    return along >= 0.0
