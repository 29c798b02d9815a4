"""The five study map projections, forward and inverse, plus projection of
great-circle paths with wrap-around splitting.

Equirectangular, Equal Earth and Hammer are continuous; Mollweide Hemisphere
and Orthographic Hemisphere are interrupted, drawn as two side-by-side discs
(west disc centred on the rotated lon -90, east disc on +90) separated by a
gutter of 4% canvas width. Every projection is letterboxed into the canvas
preserving its native aspect ratio. Screen coordinates are pixels with the
origin at the top-left corner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .errors import AntipodalPairError, OutsideDomainError
from .sphere import (
    GeoPoint,
    RotationTriple,
    clamp,
    geo_to_vec,
    geodesic_interpolate,
    great_circle_distance,
    rotation_matrix,
    vec_to_geo,
)

GUTTER_FRACTION = 0.04
MAX_GEODESIC_STEP = math.radians(2.0)
GEODESIC_FLATNESS_PX = 0.25
_BOUNDARY_LOCALIZE = math.radians(0.02)

# Equal Earth polynomial coefficients (Savric, Patterson & Jenny 2018).
_EE_A1 = 1.340264
_EE_A2 = -0.081106
_EE_A3 = 0.000893
_EE_A4 = 0.003796
_EE_M = math.sqrt(3.0) / 2.0
_EE_THETA_MAX = math.pi / 3.0  # asin(M * sin(pi/2))

_SQRT2 = math.sqrt(2.0)


class ProjectionKind(str, Enum):
    EQUIRECTANGULAR = "equirectangular"
    EQUAL_EARTH = "equal-earth"
    HAMMER = "hammer"
    MOLLWEIDE_HEMISPHERE = "mollweide-hemisphere"
    ORTHOGRAPHIC_HEMISPHERE = "orthographic-hemisphere"

    @property
    def is_hemispheric(self) -> bool:
        return self in (ProjectionKind.MOLLWEIDE_HEMISPHERE, ProjectionKind.ORTHOGRAPHIC_HEMISPHERE)


class Face(str, Enum):
    WEST = "west"
    EAST = "east"


class ScreenPoint(NamedTuple):
    x: float
    y: float
    face: Face | None = None


@dataclass(frozen=True)
class ProjectionSpec:
    kind: ProjectionKind
    width: int
    height: int
    rotation: RotationTriple = RotationTriple()

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError("canvas dimensions must be positive")


@dataclass(frozen=True)
class ProjectedPath:
    """Projected polyline split into segments at projection boundaries."""

    segments: tuple[tuple[ScreenPoint, ...], ...]
    source: tuple[GeoPoint, GeoPoint] | None = None


# ---------------------------------------------------------------------------
# Raw projection formulas (native units, radians in, y axis up)
# ---------------------------------------------------------------------------

def equirectangular_forward(lon, lat):
    return np.asarray(lon, dtype=float), np.asarray(lat, dtype=float)


def _ee_dpoly(t2, t6):
    # d(y)/d(theta) polynomial, also the x denominator factor
    return _EE_A1 + 3.0 * _EE_A2 * t2 + t6 * (7.0 * _EE_A3 + 9.0 * _EE_A4 * t2)


def _ee_ypoly(theta, t2, t6):
    return theta * (_EE_A1 + _EE_A2 * t2 + t6 * (_EE_A3 + _EE_A4 * t2))


def equal_earth_forward(lon, lat):
    """Equal Earth forward; accepts scalars or numpy arrays."""
    theta = np.arcsin(_EE_M * np.sin(lat))
    t2 = theta * theta
    t6 = t2 * t2 * t2
    x = np.asarray(lon) * np.cos(theta) / (_EE_M * _ee_dpoly(t2, t6))
    y = _ee_ypoly(theta, t2, t6)
    return x, y


def equal_earth_theta_from_y(y):
    """Parametric latitude for a native Equal Earth y, by Newton iteration
    (tolerance 1e-10, at most 25 iterations); vectorized."""
    y = np.asarray(y, dtype=float)
    theta = np.array(y / _EE_A1, dtype=float)
    for _ in range(25):
        t2 = theta * theta
        t6 = t2 * t2 * t2
        f = theta * (_EE_A1 + _EE_A2 * t2 + t6 * (_EE_A3 + _EE_A4 * t2)) - y
        delta = f / _ee_dpoly(t2, t6)
        theta = theta - delta
        if np.max(np.abs(delta)) < 1e-10:
            break
    return theta


def equal_earth_inverse(x: float, y: float) -> tuple[float, float]:
    theta = float(equal_earth_theta_from_y(y))
    if abs(theta) > _EE_THETA_MAX + 1e-9:
        raise OutsideDomainError("above the Equal Earth pole line")
    t2 = theta * theta
    t6 = t2 * t2 * t2
    lon = _EE_M * x * _ee_dpoly(t2, t6) / math.cos(theta)
    if abs(lon) > math.pi + 1e-9:
        raise OutsideDomainError("beyond the Equal Earth antimeridian edge")
    return lon, math.asin(clamp(math.sin(theta) / _EE_M))


def hammer_forward(lon, lat):
    half = np.asarray(lon, dtype=float) / 2.0
    coslat = np.cos(lat)
    denom = np.sqrt(1.0 + coslat * np.cos(half))
    x = 2.0 * _SQRT2 * coslat * np.sin(half) / denom
    y = _SQRT2 * np.sin(lat) / denom
    return x, y


def hammer_inverse(x: float, y: float) -> tuple[float, float]:
    if (x / (2.0 * _SQRT2)) ** 2 + (y / _SQRT2) ** 2 > 1.0 + 1e-9:
        raise OutsideDomainError("outside the Hammer ellipse")
    xi, yi = x / 2.0, y
    z = math.sqrt(xi * xi + yi * yi)
    if z == 0.0:
        return 0.0, 0.0
    c = 2.0 * math.asin(clamp(z / 2.0))
    sc, cc = math.sin(c), math.cos(c)
    lon = 2.0 * math.atan2(xi * sc, z * cc)
    lat = math.asin(clamp(yi * sc / z))
    if abs(lon) > math.pi + 1e-9:
        raise OutsideDomainError("outside the Hammer ellipse")
    return lon, lat


def mollweide_theta(lat: float) -> float:
    """Solve 2t + sin 2t = pi sin(lat) by Newton with bisection fallback."""
    if abs(lat) >= math.pi / 2.0 - 1e-12:
        return math.copysign(math.pi / 2.0, lat)
    target = math.pi * math.sin(lat)
    theta = lat
    for _ in range(25):
        f = 2.0 * theta + math.sin(2.0 * theta) - target
        fp = 2.0 + 2.0 * math.cos(2.0 * theta)
        if fp < 1e-12:
            break
        step = f / fp
        theta -= step
        if abs(step) < 1e-12:
            return theta
    lo, hi = -math.pi / 2.0, math.pi / 2.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if 2.0 * mid + math.sin(2.0 * mid) - target > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def mollweide_forward(lon: float, lat: float) -> tuple[float, float]:
    theta = mollweide_theta(lat)
    return (2.0 * _SQRT2 / math.pi) * lon * math.cos(theta), _SQRT2 * math.sin(theta)


def mollweide_inverse(x: float, y: float) -> tuple[float, float]:
    if x * x + y * y > 2.0 + 1e-9:
        raise OutsideDomainError("outside the Mollweide hemisphere disc")
    theta = math.asin(clamp(y / _SQRT2))
    lat = math.asin(clamp((2.0 * theta + math.sin(2.0 * theta)) / math.pi))
    ct = math.cos(theta)
    lon = 0.0 if ct < 1e-12 else math.pi * x / (2.0 * _SQRT2 * ct)
    return clamp(lon, -math.pi / 2.0, math.pi / 2.0), lat


def orthographic_forward(lon, lat):
    return np.cos(lat) * np.sin(lon), np.sin(lat) + np.asarray(lon) * 0.0


def orthographic_inverse(x: float, y: float) -> tuple[float, float]:
    z2 = 1.0 - x * x - y * y
    if z2 < -1e-9:
        raise OutsideDomainError("outside the orthographic disc")
    z = math.sqrt(max(z2, 0.0))
    return math.atan2(x, z), math.asin(clamp(y))


_EE_XMAX = math.pi / (_EE_M * _EE_A1)
_EE_YMAX = float(equal_earth_forward(0.0, math.pi / 2.0)[1])


def raw_forward(kind: ProjectionKind) -> Callable:
    """Native forward for a projection kind (hemisphere kinds: one disc)."""
    return {
        ProjectionKind.EQUIRECTANGULAR: equirectangular_forward,
        ProjectionKind.EQUAL_EARTH: equal_earth_forward,
        ProjectionKind.HAMMER: hammer_forward,
        ProjectionKind.MOLLWEIDE_HEMISPHERE: lambda lon, lat: mollweide_forward(lon, lat),
        ProjectionKind.ORTHOGRAPHIC_HEMISPHERE: orthographic_forward,
    }[kind]


# ---------------------------------------------------------------------------
# Canvas frames
# ---------------------------------------------------------------------------

class _Frame(NamedTuple):
    scale: float
    cx: float
    cy: float
    west_cx: float
    east_cx: float
    disc_native_radius: float


@lru_cache(maxsize=64)
def _frame_for(kind: ProjectionKind, width: int, height: int) -> _Frame:
    cy = height / 2.0
    if kind.is_hemispheric:
        rho = 1.0 if kind is ProjectionKind.ORTHOGRAPHIC_HEMISPHERE else _SQRT2
        gutter = GUTTER_FRACTION * width
        disc = min((width - gutter) / 2.0, float(height))
        scale = (disc / 2.0) / rho
        west_cx = width / 2.0 - (disc + gutter) / 2.0
        east_cx = width / 2.0 + (disc + gutter) / 2.0
        return _Frame(scale, width / 2.0, cy, west_cx, east_cx, rho)
    half_extents = {
        ProjectionKind.EQUIRECTANGULAR: (math.pi, math.pi / 2.0),
        ProjectionKind.EQUAL_EARTH: (_EE_XMAX, _EE_YMAX),
        ProjectionKind.HAMMER: (2.0 * _SQRT2, _SQRT2),
    }[kind]
    scale = min(width / (2.0 * half_extents[0]), height / (2.0 * half_extents[1]))
    return _Frame(scale, width / 2.0, cy, 0.0, 0.0, 0.0)


def _frame(spec: ProjectionSpec) -> _Frame:
    return _frame_for(spec.kind, spec.width, spec.height)


def canvas_frame(spec: ProjectionSpec) -> _Frame:
    """Letterbox frame: native-to-pixel scale, canvas centre and, for
    hemispheric kinds, the two disc centres and native disc radius."""
    return _frame(spec)


# ---------------------------------------------------------------------------
# Project / invert
# ---------------------------------------------------------------------------

def project_rotated_vec(spec: ProjectionSpec, v: np.ndarray) -> ScreenPoint:
    """Project a unit vector that has already been rotated by spec.rotation."""
    fr = _frame(spec)
    kind = spec.kind
    if not kind.is_hemispheric:
        lon = math.atan2(float(v[1]), float(v[0]))
        lat = math.asin(clamp(float(v[2])))
        if kind is ProjectionKind.EQUIRECTANGULAR:
            nx, ny = lon, lat
        elif kind is ProjectionKind.EQUAL_EARTH:
            xe, ye = equal_earth_forward(lon, lat)
            nx, ny = float(xe), float(ye)
        else:
            xh, yh = hammer_forward(lon, lat)
            nx, ny = float(xh), float(yh)
        return ScreenPoint(fr.cx + fr.scale * nx, fr.cy - fr.scale * ny, None)

    west = float(v[1]) < 0.0
    if west:
        w = (-float(v[1]), float(v[0]), float(v[2]))  # extra Rz(+90)
    else:
        w = (float(v[1]), -float(v[0]), float(v[2]))  # extra Rz(-90)
    if kind is ProjectionKind.ORTHOGRAPHIC_HEMISPHERE:
        nx, ny = w[1], w[2]
    else:
        lam = math.atan2(w[1], w[0])
        phi = math.asin(clamp(w[2]))
        nx, ny = mollweide_forward(lam, phi)
    cxd = fr.west_cx if west else fr.east_cx
    return ScreenPoint(cxd + fr.scale * nx, fr.cy - fr.scale * ny, Face.WEST if west else Face.EAST)


def project(spec: ProjectionSpec, p: GeoPoint) -> ScreenPoint:
    """Screen position of a geographic point under the spec's rotation."""
    v = rotation_matrix(spec.rotation) @ geo_to_vec(p)
    return project_rotated_vec(spec, v)


def invert(spec: ProjectionSpec, screen) -> GeoPoint:
    """Geographic point whose projection is the given screen position.

    Raises OutsideDomainError when the position falls outside the projection
    outline (for hemispheric kinds, outside both discs).
    """
    x, y = float(screen[0]), float(screen[1])
    fr = _frame(spec)
    kind = spec.kind
    if not kind.is_hemispheric:
        nx = (x - fr.cx) / fr.scale
        ny = (fr.cy - y) / fr.scale
        if kind is ProjectionKind.EQUIRECTANGULAR:
            if abs(nx) > math.pi + 1e-9 or abs(ny) > math.pi / 2.0 + 1e-9:
                raise OutsideDomainError("outside the equirectangular sheet")
            lon, lat = nx, ny
        elif kind is ProjectionKind.EQUAL_EARTH:
            lon, lat = equal_earth_inverse(nx, ny)
        else:
            lon, lat = hammer_inverse(nx, ny)
        v = np.array(
            [math.cos(lat) * math.cos(lon), math.cos(lat) * math.sin(lon), math.sin(lat)]
        )
        return vec_to_geo(rotation_matrix(spec.rotation).T @ v)

    rho2 = fr.disc_native_radius * fr.disc_native_radius
    for face_west, cxd in ((True, fr.west_cx), (False, fr.east_cx)):
        nx = (x - cxd) / fr.scale
        ny = (fr.cy - y) / fr.scale
        if nx * nx + ny * ny <= rho2 * (1.0 + 1e-9):
            if kind is ProjectionKind.ORTHOGRAPHIC_HEMISPHERE:
                lam, phi = orthographic_inverse(nx, ny)
            else:
                lam, phi = mollweide_inverse(nx, ny)
            w = np.array(
                [math.cos(phi) * math.cos(lam), math.cos(phi) * math.sin(lam), math.sin(phi)]
            )
            if face_west:
                v = np.array([w[1], -w[0], w[2]])  # undo Rz(+90)
            else:
                v = np.array([-w[1], w[0], w[2]])  # undo Rz(-90)
            return vec_to_geo(rotation_matrix(spec.rotation).T @ v)
    raise OutsideDomainError("outside both hemisphere discs")


def paired_hemisphere_rotation(primary: RotationTriple) -> RotationTriple:
    """Rotation for the opposite hemisphere disc: centres are antipodal and
    north stays up, so the two discs jointly cover the sphere."""
    return RotationTriple(primary.lam + 180.0, -primary.phi, -primary.gam)


# ---------------------------------------------------------------------------
# Path projection
# ---------------------------------------------------------------------------

def _is_jump(spec: ProjectionSpec, a: ScreenPoint, b: ScreenPoint) -> bool:
    if a.face is not b.face:
        return True
    return math.hypot(b.x - a.x, b.y - a.y) > spec.width / 2.0


def _point_segment_dist(p: ScreenPoint, a: ScreenPoint, b: ScreenPoint) -> float:
    vx, vy = b.x - a.x, b.y - a.y
    wx, wy = p.x - a.x, p.y - a.y
    vv = vx * vx + vy * vy
    t = 0.0 if vv == 0.0 else clamp((wx * vx + wy * vy) / vv, 0.0, 1.0)
    return math.hypot(wx - t * vx, wy - t * vy)


def split_at_jumps(spec: ProjectionSpec, points: list[ScreenPoint]) -> tuple[tuple[ScreenPoint, ...], ...]:
    """Split a projected polyline wherever consecutive points jump more than
    half the canvas width or change face; singleton pieces are dropped."""
    segments: list[tuple[ScreenPoint, ...]] = []
    current: list[ScreenPoint] = []
    for pt in points:
        if current and _is_jump(spec, current[-1], pt):
            if len(current) >= 2:
                segments.append(tuple(current))
            current = []
        current.append(pt)
    if len(current) >= 2:
        segments.append(tuple(current))
    return tuple(segments)


def project_geodesic(
    spec: ProjectionSpec,
    a: GeoPoint,
    b: GeoPoint,
    max_step: float = MAX_GEODESIC_STEP,
    flatness_px: float = GEODESIC_FLATNESS_PX,
) -> ProjectedPath:
    """Project the minor great-circle arc between two points.

    The arc is sampled at `max_step` angular resolution, refined adaptively
    until the screen-space sagitta is below `flatness_px`, and split wherever
    the projection wraps.
    """
    va = geo_to_vec(a)
    vb = geo_to_vec(b)
    if float(np.dot(va, vb)) <= -1.0 + 1e-12:
        raise AntipodalPairError("antipodal endpoints have no unique geodesic")
    rot = rotation_matrix(spec.rotation)
    va = rot @ va
    vb = rot @ vb
    angle = great_circle_distance(va, vb)

    def sample(t: float) -> ScreenPoint:
        return project_rotated_vec(spec, geodesic_interpolate(va, vb, t))

    n0 = max(1, math.ceil(angle / max_step)) if angle > 0 else 1
    ts = [k / n0 for k in range(n0 + 1)]
    pts = [sample(t) for t in ts]

    out_t: list[float] = [ts[0]]
    out_p: list[ScreenPoint] = [pts[0]]

    def refine(t0: float, p0: ScreenPoint, t1: float, p1: ScreenPoint, depth: int) -> None:
        if depth <= 0:
            out_t.append(t1)
            out_p.append(p1)
            return
        boundary = _is_jump(spec, p0, p1)
        if boundary and (t1 - t0) * max(angle, 1e-12) < _BOUNDARY_LOCALIZE:
            out_t.append(t1)
            out_p.append(p1)
            return
        tm = 0.5 * (t0 + t1)
        pm = sample(tm)
        if not boundary and not _is_jump(spec, p0, pm) and not _is_jump(spec, pm, p1):
            if _point_segment_dist(pm, p0, p1) <= flatness_px:
                out_t.append(t1)
                out_p.append(p1)
                return
        refine(t0, p0, tm, pm, depth - 1)
        refine(tm, pm, t1, p1, depth - 1)

    for k in range(n0):
        refine(ts[k], pts[k], ts[k + 1], pts[k + 1], 12)

    return ProjectedPath(split_at_jumps(spec, out_p), source=(a, b))


def densify_geo(points: list[GeoPoint], max_step_deg: float = 2.0) -> list[GeoPoint]:
    """Insert linear lon/lat interpolants so consecutive points are within
    max_step_deg in both coordinates (longitude measured on the short way)."""
    out: list[GeoPoint] = []
    for i, p in enumerate(points):
        if i == 0:
            out.append(p)
            continue
        q = points[i - 1]
        dlon = p.lon - q.lon
        if dlon > 180.0:
            dlon -= 360.0
        elif dlon < -180.0:
            dlon += 360.0
        dlat = p.lat - q.lat
        steps = max(1, math.ceil(max(abs(dlon), abs(dlat)) / max_step_deg))
        for k in range(1, steps + 1):
            out.append(GeoPoint(q.lon + dlon * k / steps, q.lat + dlat * k / steps))
    return out


def project_polyline(
    spec: ProjectionSpec, points: list[GeoPoint], max_step_deg: float = 2.0
) -> tuple[tuple[ScreenPoint, ...], ...]:
    """Project an arbitrary geographic polyline (graticule lines, outlines),
    splitting at projection boundaries."""
    dense = densify_geo(points, max_step_deg)
    return split_at_jumps(spec, [project(spec, p) for p in dense])


# ---------------------------------------------------------------------------
# Domain outline and membership
# ---------------------------------------------------------------------------

def equal_earth_edge_x(y: float) -> float:
    """Native |x| of the Equal Earth outline at native y."""
    theta = float(equal_earth_theta_from_y(y))
    theta = clamp(theta, -_EE_THETA_MAX, _EE_THETA_MAX)
    t2 = theta * theta
    t6 = t2 * t2 * t2
    return math.pi * math.cos(theta) / (_EE_M * _ee_dpoly(t2, t6))


def domain_outline(spec: ProjectionSpec, samples: int = 180) -> list[list[tuple[float, float]]]:
    """Closed outline(s) of the projected domain in screen coordinates."""
    fr = _frame(spec)
    kind = spec.kind

    def to_screen(nx: float, ny: float, cx: float) -> tuple[float, float]:
        return (cx + fr.scale * nx, fr.cy - fr.scale * ny)

    if kind is ProjectionKind.EQUIRECTANGULAR:
        w, h = math.pi, math.pi / 2.0
        ring = [(-w, -h), (w, -h), (w, h), (-w, h), (-w, -h)]
        return [[to_screen(x, y, fr.cx) for x, y in ring]]
    if kind is ProjectionKind.EQUAL_EARTH:
        thetas = np.linspace(-_EE_THETA_MAX, _EE_THETA_MAX, samples)
        right = []
        for th in thetas:
            t2 = th * th
            t6 = t2 * t2 * t2
            xe = math.pi * math.cos(th) / (_EE_M * _ee_dpoly(t2, t6))
            ye = th * (_EE_A1 + _EE_A2 * t2 + t6 * (_EE_A3 + _EE_A4 * t2))
            right.append((xe, ye))
        ring = right + [(-x, y) for x, y in reversed(right)] + [right[0]]
        return [[to_screen(x, y, fr.cx) for x, y in ring]]
    if kind is ProjectionKind.HAMMER:
        ring = [
            (2.0 * _SQRT2 * math.cos(t), _SQRT2 * math.sin(t))
            for t in np.linspace(0.0, 2.0 * math.pi, 2 * samples + 1)
        ]
        return [[to_screen(x, y, fr.cx) for x, y in ring]]
    rho = fr.disc_native_radius
    circles = []
    for cx in (fr.west_cx, fr.east_cx):
        circles.append(
            [
                to_screen(rho * math.cos(t), rho * math.sin(t), cx)
                for t in np.linspace(0.0, 2.0 * math.pi, 2 * samples + 1)
            ]
        )
    return circles


def inside_domain(spec: ProjectionSpec, x: float, y: float) -> bool:
    """Whether a screen position lies inside the projection outline."""
    fr = _frame(spec)
    kind = spec.kind
    if kind.is_hemispheric:
        rho2 = fr.disc_native_radius**2
        for cxd in (fr.west_cx, fr.east_cx):
            nx = (x - cxd) / fr.scale
            ny = (fr.cy - y) / fr.scale
            if nx * nx + ny * ny <= rho2:
                return True
        return False
    nx = (x - fr.cx) / fr.scale
    ny = (fr.cy - y) / fr.scale
    if kind is ProjectionKind.EQUIRECTANGULAR:
        return abs(nx) <= math.pi and abs(ny) <= math.pi / 2.0
    if kind is ProjectionKind.HAMMER:
        return (nx / (2.0 * _SQRT2)) ** 2 + (ny / _SQRT2) ** 2 <= 1.0
    if abs(ny) > _EE_YMAX:
        return False
    return abs(nx) <= equal_earth_edge_x(ny)
