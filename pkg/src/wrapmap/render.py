"""Deterministic SVG rendering and monochrome edge rasterization of
projected maps and wrapped node-link diagrams.

Scenes fix the viewport (sphere projection canvas, torus fundamental domain,
or fitted plane); content is either a graph with a layout or GeoJSON outline
layers. SVG output is byte-stable: fixed element order and 3-decimal
coordinates. Torus edges are drawn by clipping all 9 translated copies of
each minimal-wrap segment to the domain viewport, so wrapped links re-enter
on the opposite side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InconsistentSceneError
from .graphs import Graph
from .layout import Geometry, Layout
from .projections import (
    ProjectionSpec,
    ScreenPoint,
    domain_outline,
    project_geodesic,
    project_polyline,
)
from .raster import clip_segment, draw_segment, new_bitmap, round_half_up, write_p4
from .sphere import GeoPoint, vec_to_geo

OUTLINE_COLOR = "#94a3b8"
GRATICULE_COLOR = "#e2e8f0"
LAYER_COLOR = "#64748b"
EDGE_COLOR = "#475569"
NODE_COLOR = "#1f2937"
HIGHLIGHT_COLOR = "#dc2626"


@dataclass(frozen=True)
class RenderSpec:
    stroke_width: float = 1.0
    node_radius: float = 3.0
    show_graticule: bool = False
    highlight_nodes: tuple[int, ...] = ()
    highlight_edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.stroke_width < 1.0:
            raise ValueError("stroke width must be >= 1 px")
        if self.node_radius <= 0:
            raise ValueError("node radius must be positive")


@dataclass(frozen=True)
class SphereScene:
    projection: ProjectionSpec


@dataclass(frozen=True)
class TorusScene:
    width: int
    height: int
    offset: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class PlaneScene:
    width: int
    height: int
    margin: float = 20.0


@dataclass(frozen=True)
class GraphContent:
    graph: Graph
    layout: Layout


@dataclass(frozen=True)
class GeoJsonContent:
    layers: tuple[dict, ...]


Scene = SphereScene | TorusScene | PlaneScene
Content = GraphContent | GeoJsonContent


def _fmt(v: float) -> str:
    out = f"{v:.3f}"
    return "0.000" if out == "-0.000" else out


def _polyline_path(points) -> str:
    parts = [f"M {_fmt(points[0][0])},{_fmt(points[0][1])}"]
    parts.extend(f"L {_fmt(x)},{_fmt(y)}" for x, y in points[1:])
    return " ".join(parts)


def _check_scene(scene: Scene, content: Content) -> None:
    if isinstance(content, GeoJsonContent) and not isinstance(scene, SphereScene):
        raise InconsistentSceneError("GeoJSON layers need a projection scene")
    if isinstance(content, GraphContent):
        wanted = {
            SphereScene: Geometry.SPHERE,
            TorusScene: Geometry.TORUS,
            PlaneScene: Geometry.PLANE,
        }[type(scene)]
        if content.layout.geometry is not wanted:
            raise InconsistentSceneError(
                f"{type(scene).__name__} cannot render a {content.layout.geometry.value} layout"
            )
        if content.layout.positions.shape[0] != content.graph.node_count:
            raise InconsistentSceneError("layout size does not match the graph")


def _scene_size(scene: Scene) -> tuple[int, int]:
    if isinstance(scene, SphereScene):
        return scene.projection.width, scene.projection.height
    return scene.width, scene.height


def _geojson_rings(layer: dict):
    kind = layer.get("type")
    if kind == "FeatureCollection":
        for feature in layer.get("features", []):
            yield from _geojson_rings(feature)
    elif kind == "Feature":
        yield from _geojson_rings(layer.get("geometry") or {})
    elif kind == "Polygon":
        yield from layer.get("coordinates", [])
    elif kind == "MultiPolygon":
        for poly in layer.get("coordinates", []):
            yield from poly
    elif kind == "LineString":
        yield layer.get("coordinates", [])
    elif kind == "MultiLineString":
        yield from layer.get("coordinates", [])


def _graticule_lines():
    lines = []
    for lon in range(-150, 181, 30):
        lines.append([GeoPoint(lon, lat) for lat in range(-88, 89, 2)])
    for lat in range(-60, 61, 30):
        lines.append([GeoPoint(lon, lat) for lon in range(-180, 181, 2)])
    return lines


# ---------------------------------------------------------------------------
# Geometry -> screen segments
# ---------------------------------------------------------------------------

def _torus_to_screen(scene: TorusScene, u: float, v: float) -> tuple[float, float]:
    return u * scene.width, v * scene.height


def _torus_edge_segments(scene: TorusScene, layout: Layout, graph: Graph):
    """Minimal-wrap segments of every edge, clipped 9-copy style to the
    domain viewport."""
    du, dv = scene.offset
    pos = np.mod(layout.positions + np.array([du, dv]), 1.0)
    segments = []
    for i, j in graph.edges:
        ui, vi = float(pos[i, 0]), float(pos[i, 1])
        uj, vj = float(pos[j, 0]), float(pos[j, 1])
        step_u = (uj - ui + 0.5) % 1.0 - 0.5
        step_v = (vj - vi + 0.5) % 1.0 - 0.5
        pieces = []
        for ax in (-1.0, 0.0, 1.0):
            for ay in (-1.0, 0.0, 1.0):
                x0, y0 = _torus_to_screen(scene, ui + ax, vi + ay)
                x1, y1 = _torus_to_screen(scene, ui + step_u + ax, vi + step_v + ay)
                clipped = clip_segment(x0, y0, x1, y1, scene.width, scene.height)
                if clipped is not None and (clipped[0] != clipped[2] or clipped[1] != clipped[3]):
                    pieces.append(clipped)
        segments.append(((i, j), pieces))
    return segments, pos


def _plane_transform(scene: PlaneScene, layout: Layout):
    pos = layout.positions
    lo = pos.min(axis=0)
    hi = pos.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    scale = min(
        (scene.width - 2 * scene.margin) / span[0], (scene.height - 2 * scene.margin) / span[1]
    )
    center = (lo + hi) / 2.0

    def to_screen(p) -> tuple[float, float]:
        return (
            scene.width / 2.0 + (float(p[0]) - center[0]) * scale,
            scene.height / 2.0 + (float(p[1]) - center[1]) * scale,
        )

    return to_screen


def _sphere_node_screen(spec: ProjectionSpec, layout: Layout):
    from .projections import project

    return [project(spec, vec_to_geo(v)) for v in layout.positions]


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

def render_svg(scene: Scene, content: Content, spec: RenderSpec = RenderSpec()) -> str:
    """Render a scene to an SVG document string (byte-deterministic)."""
    _check_scene(scene, content)
    width, height = _scene_size(scene)
    sw = _fmt(spec.stroke_width)
    out: list[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    )
    out.append(f'<rect width="{width}" height="{height}" fill="#ffffff"/>')

    if isinstance(scene, SphereScene):
        pspec = scene.projection
        for ring in domain_outline(pspec):
            out.append(
                f'<path d="{_polyline_path(ring)}" fill="none" stroke="{OUTLINE_COLOR}" '
                f'stroke-width="{sw}"/>'
            )
        if spec.show_graticule:
            for line in _graticule_lines():
                for seg in project_polyline(pspec, line):
                    out.append(
                        f'<path d="{_polyline_path([(p.x, p.y) for p in seg])}" fill="none" '
                        f'stroke="{GRATICULE_COLOR}" stroke-width="{sw}"/>'
                    )

    if isinstance(content, GeoJsonContent):
        pspec = scene.projection
        for layer in content.layers:
            for ring in _geojson_rings(layer):
                line = [GeoPoint(float(lon), float(lat)) for lon, lat in ring]
                for seg in project_polyline(pspec, line):
                    out.append(
                        f'<path d="{_polyline_path([(p.x, p.y) for p in seg])}" fill="none" '
                        f'stroke="{LAYER_COLOR}" stroke-width="{sw}"/>'
                    )
    else:
        graph = content.graph
        layout = content.layout
        highlight_edges = {tuple(sorted(e)) for e in spec.highlight_edges}
        if isinstance(scene, SphereScene):
            pspec = scene.projection
            screens = _sphere_node_screen(pspec, layout)
            for i, j in graph.edges:
                color = HIGHLIGHT_COLOR if (i, j) in highlight_edges else EDGE_COLOR
                path = project_geodesic(pspec, vec_to_geo(layout.positions[i]), vec_to_geo(layout.positions[j]))
                for seg in path.segments:
                    out.append(
                        f'<path d="{_polyline_path([(p.x, p.y) for p in seg])}" fill="none" '
                        f'stroke="{color}" stroke-width="{sw}"/>'
                    )
            points = [(p.x, p.y) for p in screens]
        elif isinstance(scene, TorusScene):
            segments, pos = _torus_edge_segments(scene, layout, graph)
            for (i, j), pieces in segments:
                color = HIGHLIGHT_COLOR if (i, j) in highlight_edges else EDGE_COLOR
                for x0, y0, x1, y1 in pieces:
                    out.append(
                        f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" y2="{_fmt(y1)}" '
                        f'stroke="{color}" stroke-width="{sw}"/>'
                    )
            points = [_torus_to_screen(scene, float(u), float(v)) for u, v in pos]
        else:
            to_screen = _plane_transform(scene, layout)
            points = [to_screen(p) for p in layout.positions]
            for i, j in graph.edges:
                color = HIGHLIGHT_COLOR if (i, j) in highlight_edges else EDGE_COLOR
                x0, y0 = points[i]
                x1, y1 = points[j]
                out.append(
                    f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" y2="{_fmt(y1)}" '
                    f'stroke="{color}" stroke-width="{sw}"/>'
                )
        highlight = set(spec.highlight_nodes)
        for idx, (x, y) in enumerate(points):
            color = HIGHLIGHT_COLOR if idx in highlight else NODE_COLOR
            out.append(
                f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(spec.node_radius)}" fill="{color}"/>'
            )

    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Bitmap
# ---------------------------------------------------------------------------

def rasterize_edges(scene: Scene, content: Content, dims: tuple[int, int]) -> np.ndarray:
    """1-bit raster of the edge paths only, Bresenham strokes, at `dims`."""
    _check_scene(scene, content)
    if isinstance(content, GeoJsonContent):
        raise InconsistentSceneError("edge rasterization needs graph content")
    w, h = dims
    bitmap = new_bitmap(w, h)
    graph = content.graph
    layout = content.layout

    def draw_float_segment(x0, y0, x1, y1):
        draw_segment(
            bitmap,
            int(round_half_up(np.array([x0]))[0]),
            int(round_half_up(np.array([y0]))[0]),
            int(round_half_up(np.array([x1]))[0]),
            int(round_half_up(np.array([y1]))[0]),
        )

    if isinstance(scene, SphereScene):
        pspec = ProjectionSpec(scene.projection.kind, w, h, scene.projection.rotation)
        for i, j in graph.edges:
            path = project_geodesic(pspec, vec_to_geo(layout.positions[i]), vec_to_geo(layout.positions[j]))
            for seg in path.segments:
                for p0, p1 in zip(seg, seg[1:]):
                    draw_float_segment(p0.x, p0.y, p1.x, p1.y)
    elif isinstance(scene, TorusScene):
        scaled = TorusScene(w, h, scene.offset)
        segments, _ = _torus_edge_segments(scaled, layout, graph)
        for _, pieces in segments:
            for x0, y0, x1, y1 in pieces:
                draw_float_segment(x0, y0, x1, y1)
    else:
        scaled = PlaneScene(w, h, scene.margin)
        to_screen = _plane_transform(scaled, layout)
        for i, j in graph.edges:
            x0, y0 = to_screen(layout.positions[i])
            x1, y1 = to_screen(layout.positions[j])
            draw_float_segment(x0, y0, x1, y1)
    return bitmap


def save_bitmap(bitmap: np.ndarray, path: str) -> None:
    write_p4(bitmap, path)
