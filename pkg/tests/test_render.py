import math
import re

import numpy as np
import pytest

from wrapmap.errors import InconsistentSceneError
from wrapmap.graphs import Graph
from wrapmap.layout import Geometry, Layout, random_layout
from wrapmap.projections import ProjectionKind, ProjectionSpec, project
from wrapmap.raster import bresenham_points, new_bitmap, rasterize_segment_batch, write_p4
from wrapmap.render import (
    GeoJsonContent,
    GraphContent,
    PlaneScene,
    RenderSpec,
    SphereScene,
    TorusScene,
    rasterize_edges,
    render_svg,
)
from wrapmap.sphere import GeoPoint, RotationTriple, geo_to_vec, vec_to_geo

SPHERE_SPEC = ProjectionSpec(ProjectionKind.EQUAL_EARTH, 700, 350, RotationTriple(20, -15, 5))


def sphere_content(n=8, seed=3, edges=None):
    g = Graph(n, edges or tuple((i, (i + 1) % n) for i in range(n)))
    layout = random_layout(g, Geometry.SPHERE, seed)
    return GraphContent(g, layout)


def test_empty_graph_produces_outline_only_svg():
    g = Graph(1, ())
    layout = random_layout(g, Geometry.SPHERE, 0)
    svg = render_svg(SphereScene(SPHERE_SPEC), GraphContent(g, layout))
    assert svg.startswith('<?xml version="1.0"')
    assert "<path" in svg  # projection outline present
    assert svg.count("<circle") == 1


def test_svg_byte_determinism():
    content = sphere_content()
    a = render_svg(SphereScene(SPHERE_SPEC), content, RenderSpec(show_graticule=True))
    b = render_svg(SphereScene(SPHERE_SPEC), content, RenderSpec(show_graticule=True))
    assert a == b


def test_svg_node_positions_match_projection():
    content = sphere_content()
    svg = render_svg(SphereScene(SPHERE_SPEC), content)
    circles = re.findall(r'<circle cx="([-0-9.]+)" cy="([-0-9.]+)"', svg)
    assert len(circles) == content.graph.node_count
    for idx, (cx, cy) in enumerate(circles):
        pt = project(SPHERE_SPEC, vec_to_geo(content.layout.positions[idx]))
        assert math.hypot(float(cx) - pt.x, float(cy) - pt.y) <= 0.5


def test_svg_coordinates_within_canvas():
    content = sphere_content(12, seed=9)
    rspec = RenderSpec(stroke_width=2.0)
    svg = render_svg(SphereScene(SPHERE_SPEC), content, rspec)
    coords = [
        (float(x), float(y))
        for x, y in re.findall(r'(?:cx|x1|x2)="([-0-9.]+)" (?:cy|y1|y2)="([-0-9.]+)"', svg)
    ]
    nums = re.findall(r'[ML] ([-0-9.]+),([-0-9.]+)', svg)
    coords += [(float(x), float(y)) for x, y in nums]
    for x, y in coords:
        assert -rspec.stroke_width <= x <= 700 + rspec.stroke_width
        assert -rspec.stroke_width <= y <= 350 + rspec.stroke_width


def test_torus_scene_wrapped_edges_reenter():
    g = Graph(2, ((0, 1),))
    layout = Layout(Geometry.TORUS, np.array([[0.05, 0.5], [0.95, 0.5]]))
    svg = render_svg(TorusScene(200, 200), GraphContent(g, layout))
    lines = re.findall(r'<line x1="([-0-9.]+)" y1="[-0-9.]+" x2="([-0-9.]+)"', svg)
    assert len(lines) == 2  # two clipped pieces, one leaving each side
    xs = sorted(float(a) for pair in lines for a in pair)
    assert xs[0] == 0.0 and xs[-1] == 200.0


def test_plane_scene_renders_highlights():
    g = Graph(3, ((0, 1), (1, 2)))
    layout = Layout(Geometry.PLANE, np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]))
    svg = render_svg(
        PlaneScene(300, 300),
        GraphContent(g, layout),
        RenderSpec(highlight_nodes=(1,), highlight_edges=((1, 2),)),
    )
    assert svg.count("#dc2626") == 2


def test_inconsistent_scene_rejected():
    g = Graph(2, ((0, 1),))
    plane = random_layout(g, Geometry.PLANE, 0)
    with pytest.raises(InconsistentSceneError):
        render_svg(TorusScene(100, 100), GraphContent(g, plane))
    with pytest.raises(InconsistentSceneError):
        render_svg(PlaneScene(100, 100), GeoJsonContent(({"type": "Polygon", "coordinates": []},)))


def test_geojson_layer_renders():
    ring = [[-10.0, -10.0], [10.0, -10.0], [10.0, 10.0], [-10.0, 10.0], [-10.0, -10.0]]
    layer = {"type": "Feature", "geometry": {"type": "Polygon", "coordinates": [ring]}}
    svg = render_svg(SphereScene(SPHERE_SPEC), GeoJsonContent((layer,)))
    assert svg.count("<path") >= 2  # outline plus the layer ring


def test_rasterize_no_edges_blank():
    g = Graph(3, ())
    layout = random_layout(g, Geometry.SPHERE, 1)
    bm = rasterize_edges(SphereScene(SPHERE_SPEC), GraphContent(g, layout), (128, 64))
    assert not bm.any()


def test_rasterize_horizontal_line_pixel_count():
    g = Graph(2, ((0, 1),))
    layout = Layout(Geometry.TORUS, np.array([[0.25, 0.5], [0.75, 0.5]]))
    bm = rasterize_edges(TorusScene(200, 100), GraphContent(g, layout), (200, 100))
    length = round(0.75 * 200) - round(0.25 * 200)
    assert int(bm.sum()) == length + 1


def test_rasterize_deterministic():
    content = sphere_content(10, seed=5)
    a = rasterize_edges(SphereScene(SPHERE_SPEC), content, (300, 150))
    b = rasterize_edges(SphereScene(SPHERE_SPEC), content, (300, 150))
    assert np.array_equal(a, b)
    assert int(a.sum()) > 0


def test_vectorized_bresenham_matches_loop_exhaustively():
    rng = np.random.default_rng(77)
    x0s, y0s, x1s, y1s = [], [], [], []
    expected = set()
    for dx in range(-12, 13, 3):
        for dy in range(-12, 13, 3):
            ox, oy = int(rng.integers(15, 25)), int(rng.integers(15, 25))
            x0s.append(ox)
            y0s.append(oy)
            x1s.append(ox + dx)
            y1s.append(oy + dy)
            expected.update(bresenham_points(ox, oy, ox + dx, oy + dy))
    got = rasterize_segment_batch(48, 48, np.array(x0s), np.array(y0s), np.array(x1s), np.array(y1s))
    manual = new_bitmap(48, 48)
    for x, y in expected:
        manual[y, x] = True
    assert np.array_equal(got, manual)


def test_p4_output_format(tmp_path):
    bm = new_bitmap(10, 4)
    bm[1, 2] = True
    path = tmp_path / "out.pbm"
    write_p4(bm, str(path))
    data = path.read_bytes()
    assert data.startswith(b"P4\n10 4\n")
    rows = np.unpackbits(np.frombuffer(data[len(b"P4\n10 4\n"):], dtype=np.uint8).reshape(4, -1), axis=1)[:, :10]
    assert rows[1, 2] == 1 and rows.sum() == 1
