"""File-based command-line pipeline.

Each subcommand reads and writes JSON (plus SVG/P4 for rendering) and drops a
manifest next to its output recording every parameter and seed, so any
artifact can be regenerated exactly. Exit codes: 0 success, 2 domain error,
64 usage error.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .autopan import (
    PanSearchConfig,
    auto_pan_sphere,
    auto_pan_torus,
    dump_masked_bitmap,
    summarize_autopan,
)
from .corpus import (
    CLUSTERED_PRESETS,
    SCALE_FREE_PRESETS,
    generate_clustered,
    generate_scale_free,
    spec_to_dict,
)
from .errors import WrapmapError
from .graphs import dump_json, graph_from_json, graph_to_json, load_json
from .layout import (
    Geometry,
    SgdSchedule,
    ideal_distances,
    layout_from_json,
    layout_to_json,
    random_layout,
    sgd_layout,
    stress,
)
from .projections import ProjectionKind, ProjectionSpec, project
from .render import (
    GeoJsonContent,
    GraphContent,
    PlaneScene,
    RenderSpec,
    SphereScene,
    TorusScene,
    rasterize_edges,
    render_svg,
    save_bitmap,
)
from .sphere import GeoPoint, RotationTriple, vec_to_geo
from .stimuli import (
    generate_area_trial,
    generate_direction_trial,
    generate_distance_trial,
    generate_network_trial,
    williams_orders,
)

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_USAGE = 64

PROJECTION_NAMES = {
    "equirectangular": ProjectionKind.EQUIRECTANGULAR,
    "equal-earth": ProjectionKind.EQUAL_EARTH,
    "hammer": ProjectionKind.HAMMER,
    "mollweide": ProjectionKind.MOLLWEIDE_HEMISPHERE,
    "orthographic": ProjectionKind.ORTHOGRAPHIC_HEMISPHERE,
}

STUDY_DEFAULT_TRIALS = {"distance": 12, "area": 12, "direction": 8}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 64, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _manifest_path(out: Path) -> Path:
    return out.with_name(out.stem + ".manifest.json")


def _write_manifest(out: Path, command: str, args: dict, stats: dict | None = None) -> None:
    dump_json(
        {"command": command, "args": args, "outputs": [out.name], "stats": stats or {}},
        str(_manifest_path(out)),
    )


def _geometry(name: str) -> Geometry:
    return Geometry(name)


def _load_graph(path: str):
    return graph_from_json(load_json(path))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_gen_graph(args) -> int:
    out = Path(args.out)
    if args.preset in CLUSTERED_PRESETS:
        spec = CLUSTERED_PRESETS[args.preset]
        g = generate_clustered(spec, args.seed)
    elif args.preset in SCALE_FREE_PRESETS:
        spec = SCALE_FREE_PRESETS[args.preset]
        g = generate_scale_free(spec, args.seed)
    else:
        raise WrapmapError(f"unknown preset {args.preset!r}")
    payload = graph_to_json(g, spec={"preset": args.preset, **spec_to_dict(spec)}, seed=args.seed)
    dump_json(payload, str(out))
    _write_manifest(
        out,
        "gen-graph",
        {"preset": args.preset, "seed": args.seed},
        {"nodes": g.node_count, "edges": g.edge_count},
    )
    return EXIT_OK


def cmd_layout(args) -> int:
    out = Path(args.out)
    g = _load_graph(args.graph)
    geometry = _geometry(args.geometry)
    schedule = SgdSchedule(iterations=args.iterations, eta_min=args.eta_min, seed=args.seed)
    ideal = ideal_distances(g, geometry)
    initial = stress(random_layout(g, geometry, schedule.seed), ideal)
    layout = sgd_layout(g, geometry, schedule)
    final = stress(layout, ideal)
    dump_json(
        layout_to_json(
            layout,
            graph_ref=Path(args.graph).name,
            seed=args.seed,
            schedule=schedule,
            initial_stress=initial,
            final_stress=final,
        ),
        str(out),
    )
    _write_manifest(
        out,
        "layout",
        {
            "graph": Path(args.graph).name,
            "geometry": geometry.value,
            "iterations": schedule.iterations,
            "etaMin": schedule.eta_min,
            "seed": args.seed,
        },
        {"initialStress": initial, "finalStress": final},
    )
    return EXIT_OK


def cmd_auto_pan(args) -> int:
    out = Path(args.out)
    g = _load_graph(args.graph)
    layout_obj = load_json(args.layout)
    layout = layout_from_json(layout_obj)
    cfg = PanSearchConfig(
        samples=args.samples,
        seed=args.seed,
        mask_band_pct=args.band_pct,
        raster_width=args.raster_width,
        raster_height=args.raster_height,
        keep_scores=args.keep_scores,
    )
    if args.projection == "torus":
        result = auto_pan_torus(g, layout)
    else:
        kind = PROJECTION_NAMES[args.projection]
        result = auto_pan_sphere(g, layout, kind, cfg)
        if args.dump_mask:
            dump_masked_bitmap(g, layout, result.best_rotation, cfg, args.dump_mask)
    layout_obj["pan"] = {"projection": args.projection, **result.to_json()}
    dump_json(layout_obj, str(out))
    _write_manifest(
        out,
        "auto-pan",
        {
            "graph": Path(args.graph).name,
            "layout": Path(args.layout).name,
            "projection": args.projection,
            "samples": cfg.samples,
            "seed": cfg.seed,
            "bandPct": cfg.mask_band_pct,
            "raster": [cfg.raster_width, cfg.raster_height],
        },
        {"bestScore": result.best_score, "identityScore": result.identity_score},
    )
    return EXIT_OK


def _rotation_from(layout_obj: dict, args) -> RotationTriple:
    if args.rotation is not None:
        return RotationTriple(*args.rotation)
    pan = layout_obj.get("pan")
    if pan and pan.get("bestRotation"):
        return RotationTriple(*pan["bestRotation"])
    return RotationTriple()


def _offset_from(layout_obj: dict, args) -> tuple[float, float]:
    if args.offset is not None:
        return (args.offset[0], args.offset[1])
    pan = layout_obj.get("pan")
    if pan and pan.get("bestOffset"):
        return tuple(pan["bestOffset"])
    return (0.0, 0.0)


def cmd_render(args) -> int:
    out = Path(args.out)
    rspec = RenderSpec(
        stroke_width=args.stroke_width,
        node_radius=args.node_radius,
        show_graticule=args.graticule,
        highlight_nodes=tuple(args.highlight_nodes or ()),
    )
    if args.geojson:
        if args.graph:
            raise WrapmapError("render takes either --geojson or --graph, not both")
        kind = PROJECTION_NAMES[args.projection]
        spec = ProjectionSpec(kind, args.width, args.height, RotationTriple(*(args.rotation or (0, 0, 0))))
        scene = SphereScene(spec)
        content = GeoJsonContent((load_json(args.geojson),))
    else:
        if not args.graph or not args.layout:
            raise WrapmapError("render needs --graph and --layout (or --geojson)")
        g = _load_graph(args.graph)
        layout_obj = load_json(args.layout)
        layout = layout_from_json(layout_obj)
        if layout.geometry is Geometry.SPHERE:
            kind = PROJECTION_NAMES[args.projection]
            spec = ProjectionSpec(kind, args.width, args.height, _rotation_from(layout_obj, args))
            scene = SphereScene(spec)
        elif layout.geometry is Geometry.TORUS:
            scene = TorusScene(args.width, args.height, _offset_from(layout_obj, args))
        else:
            scene = PlaneScene(args.width, args.height)
        content = GraphContent(g, layout)
    svg = render_svg(scene, content, rspec)
    out.write_text(svg, encoding="utf-8")
    stats: dict = {"bytes": len(svg)}
    if args.pgm:
        if isinstance(content, GeoJsonContent):
            raise WrapmapError("--pgm needs graph content")
        bitmap = rasterize_edges(scene, content, (args.width, args.height))
        save_bitmap(bitmap, args.pgm)
        stats["pgmPixels"] = int(bitmap.sum())
    _write_manifest(
        out,
        "render",
        {
            "graph": Path(args.graph).name if args.graph else None,
            "layout": Path(args.layout).name if args.layout else None,
            "geojson": Path(args.geojson).name if args.geojson else None,
            "projection": args.projection,
            "width": args.width,
            "height": args.height,
            "rotation": args.rotation,
            "offset": args.offset,
            "graticule": args.graticule,
        },
        stats,
    )
    return EXIT_OK


def cmd_gen_trials(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    trials = []
    seed = args.seed
    if args.task in ("distance", "area", "direction"):
        count = args.count if args.count is not None else STUDY_DEFAULT_TRIALS[args.task]
        for k in range(count):
            if args.task == "direction":
                trials.append(generate_direction_trial(seed + k))
            else:
                if args.difficulty == "mixed":
                    difficulty = "easy" if k < (count + 1) // 2 else "hard"
                else:
                    difficulty = args.difficulty
                gen = generate_distance_trial if args.task == "distance" else generate_area_trial
                trials.append(gen(difficulty, seed + k))
        if args.attention:
            if args.task == "direction":
                trials.append(generate_direction_trial(seed + count, attention=True))
            else:
                gen = generate_distance_trial if args.task == "distance" else generate_area_trial
                trials.append(gen("attention", seed + count))
        orders = williams_orders(5)
    elif args.task in ("cluster-count", "shortest-path"):
        geometry = _geometry(args.geometry)
        projection = PROJECTION_NAMES[args.projection] if args.projection else None
        if args.task == "cluster-count":
            presets = args.presets or ["small-easy", "large-easy", "small-hard", "large-hard"]
            reps = args.count if args.count is not None else 5
            k = 0
            for preset in presets:
                for _ in range(reps):
                    trials.append(
                        generate_network_trial(
                            "cluster-count", preset, geometry, seed + k,
                            projection=projection, pan_samples=args.pan_samples,
                        )
                    )
                    k += 1
            if args.attention:
                trials.append(
                    generate_network_trial(
                        "cluster-count", presets[0], geometry, seed + k,
                        projection=projection, attention=True, pan_samples=args.pan_samples,
                    )
                )
        else:
            presets = args.presets or ["path-easy", "path-hard"]
            reps = args.count if args.count is not None else 2
            k = 0
            for preset in presets:
                for length in (1, 2, 3, 4):
                    for _ in range(reps):
                        trials.append(
                            generate_network_trial(
                                "shortest-path", preset, geometry, seed + k,
                                projection=projection, path_length=length,
                                pan_samples=args.pan_samples,
                            )
                        )
                        k += 1
            if args.attention:
                trials.append(
                    generate_network_trial(
                        "shortest-path", presets[0], geometry, seed + k,
                        projection=projection, attention=True, pan_samples=args.pan_samples,
                    )
                )
        orders = [list(p) for p in itertools.permutations(range(4))]
    else:
        raise WrapmapError(f"unknown task {args.task!r}")

    names = []
    for idx, trial in enumerate(trials):
        name = f"trial-{idx:03d}.json"
        dump_json(trial.to_json(), str(out_dir / name))
        names.append(name)
    dump_json(
        {
            "schemaVersion": 1,
            "task": args.task,
            "seed": args.seed,
            "trials": names,
            "attentionIncluded": bool(args.attention),
            "orders": orders,
        },
        str(out_dir / "manifest.json"),
    )
    return EXIT_OK


def cmd_summarize(args) -> int:
    out = Path(args.out)
    pairs = []
    for preset in args.presets:
        spec = CLUSTERED_PRESETS[preset]
        for k in range(args.count):
            g = generate_clustered(spec, args.seed + k)
            layout = sgd_layout(g, Geometry.SPHERE, SgdSchedule(seed=args.seed + k))
            pairs.append((g, layout))
    cfg = PanSearchConfig(
        samples=args.samples,
        seed=args.seed,
        mask_band_pct=args.band_pct,
        raster_width=args.raster_width,
        raster_height=args.raster_height,
    )
    summary = summarize_autopan(pairs, cfg, random_count=args.random_rotations, random_seed=args.seed + 99991)
    dump_json(summary, str(out))
    _write_manifest(
        out,
        "summarize",
        {
            "presets": list(args.presets),
            "count": args.count,
            "samples": args.samples,
            "seed": args.seed,
            "randomRotations": args.random_rotations,
        },
        summary,
    )
    ortho = summary["orthographic"]
    ee = summary["equalEarth"]
    print(f"graphs: {summary['graphs']}")
    print(
        f"orthographic crossings: no-pan mean {ortho['randomMeanCrossings']:.2f} "
        f"-> auto-pan {ortho['autoPanMeanCrossings']:.2f}"
    )
    print(
        f"equal-earth boundary pixels: no-pan mean {ee['randomMeanBoundaryPixels']:.2f} "
        f"-> auto-pan {ee['autoPanMeanBoundaryPixels']:.2f} (higher = less wrapping)"
    )
    return EXIT_OK


def cmd_golden_vectors(args) -> int:
    out = Path(args.out)
    rng = np.random.default_rng(args.seed)
    kinds = list(ProjectionKind)
    per_kind = args.count // len(kinds)
    vectors = []
    for kind in kinds:
        for _ in range(per_kind):
            rot = RotationTriple(
                float(rng.uniform(-180, 180)),
                float(rng.uniform(-90, 90)),
                float(rng.uniform(-180, 180)),
            )
            v = rng.normal(size=3)
            v /= np.linalg.norm(v)
            p = vec_to_geo(v)
            spec = ProjectionSpec(kind, args.width, args.height, rot)
            pt = project(spec, p)
            vectors.append(
                {
                    "kind": kind.value,
                    "canvas": [args.width, args.height],
                    "rotation": [rot.lam, rot.phi, rot.gam],
                    "lon": p.lon,
                    "lat": p.lat,
                    "x": pt.x,
                    "y": pt.y,
                    "face": pt.face.value if pt.face else None,
                }
            )
    dump_json({"schemaVersion": 1, "seed": args.seed, "vectors": vectors}, str(out))
    _write_manifest(out, "golden-vectors", {"count": args.count, "seed": args.seed,
                                            "width": args.width, "height": args.height})
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="wrapmap", description=__doc__)
    parser.add_argument("--version", action="version", version=f"wrapmap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-graph", help="generate a corpus graph")
    p.add_argument("--preset", required=True,
                   choices=sorted([*CLUSTERED_PRESETS, *SCALE_FREE_PRESETS]))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_graph)

    p = sub.add_parser("layout", help="stress-minimized layout of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--geometry", required=True, choices=[g.value for g in Geometry])
    p.add_argument("--iterations", type=int, default=60)
    p.add_argument("--eta-min", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("auto-pan", help="pick the wrap-minimizing rotation or translation")
    p.add_argument("--graph", required=True)
    p.add_argument("--layout", required=True)
    p.add_argument("--projection", required=True, choices=["orthographic", "equal-earth", "torus"])
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--band-pct", type=float, default=3.0)
    p.add_argument("--raster-width", type=int, default=900)
    p.add_argument("--raster-height", type=int, default=317)
    p.add_argument("--keep-scores", action="store_true")
    p.add_argument("--dump-mask", help="write the masked band raster as P4")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_auto_pan)

    p = sub.add_parser("render", help="render to SVG (and optionally a P4 edge raster)")
    p.add_argument("--graph")
    p.add_argument("--layout")
    p.add_argument("--geojson")
    p.add_argument("--projection", default="equal-earth", choices=sorted(PROJECTION_NAMES))
    p.add_argument("--width", type=int, default=900)
    p.add_argument("--height", type=int, default=317)
    p.add_argument("--rotation", type=float, nargs=3, metavar=("LAM", "PHI", "GAM"))
    p.add_argument("--offset", type=float, nargs=2, metavar=("DU", "DV"))
    p.add_argument("--stroke-width", type=float, default=1.0)
    p.add_argument("--node-radius", type=float, default=3.0)
    p.add_argument("--graticule", action="store_true")
    p.add_argument("--highlight-nodes", type=int, nargs="*")
    p.add_argument("--pgm", help="also write the edge raster as P4")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("gen-trials", help="generate study trials plus a batch manifest")
    p.add_argument("--task", required=True,
                   choices=["distance", "area", "direction", "cluster-count", "shortest-path"])
    p.add_argument("--difficulty", default="mixed", choices=["easy", "hard", "mixed"])
    p.add_argument("--count", type=int, help="trial count (geo tasks) or repetitions (network tasks)")
    p.add_argument("--attention", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--geometry", default="sphere", choices=[g.value for g in Geometry])
    p.add_argument("--projection", choices=sorted(PROJECTION_NAMES))
    p.add_argument("--presets", nargs="*")
    p.add_argument("--pan-samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_gen_trials)

    p = sub.add_parser("summarize", help="no-pan vs auto-pan means over generated corpora")
    p.add_argument("--presets", nargs="+", default=["small-easy", "small-hard"])
    p.add_argument("--count", type=int, default=5, help="graphs per preset")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--random-rotations", type=int, default=10)
    p.add_argument("--band-pct", type=float, default=3.0)
    p.add_argument("--raster-width", type=int, default=900)
    p.add_argument("--raster-height", type=int, default=317)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("golden-vectors", help="projection test vectors for external viewers")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--width", type=int, default=700)
    p.add_argument("--height", type=int, default=350)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_golden_vectors)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse help/version/usage paths
        return int(exc.code or 0)
    try:
        return args.func(args)
    except WrapmapError as exc:
        print(f"wrapmap: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
