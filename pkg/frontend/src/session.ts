/** Immutable viewer sessions built from the pipeline's JSON artifacts. */

import { RotationTriple, geoToVec, vecToGeo, Vec3 } from "./geom.js";
import { ProjectionKind } from "./projections.js";

export type GeometryName = "plane" | "sphere" | "torus";
export type InteractionMode = "static" | "interactive";

export interface Session {
  geometry: GeometryName;
  canvas: [number, number];
  projection: ProjectionKind;
  rotation: RotationTriple;
  /** torus pan state in pixels, wrapped to the canvas */
  offsetPx: [number, number];
  mode: InteractionMode;
  /** sphere node unit vectors, torus uv, or plane xy */
  nodes: number[][];
  edges: [number, number][];
  highlightNodes: number[];
  highlightEdges: [number, number][];
  /** geographic trial overlays (lon/lat payload passthrough) */
  trialPayload: Record<string, unknown> | null;
}

export interface ArtifactFiles {
  graph?: any;
  layout?: any;
  trial?: any;
}

export interface LoadOptions {
  mode?: InteractionMode;
  canvas?: [number, number];
  projection?: ProjectionKind;
}

function requireSchema(obj: any, label: string): void {
  if (!obj || obj.schemaVersion !== 1) {
    throw new Error(`${label}: unsupported schemaVersion ${obj?.schemaVersion}`);
  }
}

function edgesOf(graph: any): [number, number][] {
  return (graph.edges as [number, number][]).map(([i, j]) => [i, j]);
}

const DEFAULT_CANVAS: Record<GeometryName, [number, number]> = {
  sphere: [900, 317],
  torus: [650, 650],
  plane: [650, 650],
};

export function loadArtifacts(files: ArtifactFiles, options: LoadOptions = {}): Session {
  const mode = options.mode ?? "interactive";
  let geometry: GeometryName;
  let nodes: number[][];
  let edges: [number, number][];
  let pan: any = null;
  let highlightNodes: number[] = [];
  let highlightEdges: [number, number][] = [];
  let trialPayload: Record<string, unknown> | null = null;

  if (files.trial) {
    requireSchema(files.trial, "trial");
    const payload = files.trial.payload ?? {};
    if (payload.graph && payload.layout) {
      requireSchema(payload.graph, "trial graph");
      geometry = payload.layout.geometry as GeometryName;
      edges = edgesOf(payload.graph);
      const positions = payload.layout.positions as number[][];
      nodes =
        geometry === "sphere"
          ? positions.map(([lon, lat]) => geoToVec(lon, lat) as unknown as number[])
          : positions.map((p) => [...p]);
      pan = payload.pan ?? null;
      highlightNodes = (payload.highlightNodes as number[]) ?? [];
      highlightEdges = ((payload.highlightEdges as [number, number][]) ?? []).map(([i, j]) => [i, j]);
    } else {
      // purely geographic trial: render over an empty graph
      geometry = "sphere";
      nodes = [];
      edges = [];
      trialPayload = payload;
    }
  } else {
    if (!files.layout || !files.graph) {
      throw new Error("loadArtifacts needs a trial, or a graph plus a layout");
    }
    requireSchema(files.layout, "layout");
    requireSchema(files.graph, "graph");
    geometry = files.layout.geometry as GeometryName;
    edges = edgesOf(files.graph);
    nodes = (files.layout.positions as number[][]).map((p) => [...p]);
    pan = files.layout.pan ?? null;
  }

  const canvas = options.canvas ?? DEFAULT_CANVAS[geometry];
  let rotation: RotationTriple = [0, 0, 0];
  let offsetPx: [number, number] = [0, 0];
  let projection: ProjectionKind = options.projection ?? "equal-earth";
  if (pan) {
    if (pan.bestRotation) rotation = pan.bestRotation as RotationTriple;
    if (pan.bestOffset) {
      offsetPx = [pan.bestOffset[0] * canvas[0], pan.bestOffset[1] * canvas[1]];
    }
    if (!options.projection && pan.projection && pan.projection !== "torus") {
      projection =
        pan.projection === "orthographic" ? "orthographic-hemisphere" : (pan.projection as ProjectionKind);
    }
  }

  return {
    geometry,
    canvas,
    projection,
    rotation,
    offsetPx,
    mode,
    nodes,
    edges,
    highlightNodes,
    highlightEdges,
    trialPayload,
  };
}

/** New session with the given rotation; ignored in static mode. */
export function withRotation(session: Session, rotation: RotationTriple): Session {
  if (session.mode === "static") return session;
  return { ...session, rotation };
}

/** Torus pan by a pixel delta (content follows the cursor). The delta is
 * reduced modulo the canvas span before adding, so a pan by exactly one
 * canvas width reproduces the state bit-identically. */
export function withPanBy(session: Session, dxPx: number, dyPx: number): Session {
  if (session.mode === "static" || session.geometry !== "torus") return session;
  const [w, h] = session.canvas;
  const wrap = (v: number, span: number) => {
    let r = v % span; // float remainder is exact
    if (r < 0) r += span;
    return r === span ? 0 : r;
  };
  return {
    ...session,
    offsetPx: [
      wrap(session.offsetPx[0] + (dxPx % w), w),
      wrap(session.offsetPx[1] + (dyPx % h), h),
    ],
  };
}

export function sphereNodeVec(session: Session, index: number): Vec3 {
  const n = session.nodes[index];
  return [n[0], n[1], n[2]];
}

export function sphereNodeGeo(session: Session, index: number): [number, number] {
  return vecToGeo(sphereNodeVec(session, index));
}
