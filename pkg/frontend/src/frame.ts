/** Frame building: a pure function from (session) to a display list, plus a
 * deterministic software rasterizer used by the tests. */

import { DEG, Vec3, geoToVec, matVec, rotationMatrix, slerp, greatCircleDistance } from "./geom.js";
import {
  ProjectionSpec,
  ScreenPoint,
  domainOutline,
  projectRotatedVec,
} from "./projections.js";
import { Session } from "./session.js";

export type Primitive =
  | { t: "poly"; pts: [number, number][]; color: string; width: number }
  | { t: "circle"; x: number; y: number; r: number; color: string };

const OUTLINE = "#94a3b8";
const EDGE = "#475569";
const NODE = "#1f2937";
const HIGHLIGHT = "#dc2626";
const GEO_STROKE = "#2563eb";

const MAX_STEP = 2 * DEG;

export function projectionSpecOf(session: Session): ProjectionSpec {
  return {
    kind: session.projection,
    width: session.canvas[0],
    height: session.canvas[1],
    rotation: session.rotation,
  };
}

function splitAtJumps(spec: ProjectionSpec, pts: ScreenPoint[]): [number, number][][] {
  const out: [number, number][][] = [];
  let current: [number, number][] = [];
  let prev: ScreenPoint | null = null;
  for (const p of pts) {
    if (prev) {
      const jump = p.face !== prev.face || Math.hypot(p.x - prev.x, p.y - prev.y) > spec.width / 2;
      if (jump) {
        if (current.length >= 2) out.push(current);
        current = [];
      }
    }
    current.push([p.x, p.y]);
    prev = p;
  }
  if (current.length >= 2) out.push(current);
  return out;
}

function geodesicSegments(spec: ProjectionSpec, a: Vec3, b: Vec3): [number, number][][] {
  const m = rotationMatrix(spec.rotation);
  const ra = matVec(m, a);
  const rb = matVec(m, b);
  const angle = greatCircleDistance(ra, rb);
  const steps = Math.max(1, Math.ceil(angle / MAX_STEP));
  const pts: ScreenPoint[] = [];
  for (let k = 0; k <= steps; k++) {
    pts.push(projectRotatedVec(spec, slerp(ra, rb, k / steps)));
  }
  return splitAtJumps(spec, pts);
}

function wrapHalf(x: number): number {
  return ((x + 0.5) % 1 + 1) % 1 - 0.5;
}

function clipSegment(
  x0: number, y0: number, x1: number, y1: number, w: number, h: number,
): [number, number, number, number] | null {
  const dx = x1 - x0;
  const dy = y1 - y0;
  let t0 = 0;
  let t1 = 1;
  const edges: [number, number][] = [
    [-dx, x0],
    [dx, w - x0],
    [-dy, y0],
    [dy, h - y0],
  ];
  for (const [p, q] of edges) {
    if (p === 0) {
      if (q < 0) return null;
      continue;
    }
    const r = q / p;
    if (p < 0) {
      if (r > t1) return null;
      if (r > t0) t0 = r;
    } else {
      if (r < t0) return null;
      if (r < t1) t1 = r;
    }
  }
  return [x0 + t0 * dx, y0 + t0 * dy, x0 + t1 * dx, y0 + t1 * dy];
}

export function nodeScreenPositions(session: Session): [number, number][] {
  const [w, h] = session.canvas;
  if (session.geometry === "sphere") {
    const spec = projectionSpecOf(session);
    const m = rotationMatrix(spec.rotation);
    return session.nodes.map((n) => {
      const p = projectRotatedVec(spec, matVec(m, [n[0], n[1], n[2]]));
      return [p.x, p.y];
    });
  }
  if (session.geometry === "torus") {
    const du = session.offsetPx[0] / w;
    const dv = session.offsetPx[1] / h;
    return session.nodes.map(([u, v]) => {
      const uu = ((u + du) % 1 + 1) % 1;
      const vv = ((v + dv) % 1 + 1) % 1;
      return [uu * w, vv * h];
    });
  }
  // plane: fit the bounding box with a margin
  const margin = 20;
  let loX = Infinity, loY = Infinity, hiX = -Infinity, hiY = -Infinity;
  for (const [x, y] of session.nodes) {
    loX = Math.min(loX, x); hiX = Math.max(hiX, x);
    loY = Math.min(loY, y); hiY = Math.max(hiY, y);
  }
  const spanX = Math.max(hiX - loX, 1e-9);
  const spanY = Math.max(hiY - loY, 1e-9);
  const scale = Math.min((w - 2 * margin) / spanX, (h - 2 * margin) / spanY);
  const cx = (loX + hiX) / 2;
  const cy = (loY + hiY) / 2;
  return session.nodes.map(([x, y]) => [w / 2 + (x - cx) * scale, h / 2 + (y - cy) * scale]);
}

export function buildFrame(session: Session, nodeRadius = 3): Primitive[] {
  const prims: Primitive[] = [];
  const [w, h] = session.canvas;
  const highlightEdges = new Set(session.highlightEdges.map(([i, j]) => `${Math.min(i, j)}:${Math.max(i, j)}`));
  const highlightNodes = new Set(session.highlightNodes);

  if (session.geometry === "sphere") {
    const spec = projectionSpecOf(session);
    for (const ring of domainOutline(spec)) {
      prims.push({ t: "poly", pts: ring, color: OUTLINE, width: 1 });
    }
    for (const [i, j] of session.edges) {
      const color = highlightEdges.has(`${Math.min(i, j)}:${Math.max(i, j)}`) ? HIGHLIGHT : EDGE;
      const a = session.nodes[i];
      const b = session.nodes[j];
      for (const pts of geodesicSegments(spec, [a[0], a[1], a[2]], [b[0], b[1], b[2]])) {
        prims.push({ t: "poly", pts, color, width: 1 });
      }
    }
    if (session.trialPayload) {
      trialOverlay(session, spec, prims);
    }
  } else if (session.geometry === "torus") {
    const du = session.offsetPx[0] / w;
    const dv = session.offsetPx[1] / h;
    for (const [i, j] of session.edges) {
      const color = highlightEdges.has(`${Math.min(i, j)}:${Math.max(i, j)}`) ? HIGHLIGHT : EDGE;
      const [ui0, vi0] = session.nodes[i];
      const [uj0, vj0] = session.nodes[j];
      const ui = ((ui0 + du) % 1 + 1) % 1;
      const vi = ((vi0 + dv) % 1 + 1) % 1;
      const su = wrapHalf(((uj0 + du) % 1 + 1) % 1 - ui);
      const sv = wrapHalf(((vj0 + dv) % 1 + 1) % 1 - vi);
      for (const ax of [-1, 0, 1]) {
        for (const ay of [-1, 0, 1]) {
          const seg = clipSegment(
            (ui + ax) * w, (vi + ay) * h, (ui + su + ax) * w, (vi + sv + ay) * h, w, h,
          );
          if (seg && (seg[0] !== seg[2] || seg[1] !== seg[3])) {
            prims.push({ t: "poly", pts: [[seg[0], seg[1]], [seg[2], seg[3]]], color, width: 1 });
          }
        }
      }
    }
  } else {
    const pts = nodeScreenPositions(session);
    for (const [i, j] of session.edges) {
      const color = highlightEdges.has(`${Math.min(i, j)}:${Math.max(i, j)}`) ? HIGHLIGHT : EDGE;
      prims.push({ t: "poly", pts: [pts[i], pts[j]], color, width: 1 });
    }
  }

  const nodePts = nodeScreenPositions(session);
  nodePts.forEach(([x, y], idx) => {
    prims.push({ t: "circle", x, y, r: nodeRadius, color: highlightNodes.has(idx) ? HIGHLIGHT : NODE });
  });
  return prims;
}

function trialOverlay(session: Session, spec: ProjectionSpec, prims: Primitive[]): void {
  const payload = session.trialPayload as any;
  const m = rotationMatrix(spec.rotation);
  const drawArc = (a: [number, number], b: [number, number]) => {
    const va = matVec(m, geoToVec(a[0], a[1]));
    const vb = matVec(m, geoToVec(b[0], b[1]));
    const angle = greatCircleDistance(va, vb);
    const steps = Math.max(1, Math.ceil(angle / MAX_STEP));
    const pts: ScreenPoint[] = [];
    for (let k = 0; k <= steps; k++) pts.push(projectRotatedVec(spec, slerp(va, vb, k / steps)));
    for (const seg of splitAtJumps(spec, pts)) prims.push({ t: "poly", pts: seg, color: GEO_STROKE, width: 1 });
  };
  const drawDot = (p: [number, number]) => {
    const v = matVec(m, geoToVec(p[0], p[1]));
    const s = projectRotatedVec(spec, v);
    prims.push({ t: "circle", x: s.x, y: s.y, r: 4, color: GEO_STROKE });
  };
  for (const key of ["pairA", "pairB"]) {
    if (payload[key]) {
      drawArc(payload[key][0], payload[key][1]);
      drawDot(payload[key][0]);
      drawDot(payload[key][1]);
    }
  }
  for (const key of ["polygonA", "polygonB"]) {
    if (payload[key]) {
      const ring = payload[key] as [number, number][];
      for (let k = 0; k < ring.length; k++) drawArc(ring[k], ring[(k + 1) % ring.length]);
    }
  }
  if (payload.pointA && payload.arrowHead) {
    drawArc(payload.pointA, payload.arrowHead);
    drawDot(payload.pointA);
    drawDot(payload.pointB);
  }
}

// ---------------------------------------------------------------------------
// Software raster (tests): integer Bresenham strokes, midpoint circles.
// ---------------------------------------------------------------------------

export function rasterizeFrame(prims: Primitive[], w: number, h: number): Uint8Array {
  const buf = new Uint8Array(w * h);
  const plot = (x: number, y: number) => {
    if (x >= 0 && x < w && y >= 0 && y < h) buf[y * w + x] = 1;
  };
  const line = (x0: number, y0: number, x1: number, y1: number) => {
    const dx = Math.abs(x1 - x0);
    const dy = Math.abs(y1 - y0);
    const sx = x1 >= x0 ? 1 : -1;
    const sy = y1 >= y0 ? 1 : -1;
    if (dx >= dy) {
      let err = 2 * dy - dx;
      let y = y0;
      for (let k = 0; k <= dx; k++) {
        plot(x0 + sx * k, y);
        if (err >= 0) {
          y += sy;
          err -= 2 * dx;
        }
        err += 2 * dy;
      }
    } else {
      let err = 2 * dx - dy;
      let x = x0;
      for (let k = 0; k <= dy; k++) {
        plot(x, y0 + sy * k);
        if (err >= 0) {
          x += sx;
          err -= 2 * dy;
        }
        err += 2 * dx;
      }
    }
  };
  const px = (v: number) => Math.floor(v + 0.5);
  for (const p of prims) {
    if (p.t === "poly") {
      for (let k = 1; k < p.pts.length; k++) {
        line(px(p.pts[k - 1][0]), px(p.pts[k - 1][1]), px(p.pts[k][0]), px(p.pts[k][1]));
      }
    } else {
      // midpoint circle
      const cx = px(p.x);
      const cy = px(p.y);
      const r = Math.max(1, Math.round(p.r));
      let x = r;
      let y = 0;
      let err = 1 - r;
      while (x >= y) {
        plot(cx + x, cy + y); plot(cx + y, cy + x);
        plot(cx - y, cy + x); plot(cx - x, cy + y);
        plot(cx - x, cy - y); plot(cx - y, cy - x);
        plot(cx + y, cy - x); plot(cx + x, cy - y);
        y += 1;
        if (err < 0) err += 2 * y + 1;
        else {
          x -= 1;
          err += 2 * (y - x) + 1;
        }
      }
    }
  }
  return buf;
}
