/** The five map projections, mirrored from the data-producing pipeline and
 * pinned to it by golden-vector tests (agreement within 0.5 px). */

import {
  DEG,
  RotationTriple,
  Vec3,
  clamp,
  geoToVec,
  matVec,
  normalizeLon,
  rotationMatrix,
  transpose,
  vecToGeo,
} from "./geom.js";

export type ProjectionKind =
  | "equirectangular"
  | "equal-earth"
  | "hammer"
  | "mollweide-hemisphere"
  | "orthographic-hemisphere";

export type Face = "west" | "east" | null;

export interface ProjectionSpec {
  kind: ProjectionKind;
  width: number;
  height: number;
  rotation: RotationTriple;
}

export interface ScreenPoint {
  x: number;
  y: number;
  face: Face;
}

export const GUTTER_FRACTION = 0.04;

const A1 = 1.340264;
const A2 = -0.081106;
const A3 = 0.000893;
const A4 = 0.003796;
const M = Math.sqrt(3) / 2;
const THETA_MAX = Math.PI / 3;
const SQRT2 = Math.SQRT2;

function eeDpoly(t2: number, t6: number): number {
  return A1 + 3 * A2 * t2 + t6 * (7 * A3 + 9 * A4 * t2);
}

function eeYpoly(theta: number, t2: number, t6: number): number {
  return theta * (A1 + A2 * t2 + t6 * (A3 + A4 * t2));
}

export function equalEarthForward(lon: number, lat: number): [number, number] {
  const theta = Math.asin(M * Math.sin(lat));
  const t2 = theta * theta;
  const t6 = t2 * t2 * t2;
  return [(lon * Math.cos(theta)) / (M * eeDpoly(t2, t6)), eeYpoly(theta, t2, t6)];
}

export function eeThetaFromY(y: number): number {
  let theta = y / A1;
  for (let i = 0; i < 25; i++) {
    const t2 = theta * theta;
    const t6 = t2 * t2 * t2;
    const delta = (eeYpoly(theta, t2, t6) - y) / eeDpoly(t2, t6);
    theta -= delta;
    if (Math.abs(delta) < 1e-10) break;
  }
  return theta;
}

export function hammerForward(lon: number, lat: number): [number, number] {
  const half = lon / 2;
  const coslat = Math.cos(lat);
  const denom = Math.sqrt(1 + coslat * Math.cos(half));
  return [(2 * SQRT2 * coslat * Math.sin(half)) / denom, (SQRT2 * Math.sin(lat)) / denom];
}

export function mollweideTheta(lat: number): number {
  if (Math.abs(lat) >= Math.PI / 2 - 1e-12) return Math.sign(lat) * (Math.PI / 2);
  const target = Math.PI * Math.sin(lat);
  let theta = lat;
  for (let i = 0; i < 25; i++) {
    const f = 2 * theta + Math.sin(2 * theta) - target;
    const fp = 2 + 2 * Math.cos(2 * theta);
    if (fp < 1e-12) break;
    const step = f / fp;
    theta -= step;
    if (Math.abs(step) < 1e-12) return theta;
  }
  let lo = -Math.PI / 2;
  let hi = Math.PI / 2;
  for (let i = 0; i < 80; i++) {
    const mid = 0.5 * (lo + hi);
    if (2 * mid + Math.sin(2 * mid) - target > 0) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

export function mollweideForward(lon: number, lat: number): [number, number] {
  const theta = mollweideTheta(lat);
  return [((2 * SQRT2) / Math.PI) * lon * Math.cos(theta), SQRT2 * Math.sin(theta)];
}

const EE_XMAX = Math.PI / (M * A1);
const EE_YMAX = equalEarthForward(0, Math.PI / 2)[1];

export interface Frame {
  scale: number;
  cx: number;
  cy: number;
  westCx: number;
  eastCx: number;
  discRho: number;
}

export function isHemispheric(kind: ProjectionKind): boolean {
  return kind === "mollweide-hemisphere" || kind === "orthographic-hemisphere";
}

export function canvasFrame(spec: ProjectionSpec): Frame {
  const cy = spec.height / 2;
  if (isHemispheric(spec.kind)) {
    const rho = spec.kind === "orthographic-hemisphere" ? 1 : SQRT2;
    const gutter = GUTTER_FRACTION * spec.width;
    const disc = Math.min((spec.width - gutter) / 2, spec.height);
    return {
      scale: disc / 2 / rho,
      cx: spec.width / 2,
      cy,
      westCx: spec.width / 2 - (disc + gutter) / 2,
      eastCx: spec.width / 2 + (disc + gutter) / 2,
      discRho: rho,
    };
  }
  const half: Record<string, [number, number]> = {
    equirectangular: [Math.PI, Math.PI / 2],
    "equal-earth": [EE_XMAX, EE_YMAX],
    hammer: [2 * SQRT2, SQRT2],
  };
  const [hx, hy] = half[spec.kind];
  return {
    scale: Math.min(spec.width / (2 * hx), spec.height / (2 * hy)),
    cx: spec.width / 2,
    cy,
    westCx: 0,
    eastCx: 0,
    discRho: 0,
  };
}

/** Project a vector already rotated into view space. */
export function projectRotatedVec(spec: ProjectionSpec, v: Vec3): ScreenPoint {
  const fr = canvasFrame(spec);
  if (!isHemispheric(spec.kind)) {
    const lon = Math.atan2(v[1], v[0]);
    const lat = Math.asin(clamp(v[2]));
    let nx: number;
    let ny: number;
    if (spec.kind === "equirectangular") {
      nx = lon;
      ny = lat;
    } else if (spec.kind === "equal-earth") {
      [nx, ny] = equalEarthForward(lon, lat);
    } else {
      [nx, ny] = hammerForward(lon, lat);
    }
    return { x: fr.cx + fr.scale * nx, y: fr.cy - fr.scale * ny, face: null };
  }
  const west = v[1] < 0;
  const w: Vec3 = west ? [-v[1], v[0], v[2]] : [v[1], -v[0], v[2]];
  let nx: number;
  let ny: number;
  if (spec.kind === "orthographic-hemisphere") {
    nx = w[1];
    ny = w[2];
  } else {
    const lam = Math.atan2(w[1], w[0]);
    const phi = Math.asin(clamp(w[2]));
    [nx, ny] = mollweideForward(lam, phi);
  }
  const cxd = west ? fr.westCx : fr.eastCx;
  return { x: cxd + fr.scale * nx, y: fr.cy - fr.scale * ny, face: west ? "west" : "east" };
}

export function project(spec: ProjectionSpec, lonDeg: number, latDeg: number): ScreenPoint {
  return projectRotatedVec(spec, matVec(rotationMatrix(spec.rotation), geoToVec(lonDeg, latDeg)));
}

/** Screen position back to a view-space unit vector (disc handling included);
 * null when outside the projection outline. */
export function invertToRotatedVec(spec: ProjectionSpec, x: number, y: number): Vec3 | null {
  const fr = canvasFrame(spec);
  if (!isHemispheric(spec.kind)) {
    const nx = (x - fr.cx) / fr.scale;
    const ny = (fr.cy - y) / fr.scale;
    let lon: number;
    let lat: number;
    if (spec.kind === "equirectangular") {
      if (Math.abs(nx) > Math.PI + 1e-9 || Math.abs(ny) > Math.PI / 2 + 1e-9) return null;
      lon = nx;
      lat = ny;
    } else if (spec.kind === "equal-earth") {
      const theta = eeThetaFromY(ny);
      if (Math.abs(theta) > THETA_MAX + 1e-9) return null;
      const t2 = theta * theta;
      const t6 = t2 * t2 * t2;
      lon = (M * nx * eeDpoly(t2, t6)) / Math.cos(theta);
      if (Math.abs(lon) > Math.PI + 1e-9) return null;
      lat = Math.asin(clamp(Math.sin(theta) / M));
    } else {
      if ((nx / (2 * SQRT2)) ** 2 + (ny / SQRT2) ** 2 > 1 + 1e-9) return null;
      const xi = nx / 2;
      const z = Math.hypot(xi, ny);
      if (z === 0) {
        lon = 0;
        lat = 0;
      } else {
        const c = 2 * Math.asin(clamp(z / 2));
        lon = 2 * Math.atan2(xi * Math.sin(c), z * Math.cos(c));
        lat = Math.asin(clamp((ny * Math.sin(c)) / z));
        if (Math.abs(lon) > Math.PI + 1e-9) return null;
      }
    }
    return geoToVec(lon / DEG, lat / DEG);
  }
  const rho2 = fr.discRho * fr.discRho;
  for (const [isWest, cxd] of [
    [true, fr.westCx],
    [false, fr.eastCx],
  ] as const) {
    const nx = (x - cxd) / fr.scale;
    const ny = (fr.cy - y) / fr.scale;
    if (nx * nx + ny * ny > rho2 * (1 + 1e-9)) continue;
    let w: Vec3;
    if (spec.kind === "orthographic-hemisphere") {
      const z2 = Math.max(1 - nx * nx - ny * ny, 0);
      w = [Math.sqrt(z2), nx, ny];
    } else {
      const theta = Math.asin(clamp(ny / SQRT2));
      const lat = Math.asin(clamp((2 * theta + Math.sin(2 * theta)) / Math.PI));
      const ct = Math.cos(theta);
      const lam = ct < 1e-12 ? 0 : (Math.PI * nx) / (2 * SQRT2 * ct);
      w = geoToVec(clamp(lam, -Math.PI / 2, Math.PI / 2) / DEG, lat / DEG);
    }
    return isWest ? [w[1], -w[0], w[2]] : [-w[1], w[0], w[2]];
  }
  return null;
}

export function invert(spec: ProjectionSpec, x: number, y: number): [number, number] | null {
  const v = invertToRotatedVec(spec, x, y);
  if (!v) return null;
  return vecToGeo(matVec(transpose(rotationMatrix(spec.rotation)), v));
}

export function insideDomain(spec: ProjectionSpec, x: number, y: number): boolean {
  return invertToRotatedVec(spec, x, y) !== null;
}

export function pairedHemisphereRotation(r: RotationTriple): RotationTriple {
  return [normalizeLon(r[0] + 180), normalizeLon(-r[1]), normalizeLon(-r[2])];
}

export function domainOutline(spec: ProjectionSpec, samples = 180): [number, number][][] {
  const fr = canvasFrame(spec);
  const toScreen = (nx: number, ny: number, cx: number): [number, number] => [
    cx + fr.scale * nx,
    fr.cy - fr.scale * ny,
  ];
  if (spec.kind === "equirectangular") {
    const w = Math.PI;
    const h = Math.PI / 2;
    return [[
      toScreen(-w, -h, fr.cx),
      toScreen(w, -h, fr.cx),
      toScreen(w, h, fr.cx),
      toScreen(-w, h, fr.cx),
      toScreen(-w, -h, fr.cx),
    ]];
  }
  if (spec.kind === "equal-earth") {
    const right: [number, number][] = [];
    for (let i = 0; i < samples; i++) {
      const th = -THETA_MAX + (2 * THETA_MAX * i) / (samples - 1);
      const t2 = th * th;
      const t6 = t2 * t2 * t2;
      right.push([(Math.PI * Math.cos(th)) / (M * eeDpoly(t2, t6)), eeYpoly(th, t2, t6)]);
    }
    const ring = right.concat(right.map(([x, y]) => [-x, y] as [number, number]).reverse());
    ring.push(ring[0]);
    return [ring.map(([x, y]) => toScreen(x, y, fr.cx))];
  }
  if (spec.kind === "hammer") {
    const ring: [number, number][] = [];
    for (let i = 0; i <= 2 * samples; i++) {
      const t = (2 * Math.PI * i) / (2 * samples);
      ring.push(toScreen(2 * SQRT2 * Math.cos(t), SQRT2 * Math.sin(t), fr.cx));
    }
    return [ring];
  }
  const out: [number, number][][] = [];
  for (const cx of [fr.westCx, fr.eastCx]) {
    const ring: [number, number][] = [];
    for (let i = 0; i <= 2 * samples; i++) {
      const t = (2 * Math.PI * i) / (2 * samples);
      ring.push(toScreen(fr.discRho * Math.cos(t), fr.discRho * Math.sin(t), cx));
    }
    out.push(ring);
  }
  return out;
}
