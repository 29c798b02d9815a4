/** Unit-sphere math: geographic conversion, rotation triples, quaternions. */

export type Vec3 = [number, number, number];
export type RotationTriple = [number, number, number]; // lam, phi, gam in degrees
export type Mat3 = [Vec3, Vec3, Vec3]; // row-major

export const DEG = Math.PI / 180;

export function normalizeLon(lon: number): number {
  const wrapped = ((((lon + 180) % 360) + 360) % 360) - 180;
  return wrapped;
}

export function clamp(x: number, lo = -1, hi = 1): number {
  return x < lo ? lo : x > hi ? hi : x;
}

export function geoToVec(lonDeg: number, latDeg: number): Vec3 {
  const lon = lonDeg * DEG;
  const lat = latDeg * DEG;
  const cl = Math.cos(lat);
  return [cl * Math.cos(lon), cl * Math.sin(lon), Math.sin(lat)];
}

export function vecToGeo(v: Vec3): [number, number] {
  const lat = Math.asin(clamp(v[2])) / DEG;
  if (v[0] === 0 && v[1] === 0) return [0, lat];
  return [Math.atan2(v[1], v[0]) / DEG, lat];
}

export function norm(v: Vec3): number {
  return Math.hypot(v[0], v[1], v[2]);
}

export function unit(v: Vec3): Vec3 {
  const n = norm(v);
  return [v[0] / n, v[1] / n, v[2] / n];
}

export function dot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

export function cross(a: Vec3, b: Vec3): Vec3 {
  return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
}

export function greatCircleDistance(a: Vec3, b: Vec3): number {
  return Math.atan2(norm(cross(a, b)), clamp(dot(a, b)));
}

/** Rx(gam) @ Ry(-phi) @ Rz(lam), matching the data-producing pipeline. */
export function rotationMatrix(r: RotationTriple): Mat3 {
  const [lam, phi, gam] = [r[0] * DEG, r[1] * DEG, r[2] * DEG];
  const cl = Math.cos(lam), sl = Math.sin(lam);
  const cp = Math.cos(phi), sp = Math.sin(phi);
  const cg = Math.cos(gam), sg = Math.sin(gam);
  return [
    [cp * cl, -cp * sl, -sp],
    [cg * sl - sg * sp * cl, cg * cl + sg * sp * sl, -sg * cp],
    [sg * sl + cg * sp * cl, sg * cl - cg * sp * sl, cg * cp],
  ];
}

export function matVec(m: Mat3, v: Vec3): Vec3 {
  return [
    m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
    m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
    m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
  ];
}

export function matMul(a: Mat3, b: Mat3): Mat3 {
  const out: Mat3 = [
    [0, 0, 0],
    [0, 0, 0],
    [0, 0, 0],
  ];
  for (let i = 0; i < 3; i++)
    for (let j = 0; j < 3; j++)
      out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
  return out;
}

export function transpose(m: Mat3): Mat3 {
  return [
    [m[0][0], m[1][0], m[2][0]],
    [m[0][1], m[1][1], m[2][1]],
    [m[0][2], m[1][2], m[2][2]],
  ];
}

/** Recover (lam, phi, gam); at gimbal lock gam folds into lam. */
export function rotationFromMatrix(m: Mat3): RotationTriple {
  const sp = clamp(-m[0][2]);
  const phi = Math.asin(sp) / DEG;
  const cp = Math.cos(phi * DEG);
  if (cp > 1e-12) {
    return [
      normalizeLon(Math.atan2(-m[0][1], m[0][0]) / DEG),
      normalizeLon(phi),
      normalizeLon(Math.atan2(-m[1][2], m[2][2]) / DEG),
    ];
  }
  return [normalizeLon(Math.atan2(m[1][0], m[1][1]) / DEG), normalizeLon(phi), 0];
}

export function slerp(a: Vec3, b: Vec3, t: number): Vec3 {
  const d = clamp(dot(a, b));
  const omega = Math.acos(d);
  if (omega < 1e-12) return [a[0], a[1], a[2]];
  const s = Math.sin(omega);
  const wa = Math.sin((1 - t) * omega) / s;
  const wb = Math.sin(t * omega) / s;
  return unit([wa * a[0] + wb * b[0], wa * a[1] + wb * b[1], wa * a[2] + wb * b[2]]);
}

export type Quat = [number, number, number, number]; // w, x, y, z

/** Minimal rotation taking unit vector a to unit vector b. */
export function quatBetween(a: Vec3, b: Vec3): Quat {
  const c = cross(a, b);
  const w = 1 + clamp(dot(a, b), -1, 1);
  if (w < 1e-12) {
    // antipodal: rotate half-turn about any perpendicular axis
    const axis = Math.abs(a[0]) < 0.9 ? cross(a, [1, 0, 0]) : cross(a, [0, 1, 0]);
    const u = unit(axis);
    return [0, u[0], u[1], u[2]];
  }
  const q: Quat = [w, c[0], c[1], c[2]];
  const n = Math.hypot(q[0], q[1], q[2], q[3]);
  return [q[0] / n, q[1] / n, q[2] / n, q[3] / n];
}

export function matFromQuat(q: Quat): Mat3 {
  const [w, x, y, z] = q;
  return [
    [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
    [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
    [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
  ];
}
