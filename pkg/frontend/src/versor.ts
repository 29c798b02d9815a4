/** Versor dragging: the geographic point grabbed at drag start follows the
 * cursor; the rotation update is the minimal rotation taking the grabbed
 * point's view direction at drag start to the view direction under the
 * cursor. */

import {
  Mat3,
  RotationTriple,
  Vec3,
  matFromQuat,
  matMul,
  matVec,
  quatBetween,
  rotationFromMatrix,
  rotationMatrix,
  transpose,
} from "./geom.js";
import { ProjectionSpec, invertToRotatedVec } from "./projections.js";

export interface DragState {
  startMatrix: Mat3;
  grabbedGeoVec: Vec3;
}

/** Begin a drag at a screen position; null when outside the projection. */
export function beginDrag(spec: ProjectionSpec, x: number, y: number): DragState | null {
  const u = invertToRotatedVec(spec, x, y);
  if (!u) return null;
  const m = rotationMatrix(spec.rotation);
  return { startMatrix: m, grabbedGeoVec: matVec(transpose(m), u) };
}

/** Rotation placing the grabbed point under the cursor; null when the cursor
 * is outside the projection (callers keep the previous rotation). */
export function dragRotation(
  spec: Omit<ProjectionSpec, "rotation">,
  state: DragState,
  x: number,
  y: number,
): RotationTriple | null {
  const target = invertToRotatedVec({ ...spec, rotation: [0, 0, 0] }, x, y);
  if (!target) return null;
  const from = matVec(state.startMatrix, state.grabbedGeoVec);
  const q = quatBetween(from, target);
  return rotationFromMatrix(matMul(matFromQuat(q), state.startMatrix));
}
