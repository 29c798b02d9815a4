import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { buildFrame, nodeScreenPositions, rasterizeFrame } from "../src/frame.js";
import { loadArtifacts, withPanBy } from "../src/session.js";

const graph = JSON.parse(readFileSync(new URL("./fixtures/graph.json", import.meta.url), "utf-8"));
const layoutTorus = JSON.parse(
  readFileSync(new URL("./fixtures/layout_torus.json", import.meta.url), "utf-8"),
);

function torusSession() {
  return loadArtifacts({ graph, layout: layoutTorus }, { canvas: [650, 650] });
}

describe("torus panning", () => {
  it("reproduces the frame bit-identically after a full-width pan", () => {
    const session = torusSession();
    const before = rasterizeFrame(buildFrame(session), 650, 650);
    const panned = withPanBy(withPanBy(session, 650, 0), 0, 650);
    expect(panned.offsetPx).toEqual(session.offsetPx);
    const after = rasterizeFrame(buildFrame(panned), 650, 650);
    expect(Buffer.compare(Buffer.from(before), Buffer.from(after))).toBe(0);
    expect(before.some((v) => v === 1)).toBe(true);
  });

  it("pan followed by its inverse is the identity", () => {
    const session = torusSession();
    const roundTrip = withPanBy(withPanBy(session, 123, -45), -123, 45);
    expect(roundTrip.offsetPx[0]).toBeCloseTo(session.offsetPx[0], 9);
    expect(roundTrip.offsetPx[1]).toBeCloseTo(session.offsetPx[1], 9);
  });

  it("nodes track the cursor delta within 1 px (modulo wrap)", () => {
    const session = torusSession();
    const before = nodeScreenPositions(session);
    const dx = 37;
    const dy = -12;
    const after = nodeScreenPositions(withPanBy(session, dx, dy));
    for (let i = 0; i < before.length; i++) {
      const gotDx = ((after[i][0] - before[i][0] - dx) % 650 + 650) % 650;
      const gotDy = ((after[i][1] - before[i][1] - dy) % 650 + 650) % 650;
      expect(Math.min(gotDx, 650 - gotDx)).toBeLessThanOrEqual(1);
      expect(Math.min(gotDy, 650 - gotDy)).toBeLessThanOrEqual(1);
    }
  });

  it("wrapped edges are clipped back into the viewport", () => {
    const session = torusSession();
    for (const prim of buildFrame(session)) {
      if (prim.t === "poly") {
        for (const [x, y] of prim.pts) {
          expect(x).toBeGreaterThanOrEqual(-1e-9);
          expect(x).toBeLessThanOrEqual(650 + 1e-9);
          expect(y).toBeGreaterThanOrEqual(-1e-9);
          expect(y).toBeLessThanOrEqual(650 + 1e-9);
        }
      }
    }
  });
});
