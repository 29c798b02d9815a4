import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { buildFrame, nodeScreenPositions } from "../src/frame.js";
import { loadArtifacts, withPanBy, withRotation } from "../src/session.js";

const read = (name: string) =>
  JSON.parse(readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf-8"));

const graph = read("graph.json");
const layoutSphere = read("layout_sphere.json");
const layoutTorus = read("layout_torus.json");
const layoutPlane = read("layout_plane.json");
const trialDirection = read("trial_direction.json");
const sceneSvg = readFileSync(new URL("./fixtures/scene_sphere.svg", import.meta.url), "utf-8");

describe("loadArtifacts", () => {
  it("loads a sphere layout with its auto-pan rotation", () => {
    const s = loadArtifacts({ graph, layout: layoutSphere }, { canvas: [700, 350] });
    expect(s.geometry).toBe("sphere");
    expect(s.projection).toBe("equal-earth");
    expect(s.rotation).toEqual(layoutSphere.pan.bestRotation);
    expect(s.nodes.length).toBe(graph.nodes);
  });

  it("loads a torus layout with its pan offset in pixels", () => {
    const s = loadArtifacts({ graph, layout: layoutTorus }, { canvas: [650, 650] });
    expect(s.offsetPx[0]).toBeCloseTo(layoutTorus.pan.bestOffset[0] * 650, 9);
  });

  it("loads a geographic trial without a graph", () => {
    const s = loadArtifacts({ trial: trialDirection });
    expect(s.geometry).toBe("sphere");
    expect(s.nodes.length).toBe(0);
    const prims = buildFrame(s);
    expect(prims.length).toBeGreaterThan(1); // outline plus trajectory overlay
  });

  it("rejects unknown schema versions", () => {
    const bad = { ...layoutSphere, schemaVersion: 2 };
    expect(() => loadArtifacts({ graph, layout: bad })).toThrow(/schemaVersion/);
    const badTrial = { ...trialDirection, schemaVersion: 99 };
    expect(() => loadArtifacts({ trial: badTrial })).toThrow(/schemaVersion/);
  });

  it("needs either a trial or a graph plus layout", () => {
    expect(() => loadArtifacts({ graph })).toThrow();
  });
});

describe("static mode", () => {
  it("ignores rotation and pan input", () => {
    const sphere = loadArtifacts({ graph, layout: layoutSphere }, { mode: "static" });
    expect(withRotation(sphere, [10, 20, 30])).toBe(sphere);
    const torus = loadArtifacts({ graph, layout: layoutTorus }, { mode: "static" });
    expect(withPanBy(torus, 50, 50)).toBe(torus);
  });
});

describe("cross-render agreement", () => {
  it("matches the pipeline's SVG node positions within 1 px", () => {
    const s = loadArtifacts({ graph, layout: layoutSphere }, { canvas: [700, 350] });
    const circles = [...sceneSvg.matchAll(/<circle cx="([-0-9.]+)" cy="([-0-9.]+)"/g)].map(
      (m) => [parseFloat(m[1]), parseFloat(m[2])] as [number, number],
    );
    const ours = nodeScreenPositions(s);
    expect(circles.length).toBe(ours.length);
    for (let i = 0; i < ours.length; i++) {
      expect(Math.hypot(ours[i][0] - circles[i][0], ours[i][1] - circles[i][1])).toBeLessThanOrEqual(1);
    }
  });

  it("plane layouts render inside the canvas", () => {
    const s = loadArtifacts({ graph, layout: layoutPlane }, { canvas: [650, 650] });
    for (const [x, y] of nodeScreenPositions(s)) {
      expect(x).toBeGreaterThanOrEqual(0);
      expect(x).toBeLessThanOrEqual(650);
      expect(y).toBeGreaterThanOrEqual(0);
      expect(y).toBeLessThanOrEqual(650);
    }
  });
});
