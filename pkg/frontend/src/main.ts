/** Static-page wiring: load pipeline JSON, render to canvas, and provide
 * versor dragging (sphere) or wrap-around panning (torus). */

import { buildFrame } from "./frame.js";
import { drawFrame } from "./canvas.js";
import { ProjectionKind } from "./projections.js";
import { projectionSpecOf } from "./frame.js";
import { DragState, beginDrag, dragRotation } from "./versor.js";
import { ArtifactFiles, Session, loadArtifacts, withPanBy, withRotation } from "./session.js";

const canvas = document.getElementById("view") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const status = document.getElementById("status")!;
const modeBox = document.getElementById("mode") as HTMLInputElement;
const projSelect = document.getElementById("projection") as HTMLSelectElement;

let files: ArtifactFiles = {};
let session: Session | null = null;
let drag: DragState | null = null;
let lastPointer: [number, number] | null = null;

function rebuild(): void {
  if (!files.trial && !(files.graph && files.layout)) return;
  try {
    session = loadArtifacts(files, {
      mode: modeBox.checked ? "interactive" : "static",
      projection: (projSelect.value || undefined) as ProjectionKind | undefined,
    });
    canvas.width = session.canvas[0];
    canvas.height = session.canvas[1];
    status.textContent = `${session.geometry} · ${session.nodes.length} nodes · ${session.edges.length} edges · ${session.mode}`;
    redraw();
  } catch (err) {
    session = null;
    status.textContent = String(err);
  }
}

function redraw(): void {
  if (!session) return;
  drawFrame(ctx, buildFrame(session), session.canvas[0], session.canvas[1]);
}

function hookFile(id: string, key: keyof ArtifactFiles): void {
  const input = document.getElementById(id) as HTMLInputElement;
  input.addEventListener("change", async () => {
    const file = input.files?.[0];
    if (!file) return;
    files = { ...files, [key]: JSON.parse(await file.text()) };
    if (key === "trial") files = { trial: files.trial };
    rebuild();
  });
}

hookFile("graph-file", "graph");
hookFile("layout-file", "layout");
hookFile("trial-file", "trial");
modeBox.addEventListener("change", rebuild);
projSelect.addEventListener("change", rebuild);

function pointerPos(ev: PointerEvent): [number, number] {
  const rect = canvas.getBoundingClientRect();
  return [ev.clientX - rect.left, ev.clientY - rect.top];
}

canvas.addEventListener("pointerdown", (ev) => {
  if (!session || session.mode === "static") return;
  const [x, y] = pointerPos(ev);
  lastPointer = [x, y];
  if (session.geometry === "sphere") {
    drag = beginDrag(projectionSpecOf(session), x, y);
  }
  canvas.setPointerCapture(ev.pointerId);
});

canvas.addEventListener("pointermove", (ev) => {
  if (!session || session.mode === "static" || lastPointer === null) return;
  const [x, y] = pointerPos(ev);
  if (session.geometry === "sphere" && drag) {
    const spec = projectionSpecOf(session);
    const rot = dragRotation(spec, drag, x, y);
    if (rot) {
      session = withRotation(session, rot);
      redraw();
    }
  } else if (session.geometry === "torus") {
    session = withPanBy(session, x - lastPointer[0], y - lastPointer[1]);
    lastPointer = [x, y];
    redraw();
  }
});

canvas.addEventListener("pointerup", () => {
  drag = null;
  lastPointer = null;
});
