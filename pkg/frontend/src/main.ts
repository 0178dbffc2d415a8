import {
  AmbientLight,
  DirectionalLight,
  PerspectiveCamera,
  Scene,
  WebGLRenderer,
} from "three";

import { ApiError, Client } from "./api";
import {
  CameraPose,
  applyPose,
  defaultPose,
  orbit,
  restorePose,
  serializePose,
} from "./camera";
import { DISTANCES, toRequestBody, validateEdits } from "./controls";
import { GridScene, buildGridScene } from "./gridScene";
import { renderPanel } from "./panel";
import { pickDocument, toNdc } from "./pick";
import type { GridState, RunSpecEdit } from "./types";

const POSE_KEY = "ca3d.pose";

const client = new Client();
const canvasHost = document.getElementById("scene") as HTMLElement;
const badge = document.getElementById("badge") as HTMLElement;
const metricsBadge = document.getElementById("metrics-badge") as HTMLElement;
const panel = document.getElementById("panel") as HTMLElement;
const form = document.getElementById("controls") as HTMLFormElement;
const formError = document.getElementById("form-error") as HTMLElement;
const toast = document.getElementById("toast") as HTMLElement;
const hint = document.getElementById("hint") as HTMLElement;

const scene = new Scene();
scene.add(new AmbientLight(0xffffff, 0.7));
const sun = new DirectionalLight(0xffffff, 1.2);
sun.position.set(3, 5, 4);
scene.add(sun);

const camera = new PerspectiveCamera(50, 1, 0.1, 500);
const renderer = new WebGLRenderer({ antialias: true });
canvasHost.appendChild(renderer.domElement);

let gridScene: GridScene | null = null;
let pose: CameraPose = restorePose(localStorage.getItem(POSE_KEY)) ?? defaultPose(11);
let selectedDoc: number | null = null;
let panelView: "text" | "vector" = "text";
let pending = false;

function resize() {
  const { clientWidth, clientHeight } = canvasHost;
  renderer.setSize(clientWidth, clientHeight);
  camera.aspect = clientWidth / Math.max(1, clientHeight);
  camera.updateProjectionMatrix();
}

function draw() {
  if (gridScene) applyPose(camera, pose, gridScene.center);
  renderer.render(scene, camera);
}

function setPose(next: CameraPose) {
  pose = next;
  localStorage.setItem(POSE_KEY, serializePose(pose));
  draw();
}

function showToast(message: string) {
  toast.textContent = message;
  toast.classList.add("visible");
  setTimeout(() => toast.classList.remove("visible"), 4000);
}

function showState(state: GridState) {
  if (gridScene) scene.remove(gridScene.group);
  gridScene = buildGridScene(state);
  scene.add(gridScene.group);
  badge.textContent = `${state.n_clusters} clusters / ${gridScene.stats.active} docs placed`;
  hint.style.display = "none";
  draw();
}

async function refreshMetricsBadge() {
  try {
    const metrics = await client.getMetrics();
    const last = metrics.runs[metrics.runs.length - 1];
    if (last) {
      const scored = last.entropy_pct !== ""
        ? ` E ${last.entropy_pct}% F ${last.fmeasure_pct}%`
        : "";
      metricsBadge.textContent =
        `run ${last.run_id}: ${last.metric}, level ${last.threshold_level},` +
        ` ${last.time_ms} ms${scored}`;
    }
  } catch {
    // metrics are cosmetic; ignore fetch failures here
  }
}

async function inspect(docId: number, color: string) {
  selectedDoc = docId;
  try {
    const doc = await client.getDocument(docId);
    panel.replaceChildren(renderPanel(doc, panelView, color));
    const toggle = document.createElement("button");
    toggle.type = "button";
    toggle.id = "view-toggle";
    toggle.textContent = panelView === "text" ? "show vector" : "show text";
    toggle.addEventListener("click", () => {
      panelView = panelView === "text" ? "vector" : "text";
      void inspect(docId, color);
    });
    panel.prepend(toggle);
  } catch (error) {
    showToast(error instanceof Error ? error.message : String(error));
  }
}

function clearSelection() {
  selectedDoc = null;
  panel.replaceChildren();
}

// --- input -----------------------------------------------------------------

let dragging = false;
let lastX = 0;
let lastY = 0;
let moved = 0;

renderer.domElement.addEventListener("pointerdown", (event) => {
  dragging = true;
  moved = 0;
  lastX = event.clientX;
  lastY = event.clientY;
});

window.addEventListener("pointermove", (event) => {
  if (!dragging) return;
  const dx = event.clientX - lastX;
  const dy = event.clientY - lastY;
  moved += Math.abs(dx) + Math.abs(dy);
  lastX = event.clientX;
  lastY = event.clientY;
  setPose(orbit(pose, -dx * 0.008, dy * 0.008));
});

window.addEventListener("pointerup", (event) => {
  if (!dragging) return;
  dragging = false;
  if (moved > 4 || !gridScene) return; // drags do not select
  const rect = renderer.domElement.getBoundingClientRect();
  const hit = pickDocument(
    toNdc(event.clientX, event.clientY, rect),
    camera,
    gridScene.pickables,
  );
  if (hit) void inspect(hit.docId, hit.color);
  else clearSelection();
});

renderer.domElement.addEventListener("wheel", (event) => {
  event.preventDefault();
  setPose(orbit(pose, 0, 0, event.deltaY * 0.02));
});

window.addEventListener("keydown", (event) => {
  const step = 0.12;
  if (event.key === "ArrowLeft") setPose(orbit(pose, step, 0));
  else if (event.key === "ArrowRight") setPose(orbit(pose, -step, 0));
  else if (event.key === "ArrowUp") setPose(orbit(pose, 0, step));
  else if (event.key === "ArrowDown") setPose(orbit(pose, 0, -step));
});

window.addEventListener("resize", () => {
  resize();
  draw();
});

// --- parameter panel ---------------------------------------------------------

function readEdits(): RunSpecEdit {
  const data = new FormData(form);
  const edits: RunSpecEdit = {};
  const rep = data.get("representation") as string;
  if (rep) edits.representation = rep as RunSpecEdit["representation"];
  if (rep === "ngram") edits.ngram_n = Number(data.get("ngram_n") || 3);
  const reduction = data.get("reduction") as string;
  if (reduction) edits.reduction = reduction as RunSpecEdit["reduction"];
  if (reduction && reduction !== "none") edits.k = Number(data.get("k") || 50);
  const distance = data.get("distance") as string;
  if (distance) edits.distance = distance;
  const level = data.get("threshold_level") as string;
  if (level) edits.threshold_level = Number(level);
  const strategy = data.get("strategy") as string;
  if (strategy) edits.strategy = strategy as RunSpecEdit["strategy"];
  const neighborhood = data.get("neighborhood") as string;
  if (neighborhood) {
    edits.neighborhood = neighborhood as RunSpecEdit["neighborhood"];
  }
  return edits;
}

form.addEventListener("submit", (event) => {
  event.preventDefault();
  if (pending) return;
  const edits = readEdits();
  const problems = validateEdits(edits);
  if (problems.length) {
    formError.textContent = problems.join("; ");
    return; // invalid edits never reach the service
  }
  formError.textContent = "";
  pending = true;
  const submit = form.querySelector("button[type=submit]") as HTMLButtonElement;
  submit.disabled = true;
  client
    .cluster(toRequestBody(edits))
    .then((state) => {
      showState(state);
      void refreshMetricsBadge();
      if (selectedDoc !== null) clearSelection();
    })
    .catch((error) => {
      if (error instanceof ApiError && error.status === 400) {
        formError.textContent = error.message;
      } else {
        showToast(error instanceof Error ? error.message : String(error));
      }
    })
    .finally(() => {
      pending = false;
      submit.disabled = false;
    });
});

// --- boot --------------------------------------------------------------------

function populateDistances() {
  const select = form.elements.namedItem("distance") as HTMLSelectElement;
  for (const name of DISTANCES) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    select.appendChild(option);
  }
}

async function boot() {
  populateDistances();
  resize();
  try {
    const state = await client.getState();
    pose = restorePose(localStorage.getItem(POSE_KEY)) ?? defaultPose(state.side);
    showState(state);
    void refreshMetricsBadge();
  } catch (error) {
    if (error instanceof ApiError && error.status === 404) {
      hint.textContent =
        "No clustering yet - choose parameters and press “run”.";
    } else {
      showToast(error instanceof Error ? error.message : String(error));
    }
    draw();
  }
}

void boot();
