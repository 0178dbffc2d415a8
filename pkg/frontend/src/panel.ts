import type { DocumentPayload } from "./types";

export type PanelView = "text" | "vector";

/** Render the inspection panel for one document; pure DOM construction so
 * it is testable without the scene. */
export function renderPanel(
  doc: DocumentPayload,
  view: PanelView,
  color: string,
): HTMLElement {
  const root = document.createElement("div");
  root.className = "panel-content";

  const heading = document.createElement("h3");
  heading.textContent = `#${doc.id} ${doc.title}`;
  heading.style.borderLeft = `6px solid ${color}`;
  root.appendChild(heading);

  if (doc.labels.length) {
    const labels = document.createElement("p");
    labels.className = "labels";
    labels.textContent = doc.labels.join(", ");
    root.appendChild(labels);
  }

  if (view === "text") {
    const body = document.createElement("pre");
    body.className = "doc-body";
    body.textContent = doc.body;
    root.appendChild(body);
  } else {
    const table = document.createElement("table");
    table.className = "vector";
    for (const [term, weight] of doc.vector) {
      const row = table.insertRow();
      row.insertCell().textContent = term;
      row.insertCell().textContent = weight.toFixed(4);
    }
    if (!doc.vector.length) {
      const empty = document.createElement("p");
      empty.textContent = "no vector yet - run a clustering first";
      root.appendChild(empty);
    }
    root.appendChild(table);
  }
  return root;
}
