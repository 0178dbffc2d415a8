// @vitest-environment jsdom
import { describe, expect, it } from "vitest";

import { renderPanel } from "../src/panel";
import type { DocumentPayload } from "../src/types";

const DOC: DocumentPayload = {
  id: 7,
  title: "doc07",
  body: "whisk flour oven recipe simmer butter",
  labels: ["cooking"],
  vector: [
    ["butter", 0.6931],
    ["whisk", 1.3863],
  ],
};

describe("document panel", () => {
  it("shows the raw text in text view", () => {
    const element = renderPanel(DOC, "text", "#3cb44b");
    expect(element.querySelector("h3")?.textContent).toBe("#7 doc07");
    expect(element.querySelector(".doc-body")?.textContent).toContain("whisk flour");
    expect(element.querySelector(".labels")?.textContent).toBe("cooking");
  });

  it("shows term/weight pairs in vector view", () => {
    const element = renderPanel(DOC, "vector", "#3cb44b");
    const rows = Array.from(element.querySelectorAll("tr"));
    expect(rows).toHaveLength(2);
    expect(rows[0].cells[0].textContent).toBe("butter");
    expect(rows[0].cells[1].textContent).toBe("0.6931");
  });

  it("mentions the missing vector before any run", () => {
    const element = renderPanel({ ...DOC, vector: [] }, "vector", "#fff");
    expect(element.textContent).toContain("no vector yet");
  });
});
