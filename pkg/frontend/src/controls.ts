import type { RunSpecEdit } from "./types";

export const DISTANCES = [
  "cosine",
  "euclidean",
  "manhattan",
  "minkowski",
  "chebyshev",
  "average",
  "mahalanobis",
] as const;

/** Client-side validation mirroring the service's spec checks, so obviously
 * invalid edits are rejected inline without a request. */
export function validateEdits(edits: RunSpecEdit): string[] {
  const problems: string[] = [];
  if (edits.representation === "ngram") {
    const n = edits.ngram_n ?? 3;
    if (!Number.isInteger(n) || n < 2 || n > 5) {
      problems.push("n-gram size must be an integer in 2..5");
    }
  }
  if (edits.threshold_level !== undefined && edits.threshold !== undefined) {
    problems.push("give either a threshold level or an explicit threshold");
  }
  if (edits.threshold_level !== undefined) {
    const level = edits.threshold_level;
    if (!Number.isInteger(level) || level < 1 || level > 10) {
      problems.push("threshold level must be an integer in 1..10");
    }
  }
  if (edits.threshold !== undefined && (edits.threshold < 0 || edits.threshold > 1)) {
    problems.push("threshold must be in [0, 1]");
  }
  if (edits.distance !== undefined && !DISTANCES.includes(edits.distance as never)) {
    problems.push(`unknown distance: ${edits.distance}`);
  }
  if (edits.k !== undefined && (!Number.isInteger(edits.k) || edits.k < 1)) {
    problems.push("k must be a positive integer");
  }
  return problems;
}

/** Drop undefined fields so the POST body only carries real edits. */
export function toRequestBody(edits: RunSpecEdit): Record<string, unknown> {
  return Object.fromEntries(
    Object.entries(edits).filter(([, value]) => value !== undefined),
  );
}
