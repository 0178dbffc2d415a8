/** Fixed 24-color palette keyed by cluster id, cycling beyond; deterministic
 * so screenshots of the same run always match. */

export const PALETTE: readonly string[] = [
  "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4",
  "#f032e6", "#bfef45", "#fabed4", "#469990", "#dcbeff", "#9a6324",
  "#fffac8", "#800000", "#aaffc3", "#808000", "#ffd8b1", "#000075",
  "#ffe119", "#a9a9a9", "#568203", "#b5651d", "#5d8aa8", "#c71585",
];

export function clusterColor(clusterId: number): string {
  const index = ((clusterId - 1) % PALETTE.length + PALETTE.length) % PALETTE.length;
  return PALETTE[index];
}
