import type { GridState } from "../src/types";

/** Small hand-built grid state: three single-doc clusters, a frontier cell,
 * and an isolated separator. */
export const THREE_CLUSTER_STATE: GridState = {
  side: 4,
  cells: [
    { i: 0, j: 0, k: 0, state: "active", doc_id: 1, cluster_id: 1 },
    { i: 0, j: 0, k: 1, state: "alive" },
    { i: 1, j: 1, k: 1, state: "isolated" },
    { i: 2, j: 2, k: 2, state: "active", doc_id: 2, cluster_id: 2 },
    { i: 3, j: 3, k: 3, state: "active", doc_id: 3, cluster_id: 3 },
  ],
  n_clusters: 3,
};

export const TWELVE_DOC_GROUPS: Record<string, string[]> = {
  sports: [
    "goal referee stadium match striker goal",
    "referee stadium goal keeper match defender",
    "match striker keeper stadium referee goal",
    "defender keeper goal match stadium striker",
  ],
  cooking: [
    "oven recipe flour butter saucepan whisk",
    "recipe saucepan butter oven flour simmer",
    "whisk flour oven recipe simmer butter",
    "butter simmer saucepan whisk recipe oven",
  ],
  astronomy: [
    "telescope orbit nebula galaxy comet star",
    "orbit galaxy telescope star nebula photon",
    "comet star orbit nebula telescope galaxy",
    "photon nebula comet galaxy star telescope",
  ],
};
