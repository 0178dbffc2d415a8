/** Wire formats of the clustering service. */

export type CellState = "active" | "alive" | "isolated";

export interface GridCell {
  i: number;
  j: number;
  k: number;
  state: CellState;
  doc_id?: number;
  cluster_id?: number;
}

export interface GridState {
  side: number;
  cells: GridCell[];
  n_clusters: number;
}

export interface DocumentPayload {
  id: number;
  title: string;
  body: string;
  labels: string[];
  vector: [string, number][];
}

export interface MetricsRow {
  run_id: number;
  metric: string;
  n_docs: number;
  representation: string;
  distance: string;
  threshold_level: number | string;
  n_clusters: number;
  time_ms: number;
  entropy_pct: string;
  fmeasure_pct: string;
}

export interface MetricsResponse {
  runs: MetricsRow[];
}

/** Editable subset of the run spec the panel exposes. */
export interface RunSpecEdit {
  representation?: "bag" | "ngram";
  ngram_n?: number;
  reduction?: "none" | "chi2" | "infogain";
  k?: number;
  distance?: string;
  threshold_level?: number;
  threshold?: number;
  strategy?: "neighborhood" | "linear";
  neighborhood?: "moore" | "von_neumann";
}
