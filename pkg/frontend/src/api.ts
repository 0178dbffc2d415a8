import type {
  DocumentPayload,
  GridState,
  MetricsResponse,
  RunSpecEdit,
} from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
    public module?: string,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let message = `${response.status} ${response.statusText}`;
  let module: string | undefined;
  try {
    const body = await response.json();
    if (body.error) message = body.error;
    module = body.module;
  } catch {
    // non-JSON error body; keep the status line
  }
  return new ApiError(response.status, message, module);
}

/** Typed client for the four service endpoints. */
export class Client {
  constructor(private base: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.base + path);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  getState(): Promise<GridState> {
    return this.get<GridState>("/api/state");
  }

  getDocument(id: number): Promise<DocumentPayload> {
    return this.get<DocumentPayload>(`/api/document/${id}`);
  }

  getMetrics(): Promise<MetricsResponse> {
    return this.get<MetricsResponse>("/api/metrics");
  }

  async cluster(edits: RunSpecEdit): Promise<GridState> {
    const response = await fetch(this.base + "/api/cluster", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(edits),
    });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as GridState;
  }
}
