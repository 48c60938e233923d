import type {
  DifferencePayload,
  SelectionPayload,
  SummaryPayload,
} from "./types.js";

export interface CreateSessionRequest {
  shape: number[];
  values: number[];
  labels: number[];
  comparing_mode?: number;
  mode_names?: string[];
  group_names?: string[];
  core_shape?: number[];
  preset?: string;
  rank?: number;
  seed?: number;
}

export interface SetWeightsRequest {
  w_tg: number[];
  w_bg: number[];
  w_bw: number[];
  core_shape?: number[];
  base_revision?: number;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }

  get isUnknownSession(): boolean {
    return this.status === 404;
  }

  get isStaleRevision(): boolean {
    return this.status === 409;
  }

  get isInvalidInput(): boolean {
    return this.status === 422;
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client for the /api/v1/ session endpoints. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/v1${path}`, {
      method,
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const parsed = (await resp.json()) as { detail?: unknown };
        if (parsed.detail !== undefined) detail = String(parsed.detail);
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  createSession(req: CreateSessionRequest): Promise<SummaryPayload> {
    return this.request("POST", "/sessions", req);
  }

  setWeights(
    sessionId: string,
    req: SetWeightsRequest,
  ): Promise<SummaryPayload> {
    return this.request("POST", `/sessions/${sessionId}/weights`, req);
  }

  getSummary(sessionId: string): Promise<SummaryPayload> {
    return this.request("GET", `/sessions/${sessionId}/summary`);
  }

  setSelection(
    sessionId: string,
    which: "A" | "B",
    indices: number[],
  ): Promise<SelectionPayload> {
    return this.request("PUT", `/sessions/${sessionId}/selection`, {
      which,
      indices,
    });
  }

  getDifference(
    sessionId: string,
    variable?: number,
  ): Promise<DifferencePayload> {
    const query = variable === undefined ? "" : `?variable=${variable}`;
    return this.request("GET", `/sessions/${sessionId}/difference${query}`);
  }
}
