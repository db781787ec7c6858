/** Typed client for the fairrank HTTP API. All fairness verdicts come from
 * the service; this module only moves data. */

export type Status = "idle" | "building" | "ready" | "unsatisfiable";

export interface OracleConstraint {
  attr: string;
  group: number;
  k: number | string;
  min: number | string | null;
  max: number | string | null;
}

export interface Meta {
  status: Status;
  progress: Record<string, unknown>;
  d?: number;
  n?: number;
  mode?: "2d" | "md";
  fingerprint?: string;
  attr_names?: string[];
  codebooks?: Record<string, Record<string, number>>;
  oracle?: { mode: string; constraints: OracleConstraint[] } | null;
  cells?: number;
}

export interface QueryResponse {
  input: number[];
  satisfactory_as_is: boolean;
  suggestion: number[] | null;
  distance: number | null;
  verified: boolean;
  mode: string;
  unsatisfiable: boolean;
  fingerprint: string;
}

export interface RankItem {
  id: number;
  score: number;
  groups: Record<string, number>;
}

export interface RankResponse {
  k: number;
  items: RankItem[];
  group_counts: Record<string, Record<string, number>>;
  codebooks: Record<string, Record<string, number>>;
  fingerprint: string;
}

export interface Ranges2D {
  boundaries: [number, "start" | "end"][];
  fingerprint: string;
}

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class Client {
  constructor(
    private base: string = "",
    private fetchFn: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.base + path, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = await resp.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  meta(): Promise<Meta> {
    return this.request<Meta>("/meta");
  }

  query(weights: number[]): Promise<QueryResponse> {
    return this.post<QueryResponse>("/query", { weights });
  }

  rank(weights: number[], k: number): Promise<RankResponse> {
    return this.post<RankResponse>("/rank", { weights, k });
  }

  ranges2d(): Promise<Ranges2D> {
    return this.request<Ranges2D>("/ranges2d");
  }
}
