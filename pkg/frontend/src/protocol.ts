/**
 * Wire types and session client for the packing server.
 *
 * The server holds all packing state; this module only moves JSON.
 * Endpoints: POST /place {height}, GET /state, POST /reset. Every
 * response carries `seq` (monotonic per session), `cumulative_area`
 * and `budget_remaining`.
 *
 * Requests are strictly serialized through an internal promise chain:
 * the board is a single shared session, and interleaved places would
 * make the reply order ambiguous.
 */

// ------------------------------------------------------------------ types

export interface RectDict {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface PlacementRecord {
  id: number;
  height: number;
  class: string;
  x: number;
  y: number;
  shelf_id: string | null;
}

export interface ShelfItemDict {
  kind: "square" | "column";
  ref: number | string;
  extent: number;
  offset: number;
}

export interface ShelfDict {
  id: string;
  rect: RectDict;
  orientation: "horizontal" | "vertical";
  height: number;
  length: number;
  ratio: number;
  subclass: number;
  used: number;
  state: "open" | "closed" | "closed_to_medium";
  items: ShelfItemDict[];
  close_info: {
    closer_kind: string;
    closer_extent: number;
    free_limit: number;
  } | null;
}

export interface Snapshot {
  placements: PlacementRecord[];
  shelves: Record<string, ShelfDict>;
  large: PlacementRecord | null;
  medium: {
    phase: "bottom" | "top";
    bottom_left: number;
    top_left: number;
    bottom_state: string;
  };
  small_phase: "buffer_b0" | "pair12" | "pair34";
  open_columns: Record<string, string>;
  cumulative_area: number;
  count: number;
  budget: number;
  enforce_budget: boolean;
}

interface ResponseEnvelope {
  seq: number;
  cumulative_area: number;
  budget_remaining: number;
}

export type PlaceResponse = ResponseEnvelope &
  (
    | {
        status: "placed";
        rect: RectDict;
        class: string;
        shelf_id: string | null;
      }
    | {
        status: "rejected";
        reason:
          | "no_fit"
          | "budget_exceeded"
          | "invariant_violation"
          | "invalid_height"
          | "parse_error";
        detail?: string;
      }
  );

export type StateResponse = ResponseEnvelope & {
  status: "ok";
  snapshot: Snapshot;
};

export type ResetResponse = ResponseEnvelope & { status: "ok" };

export type FetchLike = (
  url: string,
  init?: {
    method?: string;
    headers?: Record<string, string>;
    body?: string;
  },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

// ----------------------------------------------------------------- client

export class ProtocolError extends Error {
  constructor(
    message: string,
    readonly status?: number,
  ) {
    super(message);
    this.name = "ProtocolError";
  }
}

export class SessionClient {
  private chain: Promise<unknown> = Promise.resolve();
  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchImpl?: FetchLike,
  ) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? (fetch as unknown as FetchLike);
  }

  /** Serialize every request behind the previous one. */
  private enqueue<T>(job: () => Promise<T>): Promise<T> {
    const next = this.chain.then(job, job);
    this.chain = next.catch(() => undefined);
    return next;
  }

  private async request<T>(
    method: "GET" | "POST",
    path: string,
    body?: unknown,
  ): Promise<T> {
    let response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, {
        method,
        headers: body === undefined ? {} : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ProtocolError(`network error: ${String(err)}`);
    }
    if (!response.ok) {
      throw new ProtocolError(`server returned ${response.status}`, response.status);
    }
    try {
      return (await response.json()) as T;
    } catch (err) {
      throw new ProtocolError(`invalid JSON from server: ${String(err)}`);
    }
  }

  /** Submit one square; the server decides everything. */
  place(height: number | string): Promise<PlaceResponse> {
    return this.enqueue(() =>
      this.request<PlaceResponse>("POST", "/place", { height }),
    );
  }

  /** Fetch the authoritative board state. */
  state(): Promise<StateResponse> {
    return this.enqueue(() => this.request<StateResponse>("GET", "/state"));
  }

  /** Clear the board (the session's seq counter keeps running). */
  reset(): Promise<ResetResponse> {
    return this.enqueue(() => this.request<ResetResponse>("POST", "/reset"));
  }

  /**
   * Undo-by-replay: placed squares never move, so "undo" is a reset
   * followed by replaying the given prefix of heights in order.
   * Returns the outcome of every replayed step.
   */
  async replay(heights: ReadonlyArray<number | string>): Promise<PlaceResponse[]> {
    await this.reset();
    const outcomes: PlaceResponse[] = [];
    for (const h of heights) {
      outcomes.push(await this.place(h));
    }
    return outcomes;
  }
}
