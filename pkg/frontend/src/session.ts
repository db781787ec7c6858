/** Design-session state machine.
 *
 * Invariants:
 *  - the displayed verdict always comes from the last accepted server
 *    response (no client-side fairness math);
 *  - slider drags are debounced 150 ms, a query also fires on release and
 *    after 500 ms of idle;
 *  - at most one query is in flight; responses that arrive out of order or
 *    carry a different dataset fingerprint are discarded.
 */

import { Client, QueryResponse, RankResponse } from "./api.js";

export const DRAG_DEBOUNCE_MS = 150;
export const IDLE_MS = 500;

export interface SessionView {
  weights: number[];
  verdict: QueryResponse | null;
  rank: RankResponse | null;
  history: number[][];
  pending: boolean;
  error: string | null;
}

export type Listener = (view: SessionView) => void;

export class DesignSession {
  private weights: number[];
  private verdict: QueryResponse | null = null;
  private rank: RankResponse | null = null;
  private history: number[][] = [];
  private error: string | null = null;

  private seq = 0;
  private lastApplied = 0;
  private inFlight = false;
  private queued = false;
  private dragTimer: ReturnType<typeof setTimeout> | null = null;
  private idleTimer: ReturnType<typeof setTimeout> | null = null;
  private listeners: Listener[] = [];

  constructor(
    private client: Client,
    initialWeights: number[],
    private fingerprint: string,
    private topK: number = 10,
  ) {
    this.weights = [...initialWeights];
  }

  subscribe(fn: Listener): void {
    this.listeners.push(fn);
  }

  view(): SessionView {
    return {
      weights: [...this.weights],
      verdict: this.verdict,
      rank: this.rank,
      history: this.history.map((w) => [...w]),
      pending: this.inFlight || this.queued,
      error: this.error,
    };
  }

  /** Slider is being dragged: update state, query after a short debounce
   * and again once the input goes idle. */
  drag(weights: number[]): void {
    this.weights = [...weights];
    if (this.dragTimer !== null) clearTimeout(this.dragTimer);
    if (this.idleTimer !== null) clearTimeout(this.idleTimer);
    this.dragTimer = setTimeout(() => this.requestQuery(), DRAG_DEBOUNCE_MS);
    this.idleTimer = setTimeout(() => this.requestQuery(), IDLE_MS);
    this.notify();
  }

  /** Slider released: query immediately. */
  release(weights: number[]): void {
    this.weights = [...weights];
    if (this.dragTimer !== null) clearTimeout(this.dragTimer);
    if (this.idleTimer !== null) clearTimeout(this.idleTimer);
    this.dragTimer = null;
    this.idleTimer = null;
    this.requestQuery();
  }

  /** Snap the sliders to the last suggestion and re-query. */
  applySuggestion(): void {
    const sugg = this.verdict?.suggestion;
    if (!sugg) return;
    this.history.push([...this.weights]);
    this.release(sugg);
  }

  /** Sum-normalized weights for display; scaling never changes the ranking. */
  normalizedWeights(): number[] {
    const total = this.weights.reduce((a, b) => a + b, 0);
    if (total <= 0) return this.weights.map(() => 0);
    return this.weights.map((w) => w / total);
  }

  private requestQuery(): void {
    if (this.inFlight) {
      this.queued = true; // newer input supersedes the running query
      return;
    }
    void this.runQuery();
  }

  private async runQuery(): Promise<void> {
    this.inFlight = true;
    this.queued = false;
    const seq = ++this.seq;
    const weights = [...this.weights];
    this.notify();
    let verdict: QueryResponse | null = null;
    let rank: RankResponse | null = null;
    let error: string | null = null;
    try {
      verdict = await this.client.query(weights);
      rank = await this.client.rank(weights, this.topK);
    } catch (err) {
      error = err instanceof Error ? err.message : String(err);
    }
    this.inFlight = false;
    const stale =
      seq < this.lastApplied ||
      (verdict !== null && verdict.fingerprint !== this.fingerprint);
    if (!stale) {
      this.lastApplied = seq;
      if (error === null) {
        this.verdict = verdict;
        this.rank = rank;
        this.error = null;
      } else {
        this.error = error;
      }
    }
    if (this.queued) {
      void this.runQuery(); // coalesced re-run with the latest weights
      return;
    }
    this.notify();
  }

  private notify(): void {
    const snapshot = this.view();
    for (const fn of this.listeners) fn(snapshot);
  }
}
