import type { Rating } from "./types.js";

export type FeedbackSender = (exchangeIndex: number, value: Rating) => Promise<void>;

/**
 * At most one rating per exchange, ever. A click while a request is in
 * flight for the same exchange is dropped, so double-clicks emit exactly
 * one request. Failed sends clear the in-flight mark to allow a retry.
 */
export class RatingStore {
  private readonly ratings = new Map<number, Rating>();
  private readonly inFlight = new Set<number>();

  get(exchangeIndex: number): Rating | undefined {
    return this.ratings.get(exchangeIndex);
  }

  entries(): Array<[number, Rating]> {
    return [...this.ratings.entries()].sort((a, b) => a[0] - b[0]);
  }

  canRate(exchangeIndex: number): boolean {
    return !this.ratings.has(exchangeIndex) && !this.inFlight.has(exchangeIndex);
  }

  /** Returns true when a request was actually sent and accepted. */
  async rate(exchangeIndex: number, value: Rating, send: FeedbackSender): Promise<boolean> {
    if (!this.canRate(exchangeIndex)) return false;
    this.inFlight.add(exchangeIndex);
    try {
      await send(exchangeIndex, value);
      this.ratings.set(exchangeIndex, value);
      return true;
    } finally {
      this.inFlight.delete(exchangeIndex);
    }
  }

  /** Seed from server state, e.g. when rebuilding a view after reload. */
  restore(exchangeIndex: number, value: Rating): void {
    this.ratings.set(exchangeIndex, value);
  }
}
