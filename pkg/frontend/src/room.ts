import type { ApiClient } from "./api.js";
import { RatingStore } from "./ratings.js";
import type { Rating, ReplyAction, ReplyMessage, Speaker } from "./types.js";
import { SessionStream } from "./wsClient.js";
import type { SocketFactory } from "./wsClient.js";

export interface RoomTurn {
  speaker: Speaker;
  text: string;
  exchangeIndex: number;
}

/** One completed exchange as shown in the room: reply index is the key. */
export interface RenderedExchange {
  exchangeIndex: number;
  answer: string;
  reply: string;
  action: ReplyAction;
  rating: Rating | null;
  ratable: boolean;
}

export interface ConsoleSessionView {
  sessionId: string;
  transcript: RoomTurn[];
  pendingReply: boolean;
  ratings: Map<number, Rating>;
  closed: boolean;
}

/**
 * Live interview controller. All state of record lives server-side; this
 * object only mirrors it for rendering, and can be rebuilt from the audit
 * stream after a page reload.
 */
export class InterviewRoom {
  readonly sessionId: string;
  readonly transcript: RoomTurn[] = [];
  readonly ratings = new RatingStore();
  pendingReply = false;
  closed = false;
  lastAction: ReplyAction | null = null;
  /** base64 WAV of the latest spoken reply, for playback */
  lastReplyAudio: string | null = null;
  private readonly actions = new Map<number, ReplyAction>();

  private readonly api: ApiClient;
  private stream: SessionStream | null = null;
  private readonly factory: SocketFactory;

  constructor(api: ApiClient, sessionId: string, firstQuestion: string, factory: SocketFactory) {
    this.api = api;
    this.sessionId = sessionId;
    this.factory = factory;
    this.transcript.push({ speaker: "interviewer", text: firstQuestion, exchangeIndex: 0 });
  }

  async connect(): Promise<void> {
    this.stream = await SessionStream.open(this.api.streamUrl(this.sessionId), this.factory);
  }

  view(): ConsoleSessionView {
    return {
      sessionId: this.sessionId,
      transcript: [...this.transcript],
      pendingReply: this.pendingReply,
      ratings: new Map(this.ratings.entries()),
      closed: this.closed,
    };
  }

  /** Exchanges with rating state, newest last; greeting is not ratable. */
  exchanges(): RenderedExchange[] {
    const out: RenderedExchange[] = [];
    for (let i = 1; i < this.transcript.length - 1; i += 2) {
      const answer = this.transcript[i]!;
      const reply = this.transcript[i + 1]!;
      const idx = reply.exchangeIndex;
      const rating = this.ratings.get(idx) ?? null;
      out.push({
        exchangeIndex: idx,
        answer: answer.text,
        reply: reply.text,
        action: this.actions.get(idx) ?? "next_topic",
        rating,
        ratable: rating === null,
      });
    }
    return out;
  }

  async sendText(text: string): Promise<ReplyMessage> {
    return this.exchange(() => this.requireStream().sendText(text), text);
  }

  async sendAudio(wav: Uint8Array, transcriptHint = "(spoken answer)"): Promise<ReplyMessage> {
    return this.exchange(() => this.requireStream().sendAudio(wav), transcriptHint);
  }

  /**
   * Rate one exchange. Resolves true when a request was sent; duplicate
   * clicks resolve false without touching the network.
   */
  async rate(exchangeIndex: number, value: Rating): Promise<boolean> {
    const known = this.transcript.some(
      (t) => t.speaker === "interviewer" && t.exchangeIndex === exchangeIndex && exchangeIndex >= 1,
    );
    if (!known) return false;
    return this.ratings.rate(exchangeIndex, value, (i, v) =>
      this.api.sendFeedback(this.sessionId, i, v),
    );
  }

  disconnect(): void {
    this.stream?.close();
  }

  /** Rebuild the view a reload lost from the server's audit stream. */
  static async fromAudit(api: ApiClient, sessionId: string, factory: SocketFactory): Promise<InterviewRoom> {
    const { events } = await api.fetchAudit(sessionId);
    const turns = events.filter((e) => e.kind === "turn");
    if (turns.length === 0) throw new Error(`audit stream for ${sessionId} has no turns`);
    const first = turns[0]!.payload as unknown as { text: string };
    const room = new InterviewRoom(api, sessionId, first.text, factory);
    for (const event of turns.slice(1)) {
      const turn = event.payload as unknown as {
        speaker: Speaker;
        text: string;
        exchange_index: number;
      };
      room.transcript.push({
        speaker: turn.speaker,
        text: turn.text,
        exchangeIndex: turn.exchange_index,
      });
    }
    for (const event of events) {
      if (event.kind !== "feedback") continue;
      const fb = event.payload as unknown as { exchange_index: number; value: Rating };
      room.ratings.restore(fb.exchange_index, fb.value);
    }
    room.closed = events.some((e) => e.kind === "report_issued");
    return room;
  }

  private requireStream(): SessionStream {
    if (!this.stream) throw new Error("connect() before sending turns");
    return this.stream;
  }

  private async exchange(
    send: () => Promise<ReplyMessage>,
    candidateText: string,
  ): Promise<ReplyMessage> {
    if (this.closed) throw new Error("session is closed");
    if (this.pendingReply) throw new Error("a reply is already pending");
    this.pendingReply = true;
    try {
      const reply = await send();
      this.transcript.push({
        speaker: "candidate",
        text: candidateText,
        exchangeIndex: reply.exchange_index - 1,
      });
      this.transcript.push({
        speaker: "interviewer",
        text: reply.text,
        exchangeIndex: reply.exchange_index,
      });
      this.lastAction = reply.action;
      this.actions.set(reply.exchange_index, reply.action);
      this.lastReplyAudio = reply.audio ?? null;
      if (reply.action === "close") {
        this.closed = true;
        this.stream?.close();
      }
      return reply;
    } finally {
      this.pendingReply = false;
    }
  }
}
