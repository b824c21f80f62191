import type { ReplyMessage } from "./types.js";

/** Minimal surface shared by browser WebSocket and the ws package. */
export interface SocketLike {
  send(data: string): void;
  close(code?: number): void;
  addEventListener(type: "open", listener: () => void): void;
  addEventListener(type: "message", listener: (ev: { data: unknown }) => void): void;
  addEventListener(
    type: "close",
    listener: (ev: { code: number; reason: string }) => void,
  ): void;
  addEventListener(type: "error", listener: (ev: unknown) => void): void;
}

export type SocketFactory = (url: string) => SocketLike;

export class StreamClosed extends Error {
  readonly code: number;

  constructor(code: number, reason = "") {
    super(`stream closed with code ${code}${reason ? `: ${reason}` : ""}`);
    this.code = code;
  }
}

function toBase64(bytes: Uint8Array): string {
  let binary = "";
  const step = 0x8000;
  for (let i = 0; i < bytes.length; i += step) {
    binary += String.fromCharCode(...bytes.subarray(i, i + step));
  }
  return btoa(binary);
}

interface Pending {
  resolve: (reply: ReplyMessage) => void;
  reject: (err: Error) => void;
}

/**
 * One session stream: strictly ordered request/reply over a WebSocket.
 *
 * Messages are serialized; a second send while a reply is pending is a
 * programming error and rejects immediately.
 */
export class SessionStream {
  closeCode: number | null = null;
  private readonly sock: SocketLike;
  private pending: Pending | null = null;

  private constructor(sock: SocketLike) {
    this.sock = sock;
    sock.addEventListener("message", (ev) => this.handleMessage(ev.data));
    sock.addEventListener("close", (ev) => this.handleClose(ev.code, ev.reason));
  }

  static open(url: string, factory: SocketFactory): Promise<SessionStream> {
    return new Promise((resolve, reject) => {
      const sock = factory(url);
      const stream = new SessionStream(sock);
      sock.addEventListener("open", () => resolve(stream));
      sock.addEventListener("error", () => {
        if (stream.closeCode === null) reject(new Error(`could not connect to ${url}`));
      });
    });
  }

  get closed(): boolean {
    return this.closeCode !== null;
  }

  sendText(text: string): Promise<ReplyMessage> {
    return this.request({ type: "utterance", text });
  }

  sendAudio(wav: Uint8Array): Promise<ReplyMessage> {
    return this.request({ type: "audio", wav: toBase64(wav) });
  }

  close(): void {
    if (this.closeCode === null) {
      this.closeCode = 1000;
      this.sock.close(1000);
    }
  }

  private request(payload: object): Promise<ReplyMessage> {
    if (this.closed) {
      return Promise.reject(new StreamClosed(this.closeCode ?? 1000));
    }
    if (this.pending) {
      return Promise.reject(new Error("a reply is already pending"));
    }
    return new Promise<ReplyMessage>((resolve, reject) => {
      this.pending = { resolve, reject };
      this.sock.send(JSON.stringify(payload));
    });
  }

  private handleMessage(data: unknown): void {
    const text = typeof data === "string" ? data : String(data);
    const waiter = this.pending;
    this.pending = null;
    if (waiter) waiter.resolve(JSON.parse(text) as ReplyMessage);
  }

  private handleClose(code: number, reason: string): void {
    if (this.closeCode === null) this.closeCode = code;
    const waiter = this.pending;
    this.pending = null;
    if (waiter) waiter.reject(new StreamClosed(code, reason));
  }
}
