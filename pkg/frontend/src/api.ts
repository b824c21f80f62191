import type {
  AssessmentResult,
  AuditEvent,
  SessionOpenResult,
  SessionReport,
  UploadResult,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** HTTP failure carrying the server's verbatim detail message. */
export class ApiError extends Error {
  readonly status: number;
  readonly detail: string;

  constructor(status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
    this.status = status;
    this.detail = detail;
  }
}

export interface ApiClientOptions {
  baseUrl: string;
  token?: string;
  fetchFn?: FetchLike;
}

async function readDetail(resp: Response): Promise<string> {
  try {
    const body = (await resp.json()) as { detail?: unknown };
    if (typeof body.detail === "string") return body.detail;
    return JSON.stringify(body.detail ?? body);
  } catch {
    return resp.statusText || `status ${resp.status}`;
  }
}

/** Typed client for every service endpoint the console consumes. */
export class ApiClient {
  readonly baseUrl: string;
  private readonly token?: string;
  private readonly fetchFn: FetchLike;

  constructor(opts: ApiClientOptions) {
    this.baseUrl = opts.baseUrl.replace(/\/$/, "");
    this.token = opts.token;
    this.fetchFn = opts.fetchFn ?? ((url, init) => fetch(url, init));
  }

  private headers(extra?: Record<string, string>): Record<string, string> {
    const h: Record<string, string> = { ...extra };
    if (this.token) h["Authorization"] = `Bearer ${this.token}`;
    return h;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!resp.ok) throw new ApiError(resp.status, await readDetail(resp));
    if (resp.status === 204) return undefined as T;
    return (await resp.json()) as T;
  }

  private postJson<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: this.headers({ "Content-Type": "application/json" }),
      body: JSON.stringify(body),
    });
  }

  health(): Promise<{ status: string; backends: string[] }> {
    return this.request("/healthz", { headers: this.headers() });
  }

  uploadDocument(
    name: string,
    data: Blob | Uint8Array,
    kind: "resume" | "job_description",
    language = "en",
  ): Promise<UploadResult> {
    const blob =
      data instanceof Blob ? data : new Blob([data as BlobPart], { type: "text/plain" });
    const form = new FormData();
    form.append("file", blob, name);
    form.append("kind", kind);
    form.append("language", language);
    return this.request("/documents", {
      method: "POST",
      headers: this.headers(),
      body: form,
    });
  }

  runAssessment(resumeId: string, jdId: string): Promise<AssessmentResult> {
    return this.postJson("/assessments", { resume_id: resumeId, jd_id: jdId });
  }

  openSession(
    resumeId: string,
    jdId: string,
    language = "en",
    roleProfile = "general",
  ): Promise<SessionOpenResult> {
    return this.postJson("/sessions", {
      resume_id: resumeId,
      jd_id: jdId,
      language,
      role_profile: roleProfile,
    });
  }

  sendFeedback(sessionId: string, exchangeIndex: number, value: 1 | -1): Promise<void> {
    return this.postJson(`/sessions/${sessionId}/feedback`, {
      exchange_index: exchangeIndex,
      value,
    });
  }

  fetchReport(sessionId: string): Promise<SessionReport> {
    return this.request(`/sessions/${sessionId}/report`, { headers: this.headers() });
  }

  raiseContest(
    sessionId: string,
    exchangeIndex: number,
    reason: string,
  ): Promise<{ ticket_id: string }> {
    return this.postJson(`/sessions/${sessionId}/contest`, {
      exchange_index: exchangeIndex,
      reason,
    });
  }

  fetchAudit(streamId: string): Promise<{ events: AuditEvent[] }> {
    return this.request(`/audit/${streamId}`, { headers: this.headers() });
  }

  /** ws:// or wss:// URL for a session stream, derived from baseUrl. */
  streamUrl(sessionId: string): string {
    const ws = this.baseUrl.replace(/^http/, "ws");
    return `${ws}/sessions/${sessionId}/stream`;
  }
}
