import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";
import { escapeHtml } from "./upload.js";
import type { SessionReport } from "./types.js";

export type ReportStatus = "loading" | "in_progress" | "ready" | "error";

export interface ReportViewState {
  status: ReportStatus;
  report: SessionReport | null;
  error: string | null;
}

/** "0.67" for 2/3; sessions without feedback show "n/a". */
export function formatUx(ux: number | null): string {
  return ux === null ? "n/a" : ux.toFixed(2);
}

/** Report pane: closed sessions render fully, running ones say so. */
export class ReportView {
  readonly state: ReportViewState = { status: "loading", report: null, error: null };

  private readonly api: ApiClient;
  private readonly sessionId: string;

  constructor(api: ApiClient, sessionId: string) {
    this.api = api;
    this.sessionId = sessionId;
  }

  async load(): Promise<void> {
    this.state.status = "loading";
    this.state.error = null;
    try {
      this.state.report = await this.api.fetchReport(this.sessionId);
      this.state.status = "ready";
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.state.status = "in_progress";
        return;
      }
      this.state.status = "error";
      this.state.error = err instanceof ApiError ? err.detail : String(err);
      throw err;
    }
  }

  uxDisplay(): string {
    return this.state.report ? formatUx(this.state.report.ux) : "n/a";
  }

  render(): string {
    if (this.state.status === "in_progress") {
      return `<section class="report in-progress">Interview in progress; the report appears once the session closes.</section>`;
    }
    if (this.state.status === "error") {
      return `<section class="report error" role="alert">${escapeHtml(this.state.error ?? "failed to load report")}</section>`;
    }
    const report = this.state.report;
    if (!report) return `<section class="report loading">Loading report...</section>`;

    const ratingFor = new Map(report.feedback.map((f) => [f.exchange_index, f.value]));
    const turns = report.transcript
      .map((t) => {
        const badge =
          t.speaker === "interviewer" && ratingFor.has(t.exchange_index)
            ? `<span class="rating">${ratingFor.get(t.exchange_index) === 1 ? "Liked" : "Disliked"}</span>`
            : "";
        return [
          `<li class="turn ${t.speaker}" data-exchange="${t.exchange_index}">`,
          `<span class="speaker">${t.speaker}</span>`,
          `<span class="text">${escapeHtml(t.text)}</span>${badge}`,
          `</li>`,
        ].join("");
      })
      .join("\n");
    const questions = report.questions
      .map((q) => {
        const cov = q.coverage === null ? "-" : q.coverage.toFixed(2);
        return `<li class="${q.asked ? "asked" : "skipped"}">${escapeHtml(q.text)} <span class="coverage">coverage ${cov}</span></li>`;
      })
      .join("\n");
    return [
      `<section class="report ready" data-session="${escapeHtml(report.session_id)}">`,
      `<h2>Session report</h2>`,
      `<p class="ux">Satisfaction score: <strong>${this.uxDisplay()}</strong></p>`,
      `<p class="duration">Duration: ${report.duration_seconds.toFixed(1)}s</p>`,
      `<h3>Transcript</h3>`,
      `<ol class="transcript">${turns}</ol>`,
      `<h3>Question bank</h3>`,
      `<ul class="questions">${questions}</ul>`,
      `</section>`,
    ].join("\n");
  }
}
