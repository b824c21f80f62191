import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";
import type { AssessmentResult, UploadResult } from "./types.js";

export interface UploadViewState {
  resume: UploadResult | null;
  jd: UploadResult | null;
  assessment: AssessmentResult | null;
  busy: boolean;
  /** server detail text, shown verbatim in the banner */
  error: string | null;
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Upload pane: two documents in, one fit assessment out. */
export class UploadView {
  readonly state: UploadViewState = {
    resume: null,
    jd: null,
    assessment: null,
    busy: false,
    error: null,
  };

  private readonly api: ApiClient;

  constructor(api: ApiClient) {
    this.api = api;
  }

  async uploadResume(name: string, data: Blob | Uint8Array, language = "en"): Promise<void> {
    this.state.resume = await this.upload(name, data, "resume", language);
  }

  async uploadJobDescription(name: string, data: Blob | Uint8Array, language = "en"): Promise<void> {
    this.state.jd = await this.upload(name, data, "job_description", language);
  }

  canAssess(): boolean {
    return this.state.resume !== null && this.state.jd !== null && !this.state.busy;
  }

  async runAssessment(): Promise<AssessmentResult> {
    if (!this.state.resume || !this.state.jd) {
      throw new Error("upload both documents first");
    }
    this.state.busy = true;
    this.state.error = null;
    try {
      const result = await this.api.runAssessment(
        this.state.resume.doc_id,
        this.state.jd.doc_id,
      );
      this.state.assessment = result;
      return result;
    } catch (err) {
      this.captureError(err);
      throw err;
    } finally {
      this.state.busy = false;
    }
  }

  /** Section names in render order; mirrors the report JSON keys. */
  sectionNames(): string[] {
    return this.state.assessment ? Object.keys(this.state.assessment.section_scores) : [];
  }

  renderErrorBanner(): string {
    if (!this.state.error) return "";
    return `<div class="banner error" role="alert">${escapeHtml(this.state.error)}</div>`;
  }

  renderAssessment(): string {
    const report = this.state.assessment;
    if (!report) return `<section class="assessment empty">No assessment yet.</section>`;
    const rows = Object.entries(report.section_scores)
      .map(([section, score]) => {
        const pct = Math.round(score * 100);
        const note = report.section_feedback[section] ?? "";
        return [
          `<li class="section" data-section="${escapeHtml(section)}">`,
          `<span class="name">${escapeHtml(section)}</span>`,
          `<span class="bar"><span class="fill" style="width:${pct}%"></span></span>`,
          `<span class="score">${score.toFixed(2)}</span>`,
          `<p class="note">${escapeHtml(note)}</p>`,
          `</li>`,
        ].join("");
      })
      .join("\n");
    const recs = report.recommendations
      .map((r) => `<li>${escapeHtml(r)}</li>`)
      .join("\n");
    return [
      `<section class="assessment" data-version="${report.report_version}">`,
      `<h2>Fit assessment</h2>`,
      `<ul class="sections">${rows}</ul>`,
      `<h3>Recommendations</h3>`,
      `<ol class="recommendations">${recs}</ol>`,
      `</section>`,
    ].join("\n");
  }

  private async upload(
    name: string,
    data: Blob | Uint8Array,
    kind: "resume" | "job_description",
    language: string,
  ): Promise<UploadResult> {
    this.state.busy = true;
    this.state.error = null;
    try {
      return await this.api.uploadDocument(name, data, kind, language);
    } catch (err) {
      this.captureError(err);
      throw err;
    } finally {
      this.state.busy = false;
    }
  }

  private captureError(err: unknown): void {
    this.state.error = err instanceof ApiError ? err.detail : String(err);
  }
}

export { escapeHtml };
