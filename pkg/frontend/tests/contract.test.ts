import { afterAll, beforeAll, describe, expect, it } from "vitest";
import type { ChildProcess } from "node:child_process";
import WebSocket from "ws";

import { ApiClient, ApiError } from "../src/api.js";
import { ReportView, formatUx } from "../src/report.js";
import { InterviewRoom } from "../src/room.js";
import type { Rating, ReplyMessage } from "../src/types.js";
import { UploadView } from "../src/upload.js";
import type { SocketFactory, SocketLike } from "../src/wsClient.js";
import { GOOD_ANSWER, JD_TEXT, RESUME_TEXT } from "./fixtures.js";
import { startServer, stopServer } from "./server.js";

const PORT = 8210;
const BASE = `http://127.0.0.1:${PORT}`;

const wsFactory: SocketFactory = (url) => new WebSocket(url) as unknown as SocketLike;

let server: ChildProcess;

beforeAll(async () => {
  server = await startServer(PORT);
});

afterAll(async () => {
  await stopServer(server);
});

function client(fetchFn?: (url: string, init?: RequestInit) => Promise<Response>): ApiClient {
  return new ApiClient({ baseUrl: BASE, fetchFn });
}

async function uploadedView(api: ApiClient): Promise<UploadView> {
  const view = new UploadView(api);
  await view.uploadResume("resume.txt", new TextEncoder().encode(RESUME_TEXT));
  await view.uploadJobDescription("jd.txt", new TextEncoder().encode(JD_TEXT));
  return view;
}

async function openRoom(api: ApiClient): Promise<InterviewRoom> {
  const view = await uploadedView(api);
  const opened = await api.openSession(view.state.resume!.doc_id, view.state.jd!.doc_id);
  const room = new InterviewRoom(api, opened.session_id, opened.first_question, wsFactory);
  await room.connect();
  return room;
}

describe("upload and assessment", () => {
  it("renders the assessment sections the report JSON contains", async () => {
    const api = client();
    const view = await uploadedView(api);
    expect(view.state.resume!.chunks).toBeGreaterThanOrEqual(1);
    expect(view.state.jd!.doc_id).toMatch(/^[0-9a-f]{12}$/);
    expect(view.canAssess()).toBe(true);

    const report = await view.runAssessment();
    expect(report.report_version).toBe(1);
    const jsonKeys = Object.keys(report.section_scores);
    expect(jsonKeys.length).toBeGreaterThanOrEqual(3);
    expect(view.sectionNames()).toEqual(jsonKeys);

    const html = view.renderAssessment();
    for (const section of jsonKeys) {
      expect(html).toContain(`data-section="${section}"`);
    }
    for (const rec of report.recommendations) {
      expect(html).toContain(rec.slice(0, 24));
    }
    expect(view.renderErrorBanner()).toBe("");
  });

  it("surfaces an oversize upload as an error banner, verbatim", async () => {
    const api = client();
    const view = new UploadView(api);
    const oversize = new Uint8Array(5 * 1024 * 1024 + 1).fill(97);

    let thrown: ApiError | null = null;
    try {
      await view.uploadResume("big.txt", oversize);
    } catch (err) {
      thrown = err as ApiError;
    }
    expect(thrown).toBeInstanceOf(ApiError);
    expect(thrown!.status).toBe(413);
    expect(view.state.error).toBe(thrown!.detail);
    expect(view.renderErrorBanner()).toContain("banner error");
    expect(view.state.resume).toBeNull();
  });

  it("surfaces a bad document kind rejection verbatim", async () => {
    const api = client();
    let thrown: ApiError | null = null;
    try {
      await api.uploadDocument("x.txt", new TextEncoder().encode("hi"), "novel" as never);
    } catch (err) {
      thrown = err as ApiError;
    }
    expect(thrown!.status).toBe(400);
    expect(thrown!.detail).toContain("novel");
  });
});

describe("text-mode interview session", () => {
  it("runs to close, takes one rating per exchange, and reports the hand-computed ux", async () => {
    const api = client();
    const room = await openRoom(api);

    const replies: ReplyMessage[] = [];
    for (let i = 0; i < 20 && !room.closed; i++) {
      replies.push(await room.sendText(GOOD_ANSWER));
    }
    expect(room.closed).toBe(true);
    expect(replies.map((r) => r.action)).toEqual([
      ...Array<string>(replies.length - 1).fill("next_topic"),
      "close",
    ]);
    expect(replies.map((r) => r.exchange_index)).toEqual(
      replies.map((_, i) => i + 1),
    );

    // ten likes then dislikes: hand mean (10 - 2) / 12
    const values: Rating[] = replies.map((r) => (r.exchange_index <= 10 ? 1 : -1));
    for (const reply of replies) {
      const sent = await room.rate(reply.exchange_index, values[reply.exchange_index - 1]!);
      expect(sent).toBe(true);
    }
    const handMean =
      values.reduce((acc, v) => acc + v, 0) / values.length;

    const reportView = new ReportView(api, room.sessionId);
    await reportView.load();
    expect(reportView.state.status).toBe("ready");
    const report = reportView.state.report!;
    expect(report.ux).toBe(handMean);
    expect(reportView.uxDisplay()).toBe(formatUx(handMean));
    expect(reportView.uxDisplay()).toBe("0.67");
    expect(reportView.render()).toContain("<strong>0.67</strong>");

    // every rating the buttons sent is in the report, once
    expect(report.feedback.map((f) => [f.exchange_index, f.value])).toEqual(
      replies.map((r) => [r.exchange_index, values[r.exchange_index - 1]]),
    );

    // transcript order matches the audit stream exactly
    const { events } = await api.fetchAudit(room.sessionId);
    const auditTurns = events.filter((e) => e.kind === "turn").map((e) => e.payload);
    expect(report.transcript).toEqual(auditTurns);
    const local = room.transcript.map((t) => ({
      speaker: t.speaker,
      text: t.text,
      exchange_index: t.exchangeIndex,
    }));
    expect(local).toEqual(
      auditTurns.map((t) => ({
        speaker: t["speaker"],
        text: t["text"],
        exchange_index: t["exchange_index"],
      })),
    );

    // audit seq numbers are gapless from 1
    expect(events.map((e) => e.seq)).toEqual(events.map((_, i) => i + 1));
  });

  it("emits exactly one feedback request on a double-click", async () => {
    let feedbackRequests = 0;
    const counting = (url: string, init?: RequestInit) => {
      if (url.includes("/feedback")) feedbackRequests += 1;
      return fetch(url, init);
    };
    const api = client(counting);
    const room = await openRoom(api);
    await room.sendText(GOOD_ANSWER);

    const [first, second] = await Promise.all([room.rate(1, 1), room.rate(1, 1)]);
    expect([first, second].filter(Boolean)).toHaveLength(1);
    expect(feedbackRequests).toBe(1);

    // a later click on the same exchange stays local too
    expect(await room.rate(1, -1)).toBe(false);
    expect(feedbackRequests).toBe(1);
    expect(room.exchanges()[0]!.ratable).toBe(false);
    expect(room.exchanges()[0]!.rating).toBe(1);

    // the server agrees: one feedback event in the audit stream
    const { events } = await api.fetchAudit(room.sessionId);
    const feedbackEvents = events.filter((e) => e.kind === "feedback");
    expect(feedbackEvents).toHaveLength(1);
    expect(feedbackEvents[0]!.payload).toEqual({ exchange_index: 1, value: 1 });

    room.disconnect();
  });

  it("rejects ratings for unknown exchange indexes locally", async () => {
    const api = client();
    const room = await openRoom(api);
    await room.sendText(GOOD_ANSWER);
    expect(await room.rate(99, 1)).toBe(false);
    expect(await room.rate(0, 1)).toBe(false);
    room.disconnect();
  });

  it("reconstructs a mid-session view from the audit stream after a reload", async () => {
    const api = client();
    const room = await openRoom(api);
    await room.sendText(GOOD_ANSWER);
    await room.sendText(GOOD_ANSWER);
    await room.rate(1, -1);

    const reloaded = await InterviewRoom.fromAudit(api, room.sessionId, wsFactory);
    expect(reloaded.transcript).toEqual(room.transcript);
    expect(reloaded.ratings.entries()).toEqual(room.ratings.entries());
    expect(reloaded.closed).toBe(false);
    expect(reloaded.exchanges().map((e) => e.exchangeIndex)).toEqual([1, 2]);
    expect(reloaded.exchanges()[0]!.rating).toBe(-1);

    room.disconnect();
  });
});

describe("report view", () => {
  it("shows an in-progress state while the session is running", async () => {
    const api = client();
    const room = await openRoom(api);
    await room.sendText(GOOD_ANSWER);

    const view = new ReportView(api, room.sessionId);
    await view.load();
    expect(view.state.status).toBe("in_progress");
    expect(view.render()).toContain("in progress");

    room.disconnect();
  });

  it("formats ux to two decimals", () => {
    expect(formatUx(2 / 3)).toBe("0.67");
    expect(formatUx(1)).toBe("1.00");
    expect(formatUx(-1)).toBe("-1.00");
    expect(formatUx(0)).toBe("0.00");
    expect(formatUx(null)).toBe("n/a");
  });
});
