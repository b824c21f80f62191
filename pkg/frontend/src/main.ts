import { ApiClient } from "./api.js";
import { renderAvatarPane } from "./avatar.js";
import { MicRecorder, playBase64Wav } from "./mic.js";
import { ReportView } from "./report.js";
import { InterviewRoom } from "./room.js";
import { escapeHtml, UploadView } from "./upload.js";
import type { Rating } from "./types.js";

const api = new ApiClient({ baseUrl: window.location.origin });
const uploadView = new UploadView(api);
const mic = new MicRecorder();
let room: InterviewRoom | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function renderUpload(): void {
  const { resume, jd, busy } = uploadView.state;
  el("upload-status").innerHTML = [
    uploadView.renderErrorBanner(),
    `<p>Resume: ${resume ? `${resume.doc_id} (${resume.chunks} chunks)` : "not uploaded"}</p>`,
    `<p>Job description: ${jd ? `${jd.doc_id} (${jd.chunks} chunks)` : "not uploaded"}</p>`,
  ].join("\n");
  (el<HTMLButtonElement>("assess")).disabled = !uploadView.canAssess() || busy;
  (el<HTMLButtonElement>("start-session")).disabled = !(resume && jd);
  el("assessment").innerHTML = uploadView.renderAssessment();
}

function renderRoom(): void {
  if (!room) return;
  el("avatar").innerHTML = renderAvatarPane(room.pendingReply);
  const items = room.exchanges().map((ex) => {
    const buttons = ex.ratable
      ? `<button class="like" data-ex="${ex.exchangeIndex}" data-v="1">Like</button>
         <button class="dislike" data-ex="${ex.exchangeIndex}" data-v="-1">Dislike</button>`
      : `<span class="rated">${ex.rating === 1 ? "Liked" : "Disliked"}</span>`;
    return [
      `<li class="exchange" data-ex="${ex.exchangeIndex}">`,
      `<p class="answer">${escapeHtml(ex.answer)}</p>`,
      `<p class="reply">${escapeHtml(ex.reply)}</p>`,
      `<div class="rate">${buttons}</div>`,
      `</li>`,
    ].join("");
  });
  const greeting = room.transcript[0];
  el("exchanges").innerHTML =
    `<li class="greeting">${escapeHtml(greeting ? greeting.text : "")}</li>` + items.join("\n");
  (el<HTMLButtonElement>("send")).disabled = room.pendingReply || room.closed;
  (el<HTMLButtonElement>("record")).disabled = room.closed;
  el("session-state").textContent = room.closed
    ? "Session closed. Open the report below."
    : room.pendingReply
      ? "Waiting for the interviewer..."
      : "Your turn.";
}

async function showReport(): Promise<void> {
  if (!room) return;
  const view = new ReportView(api, room.sessionId);
  await view.load().catch(() => undefined);
  el("report").innerHTML = view.render();
}

async function startSession(): Promise<void> {
  const { resume, jd } = uploadView.state;
  if (!resume || !jd) return;
  const opened = await api.openSession(resume.doc_id, jd.doc_id, resume.language);
  room = new InterviewRoom(api, opened.session_id, opened.first_question, (url) => new WebSocket(url));
  await room.connect();
  el("room").hidden = false;
  renderRoom();
}

async function sendAnswer(): Promise<void> {
  if (!room || room.pendingReply) return;
  const input = el<HTMLTextAreaElement>("answer");
  const text = input.value.trim();
  if (!text) return;
  input.value = "";
  renderRoom();
  const reply = await room.sendText(text);
  if (reply.audio) playBase64Wav(reply.audio);
  renderRoom();
  if (room.closed) await showReport();
}

async function toggleRecording(): Promise<void> {
  if (!room || room.closed) return;
  const button = el<HTMLButtonElement>("record");
  if (!mic.recording) {
    await mic.start();
    button.textContent = "Stop and send";
    return;
  }
  const wav = await mic.stop();
  button.textContent = "Record answer";
  const reply = await room.sendAudio(wav);
  if (reply.audio) playBase64Wav(reply.audio);
  renderRoom();
  if (room.closed) await showReport();
}

function wire(): void {
  el("resume-file").addEventListener("change", async (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (file) await uploadView.uploadResume(file.name, file).catch(() => undefined);
    renderUpload();
  });
  el("jd-file").addEventListener("change", async (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (file) await uploadView.uploadJobDescription(file.name, file).catch(() => undefined);
    renderUpload();
  });
  el("assess").addEventListener("click", async () => {
    await uploadView.runAssessment().catch(() => undefined);
    renderUpload();
  });
  el("start-session").addEventListener("click", () => void startSession());
  el("send").addEventListener("click", () => void sendAnswer());
  el("record").addEventListener("click", () => void toggleRecording());
  el("exchanges").addEventListener("click", async (event) => {
    const target = event.target as HTMLElement;
    if (!room || target.tagName !== "BUTTON" || !target.dataset.ex) return;
    const exchangeIndex = Number(target.dataset.ex);
    const value = Number(target.dataset.v) as Rating;
    await room.rate(exchangeIndex, value).catch(() => undefined);
    renderRoom();
  });
  el("avatar").innerHTML = renderAvatarPane(false);
  renderUpload();
}

wire();
