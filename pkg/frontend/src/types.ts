/** Wire shapes of the interviewkit HTTP/WebSocket API. */

export interface UploadResult {
  doc_id: string;
  kind: string;
  language: string;
  chunks: number;
}

export interface AssessmentResult {
  resume_id: string;
  jd_id: string;
  report_version: number;
  assessment_text: string;
  section_scores: Record<string, number>;
  section_feedback: Record<string, string>;
  recommendations: string[];
}

export interface SessionOpenResult {
  session_id: string;
  first_question: string;
  bank_size: number;
}

export type ReplyAction = "follow_up" | "next_topic" | "close";

export interface ReplyMessage {
  type: "reply";
  text: string;
  exchange_index: number;
  action: ReplyAction;
  /** base64 WAV, present only when the candidate turn was audio */
  audio?: string;
}

export type Speaker = "interviewer" | "candidate";

export interface TranscriptTurn {
  speaker: Speaker;
  text: string;
  timestamp: number;
  exchange_index: number;
}

export interface QuestionSummary {
  question_id: string;
  text: string;
  qtype: string;
  difficulty: string;
  asked: boolean;
  coverage: number | null;
  followups: number;
}

export interface FeedbackEntry {
  exchange_index: number;
  value: number;
  timestamp: number;
}

export interface SessionReport {
  report_version: number;
  session_id: string;
  language: string;
  resume_doc_id: string;
  jd_doc_id: string;
  started_at: number;
  ended_at: number;
  duration_seconds: number;
  ux: number | null;
  transcript: TranscriptTurn[];
  questions: QuestionSummary[];
  feedback: FeedbackEntry[];
  decisions: Array<Record<string, unknown>>;
}

export interface AuditEvent {
  seq: number;
  session_id: string;
  kind: string;
  payload: Record<string, unknown>;
  payload_digest: string;
  timestamp: number;
}

export type Rating = 1 | -1;
