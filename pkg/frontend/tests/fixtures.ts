export const RESUME_TEXT = `Jordan Alvarez

Summary
Backend engineer with six years of experience building distributed systems.

Experience
Lead developer on a payment reconciliation pipeline processing millions of rows daily.
Mentored four junior engineers and ran weekly design reviews with the team.

Skills
Python, PostgreSQL, Kafka, Kubernetes, observability tooling.

Education
B.S. in Computer Science, State University.
`;

export const JD_TEXT = `Senior Backend Engineer

Role Overview
We are hiring a senior backend engineer to own our ingestion platform.

Responsibilities
Design resilient streaming services and lead incident reviews with the team.

Requirements
Five years of backend experience, strong collaboration habits, fluency with queues.

Team
You will join a squad of eight engineers working closely with product partners.
`;

/** Long answer that satisfies the mock interviewer's coverage check. */
export const GOOD_ANSWER =
  "Collaboration, engineering depth, and judgment under pressure guide my " +
  "work across the role overview, responsibilities, requirements, and team " +
  "focus. " +
  JD_TEXT.split(/\s+/).join(" ").trim();
