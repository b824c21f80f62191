/**
 * Interviewer pane. Avatar video is out of scope, so the pane holds a
 * fixed illustration that lights up while a reply is pending.
 */
export function renderAvatarPane(thinking: boolean): string {
  return [
    `<aside class="avatar-pane${thinking ? " thinking" : ""}">`,
    `<svg viewBox="0 0 120 120" class="avatar" aria-label="interviewer placeholder">`,
    `<circle cx="60" cy="60" r="56" class="face"/>`,
    `<circle cx="42" cy="50" r="6" class="eye"/>`,
    `<circle cx="78" cy="50" r="6" class="eye"/>`,
    `<path d="M 40 78 Q 60 ${thinking ? 78 : 92} 80 78" class="mouth" fill="none"/>`,
    `</svg>`,
    `<p class="caption">${thinking ? "Thinking..." : "Your interviewer"}</p>`,
    `</aside>`,
  ].join("\n");
}
