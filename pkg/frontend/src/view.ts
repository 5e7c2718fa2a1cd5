// HTML renderers for the console. Pure string-in/string-out so the whole
// view layer is unit-testable without a browser; main.ts owns the DOM.

import { badgeFor, presentationFor, type StagePresentation } from "./badges.js";
import type { StreamStatus } from "./sse.js";
import type { StudentView, TranscriptEntry } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function badgeHtml(student: StudentView, factor: number, view: StagePresentation): string {
  const badge = badgeFor(student, factor);
  const pct = Math.round(badge.displayed * 100);
  const hover = `${badge.label} — raw ${badge.raw.toFixed(3)}`;
  const numbers = view.showNumbers
    ? `<span class="badge-pct">${pct}%</span>
       <span class="badge-meter"><span class="badge-meter-fill" style="width:${pct}%"></span></span>`
    : "";
  return `<span class="badge badge-${view.badge}" title="${escapeHtml(hover)}">
    <span class="badge-glyph">${badge.glyph}</span>
    <span class="badge-label">${escapeHtml(badge.label)}</span>
    ${numbers}
  </span>`;
}

export function renderRoster(students: StudentView[], stage: string, factor: number): string {
  const view = presentationFor(stage);
  const cards = students
    .map((student) => {
      const utterance =
        student.last_utterance === null
          ? `<p class="utterance muted">— nothing yet —</p>`
          : `<p class="utterance">&ldquo;${escapeHtml(student.last_utterance)}&rdquo;</p>`;
      return `<article class="student-card" data-student="${escapeHtml(student.student_id)}">
        <header>
          <h3>${escapeHtml(student.display_name)}</h3>
          <span class="stage-chip">${escapeHtml(stage)}</span>
        </header>
        ${badgeHtml(student, factor, view)}
        ${utterance}
      </article>`;
    })
    .join("\n");
  return `<div class="roster-grid">${cards}</div>`;
}

export function renderTranscript(entries: TranscriptEntry[], stage: string): string {
  const view = presentationFor(stage);
  const rows = entries
    .map((entry) => {
      const who = entry.speaker === "teacher" ? "teacher" : "student";
      const instruction =
        view.showNumbers && entry.instruction !== undefined
          ? `<div class="entry-instruction">${escapeHtml(entry.instruction)}</div>`
          : "";
      return `<li class="entry entry-${who}" data-turn="${entry.turn}">
        <span class="entry-speaker">${escapeHtml(entry.speaker)}</span>
        <span class="entry-text">${escapeHtml(entry.text)}</span>
        ${instruction}
      </li>`;
    })
    .join("\n");
  return `<ol class="transcript">${rows}</ol>`;
}

export function renderBanner(status: StreamStatus, detail?: string): string {
  switch (status) {
    case "live":
      return "";
    case "connecting":
      return `<div class="banner banner-info">connecting&hellip;</div>`;
    case "reconnecting":
      return `<div class="banner banner-lost">${escapeHtml(detail ?? "CONNECTION_LOST")} &mdash; retrying&hellip;</div>`;
    case "closed":
      return detail === undefined
        ? ""
        : `<div class="banner banner-error">${escapeHtml(detail)}</div>`;
  }
}

export function renderToast(code: string, message: string): string {
  return `<div class="toast" role="alert"><strong>[${escapeHtml(code)}]</strong> ${escapeHtml(message)}</div>`;
}

export function renderIssues(issues: { field: string; message: string }[]): string {
  if (issues.length === 0) return "";
  const items = issues
    .map((issue) => `<li data-field="${escapeHtml(issue.field)}">${escapeHtml(issue.message)}</li>`)
    .join("");
  return `<ul class="issues">${items}</ul>`;
}
