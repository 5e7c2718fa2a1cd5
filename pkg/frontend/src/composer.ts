// Action composer: turns raw form fields into a well-formed teacher event or
// a list of inline validation issues. Nothing leaves the console unless it
// would satisfy the server's schema — an empty question never becomes a
// request, it becomes a message under the text box.

import type { EventKind, TeacherEventBody } from "./types.js";

export const EVENT_KINDS: readonly EventKind[] = [
  "ask_question",
  "compliment",
  "harsh_critique",
  "instruction",
  "proximity",
  "wait",
];

/** Kinds that address one student and therefore need a target id. */
export const TARGETED_KINDS: ReadonlySet<string> = new Set([
  "ask_question",
  "compliment",
  "harsh_critique",
  "proximity",
]);

export interface ComposerForm {
  kind: string;
  target: string;
  topicTags: string;
  text: string;
  near: boolean;
}

export interface ComposerIssue {
  field: "kind" | "target" | "text";
  message: string;
}

export type ComposerResult =
  | { ok: true; event: TeacherEventBody }
  | { ok: false; issues: ComposerIssue[] };

/** Comma/whitespace separated → trimmed, lower-cased, de-duplicated tags. */
export function parseTopicTags(input: string): string[] {
  const tags: string[] = [];
  for (const piece of input.split(/[\s,]+/)) {
    const tag = piece.trim().toLowerCase();
    if (tag !== "" && !tags.includes(tag)) tags.push(tag);
  }
  return tags;
}

export function buildEvent(form: ComposerForm): ComposerResult {
  const issues: ComposerIssue[] = [];
  const kind = form.kind as EventKind;
  if (!EVENT_KINDS.includes(kind)) {
    issues.push({ field: "kind", message: `unknown event kind: ${form.kind || "(none)"}` });
    return { ok: false, issues };
  }

  const target = form.target.trim();
  if (TARGETED_KINDS.has(kind) && target === "") {
    issues.push({ field: "target", message: `${kind} needs a target student` });
  }
  const text = form.text.trim();
  if (kind === "ask_question" && text === "") {
    issues.push({ field: "text", message: "question text cannot be empty" });
  }
  if (issues.length > 0) {
    return { ok: false, issues };
  }

  const event: TeacherEventBody = { kind, text };
  if (TARGETED_KINDS.has(kind)) event.target = target;
  if (kind === "ask_question") event.topic_tags = parseTopicTags(form.topicTags);
  if (kind === "proximity") event.near = form.near;
  return { ok: true, event };
}
