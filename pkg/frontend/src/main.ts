// Browser entry point: wires the form, the stream, and the renderers to the
// DOM. All state shown here was fetched or pushed from the service — the
// console never simulates anything locally, and closing the tab changes no
// session outcome.

import { ApiError, SessionApi } from "./api.js";
import { buildEvent, EVENT_KINDS, TARGETED_KINDS } from "./composer.js";
import { connectStream, type StreamHandle, type StreamStatus } from "./sse.js";
import type { SessionSnapshot, StudentView, TranscriptEntry } from "./types.js";
import { renderBanner, renderIssues, renderRoster, renderToast, renderTranscript } from "./view.js";

interface ConsoleState {
  api: SessionApi | null;
  sessionId: string | null;
  stage: string;
  exaggerationFactor: number;
  students: StudentView[];
  transcript: TranscriptEntry[];
  stream: StreamHandle | null;
}

const state: ConsoleState = {
  api: null,
  sessionId: null,
  stage: "Stage1",
  exaggerationFactor: 1,
  students: [],
  transcript: [],
  stream: null,
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

function repaint(): void {
  el("roster").innerHTML = renderRoster(state.students, state.stage, state.exaggerationFactor);
  el("transcript").innerHTML = renderTranscript(state.transcript, state.stage);
  el("session-label").textContent =
    state.sessionId === null ? "no session" : `session ${state.sessionId} · ${state.stage}`;
}

function applySnapshot(snapshot: SessionSnapshot): void {
  state.sessionId = snapshot.session_id;
  state.stage = snapshot.stage;
  state.exaggerationFactor = snapshot.exaggeration_factor;
  state.students = snapshot.students;
  state.transcript = snapshot.transcript;
  const targetSelect = el<HTMLSelectElement>("target");
  targetSelect.innerHTML = snapshot.students
    .map((s) => `<option value="${s.student_id}">${s.display_name}</option>`)
    .join("");
  repaint();
}

let toastTimer: ReturnType<typeof setTimeout> | null = null;

function showToast(code: string, message: string): void {
  el("toast").innerHTML = renderToast(code, message);
  if (toastTimer !== null) clearTimeout(toastTimer);
  toastTimer = setTimeout(() => {
    el("toast").innerHTML = "";
  }, 6000);
}

function onStatus(status: StreamStatus, detail?: string): void {
  el("banner").innerHTML = renderBanner(status, detail);
  if (status === "live" && state.api !== null && state.sessionId !== null) {
    // Re-sync from the source of truth after every (re)connect; anything
    // missed while offline comes from the snapshot, never from guessing.
    state.api.getSnapshot(state.sessionId).then(applySnapshot, () => undefined);
  }
}

function subscribe(): void {
  if (state.api === null || state.sessionId === null) return;
  state.stream?.close(); // one live subscription per session, ever
  state.stream = connectStream(state.api, state.sessionId, {
    onStatus,
    onTranscript: (frame) => {
      state.transcript.push(frame.entry);
      repaint();
    },
    onEmotion: (frame) => {
      state.exaggerationFactor = frame.exaggeration_factor;
      state.students = frame.students;
      repaint();
    },
  });
}

async function createSession(): Promise<void> {
  const base = el<HTMLInputElement>("base-url").value.trim().replace(/\/$/, "");
  state.api = new SessionApi(base);
  try {
    const snapshot = await state.api.createSession({
      stage: el<HTMLSelectElement>("stage").value as SessionSnapshot["stage"],
      seed: Number(el<HTMLInputElement>("seed").value) || 0,
    });
    applySnapshot(snapshot);
    subscribe();
  } catch (error) {
    surface(error);
  }
}

async function connectExisting(): Promise<void> {
  const base = el<HTMLInputElement>("base-url").value.trim().replace(/\/$/, "");
  const sessionId = el<HTMLInputElement>("session-id").value.trim();
  if (sessionId === "") return;
  state.api = new SessionApi(base);
  try {
    applySnapshot(await state.api.getSnapshot(sessionId));
    subscribe();
  } catch (error) {
    surface(error);
  }
}

function surface(error: unknown): void {
  if (error instanceof ApiError) showToast(error.code, error.message);
  else showToast("NETWORK", String(error));
}

async function submitAction(): Promise<void> {
  if (state.api === null || state.sessionId === null) {
    showToast("NO_SESSION", "create or connect to a session first");
    return;
  }
  const result = buildEvent({
    kind: el<HTMLSelectElement>("kind").value,
    target: el<HTMLSelectElement>("target").value,
    topicTags: el<HTMLInputElement>("tags").value,
    text: el<HTMLInputElement>("text").value,
    near: el<HTMLInputElement>("near").checked,
  });
  if (!result.ok) {
    el("issues").innerHTML = renderIssues(result.issues);
    return; // malformed form: inline messages, no request
  }
  el("issues").innerHTML = "";
  try {
    await state.api.submitEvent(state.sessionId, result.event);
    // Responses and badge updates arrive on the stream; the reply is not
    // rendered directly so there is exactly one path onto the screen.
    el<HTMLInputElement>("text").value = "";
  } catch (error) {
    surface(error); // toast with the error code; the form keeps its values
  }
}

function toggleComposerFields(): void {
  const kind = el<HTMLSelectElement>("kind").value;
  el<HTMLSelectElement>("target").disabled = !TARGETED_KINDS.has(kind);
  el<HTMLInputElement>("tags").disabled = kind !== "ask_question";
  el<HTMLInputElement>("near").disabled = kind !== "proximity";
}

function init(): void {
  const kindSelect = el<HTMLSelectElement>("kind");
  kindSelect.innerHTML = EVENT_KINDS.map((k) => `<option value="${k}">${k}</option>`).join("");
  kindSelect.addEventListener("change", toggleComposerFields);
  toggleComposerFields();
  el("create-btn").addEventListener("click", () => void createSession());
  el("connect-btn").addEventListener("click", () => void connectExisting());
  el<HTMLFormElement>("composer").addEventListener("submit", (event) => {
    event.preventDefault();
    void submitAction();
  });
  repaint();
}

if (typeof document !== "undefined") {
  init();
}
