// Server-push plumbing: an incremental parser for text/event-stream bodies
// and a reconnecting subscription over fetch(). The server emits `hello` on
// subscribe, then `transcript` and `emotion` frames per teacher event, plus
// `: keepalive` comments on idle — comments are dropped here.

import type { SessionApi, FetchLike } from "./api.js";
import type { EmotionFrame, HelloFrame, TranscriptFrame } from "./types.js";

export interface RawFrame {
  event: string;
  data: string;
}

export class SseParser {
  private buffer = "";

  /** Feed a decoded chunk; returns every complete frame it finished. */
  push(chunk: string): RawFrame[] {
    this.buffer = (this.buffer + chunk).replace(/\r\n/g, "\n");
    const frames: RawFrame[] = [];
    let boundary = this.buffer.indexOf("\n\n");
    while (boundary !== -1) {
      const block = this.buffer.slice(0, boundary);
      this.buffer = this.buffer.slice(boundary + 2);
      const frame = parseBlock(block);
      if (frame !== null) frames.push(frame);
      boundary = this.buffer.indexOf("\n\n");
    }
    return frames;
  }
}

function parseBlock(block: string): RawFrame | null {
  let event = "message";
  const dataLines: string[] = [];
  for (const line of block.split("\n")) {
    if (line === "" || line.startsWith(":")) continue;
    const colon = line.indexOf(":");
    const field = colon === -1 ? line : line.slice(0, colon);
    let value = colon === -1 ? "" : line.slice(colon + 1);
    if (value.startsWith(" ")) value = value.slice(1);
    if (field === "event") event = value;
    else if (field === "data") dataLines.push(value);
  }
  if (dataLines.length === 0) return null;
  return { event, data: dataLines.join("\n") };
}

export type StreamStatus = "connecting" | "live" | "reconnecting" | "closed";

export interface StreamHandlers {
  onHello?: (frame: HelloFrame) => void;
  onTranscript?: (frame: TranscriptFrame) => void;
  onEmotion?: (frame: EmotionFrame) => void;
  onStatus?: (status: StreamStatus, detail?: string) => void;
}

export interface StreamOptions {
  fetchFn?: FetchLike;
  baseDelayMs?: number;
  maxDelayMs?: number;
}

export interface StreamHandle {
  close(): void;
  status(): StreamStatus;
}

export const BASE_DELAY_MS = 1000;
export const MAX_DELAY_MS = 30000;

export function reconnectDelayMs(
  attempt: number,
  base: number = BASE_DELAY_MS,
  max: number = MAX_DELAY_MS,
): number {
  return Math.min(base * 2 ** attempt, max);
}

/**
 * Subscribe to a session's event stream. Reconnects with exponential backoff
 * on drops (surfacing a CONNECTION_LOST detail so the UI can show a banner)
 * and never invents frames: everything delivered came off the wire. A 404 on
 * subscribe means the session does not exist — that is surfaced and the
 * stream stays closed rather than retrying into the void.
 */
export function connectStream(
  api: SessionApi,
  sessionId: string,
  handlers: StreamHandlers,
  options: StreamOptions = {},
): StreamHandle {
  const fetchFn: FetchLike = options.fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  const base = options.baseDelayMs ?? BASE_DELAY_MS;
  const max = options.maxDelayMs ?? MAX_DELAY_MS;

  let closed = false;
  let status: StreamStatus = "connecting";
  let attempt = 0;
  let controller: AbortController | null = null;
  let wakeTimer: ReturnType<typeof setTimeout> | null = null;
  let wake: (() => void) | null = null;

  function setStatus(next: StreamStatus, detail?: string): void {
    status = next;
    handlers.onStatus?.(next, detail);
  }

  function dispatch(frame: RawFrame): void {
    let data: unknown;
    try {
      data = JSON.parse(frame.data);
    } catch {
      return; // not one of ours
    }
    switch (frame.event) {
      case "hello":
        attempt = 0;
        setStatus("live");
        handlers.onHello?.(data as HelloFrame);
        break;
      case "transcript":
        handlers.onTranscript?.(data as TranscriptFrame);
        break;
      case "emotion":
        handlers.onEmotion?.(data as EmotionFrame);
        break;
      default:
        break; // unknown frame kinds are ignored, not guessed at
    }
  }

  function sleep(ms: number): Promise<void> {
    return new Promise((resolve) => {
      wake = resolve;
      wakeTimer = setTimeout(() => {
        wakeTimer = null;
        wake = null;
        resolve();
      }, ms);
    });
  }

  async function run(): Promise<void> {
    setStatus("connecting");
    while (!closed) {
      controller = new AbortController();
      try {
        const response = await fetchFn(api.streamUrl(sessionId), {
          headers: { accept: "text/event-stream" },
          signal: controller.signal,
        });
        if (response.status === 404) {
          setStatus("closed", "UNKNOWN_SESSION");
          return;
        }
        if (!response.ok || response.body === null) {
          throw new Error(`stream request failed with status ${response.status}`);
        }
        const reader = response.body.getReader();
        const decoder = new TextDecoder();
        const parser = new SseParser();
        for (;;) {
          const { done, value } = await reader.read();
          if (done) break;
          for (const frame of parser.push(decoder.decode(value, { stream: true }))) {
            dispatch(frame);
          }
        }
      } catch {
        // fall through to the reconnect path unless close() raced us
      }
      if (closed) return;
      setStatus("reconnecting", "CONNECTION_LOST");
      await sleep(reconnectDelayMs(attempt, base, max));
      attempt += 1;
    }
  }

  void run();

  return {
    close(): void {
      if (closed) return;
      closed = true;
      controller?.abort();
      if (wakeTimer !== null) clearTimeout(wakeTimer);
      wake?.();
      setStatus("closed");
    },
    status(): StreamStatus {
      return status;
    },
  };
}
