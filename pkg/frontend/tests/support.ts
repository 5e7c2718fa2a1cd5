// Shared test helpers.

/**
 * Stable single-line JSON with recursively sorted keys — the same canonical
 * form the service uses wherever byte-identity matters, so transcripts can
 * be compared across the wire and the CLI with ===.
 */
export function canonicalJson(value: unknown): string {
  return JSON.stringify(sortKeys(value));
}

function sortKeys(value: unknown): unknown {
  if (Array.isArray(value)) return value.map(sortKeys);
  if (value !== null && typeof value === "object") {
    const source = value as Record<string, unknown>;
    const out: Record<string, unknown> = {};
    for (const key of Object.keys(source).sort()) out[key] = sortKeys(source[key]);
    return out;
  }
  return value;
}

export async function until(condition: () => boolean, timeoutMs = 3000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!condition()) {
    if (Date.now() > deadline) throw new Error("condition not met in time");
    await new Promise((resolve) => setTimeout(resolve, 2));
  }
}

const encoder = new TextEncoder();

/** A finished SSE response: emits the given chunks, then the stream ends. */
export function sseResponse(...chunks: string[]): Response {
  const stream = new ReadableStream<Uint8Array>({
    start(controller) {
      for (const chunk of chunks) controller.enqueue(encoder.encode(chunk));
      controller.close();
    },
  });
  return new Response(stream, {
    status: 200,
    headers: { "content-type": "text/event-stream" },
  });
}

export interface LiveSse {
  response: Response;
  emit(chunk: string): void;
  end(): void;
  fail(): void;
}

/** An SSE response that stays open until the test ends or breaks it. */
export function liveSse(): LiveSse {
  let ctrl!: ReadableStreamDefaultController<Uint8Array>;
  const stream = new ReadableStream<Uint8Array>({
    start(controller) {
      ctrl = controller;
    },
  });
  return {
    response: new Response(stream, {
      status: 200,
      headers: { "content-type": "text/event-stream" },
    }),
    emit: (chunk) => ctrl.enqueue(encoder.encode(chunk)),
    end: () => ctrl.close(),
    fail: () => ctrl.error(new Error("connection reset")),
  };
}

export function frame(event: string, data: unknown): string {
  return `event: ${event}\ndata: ${JSON.stringify(data)}\n\n`;
}
