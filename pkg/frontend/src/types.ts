// Wire types for the session-service HTTP/JSON API. Field names mirror the
// server payloads exactly; everything rendered by the console comes from one
// of these shapes — never from a local guess about what the simulator did.

export type EventKind =
  | "ask_question"
  | "compliment"
  | "harsh_critique"
  | "instruction"
  | "proximity"
  | "wait";

export type Stage = "Stage1" | "Stage2" | "Stage3";

export interface TeacherEventBody {
  kind: EventKind;
  target?: string;
  topic_tags?: string[];
  text?: string;
  near?: boolean;
}

export interface SessionCreateBody {
  roster_path?: string;
  roster?: unknown;
  stage?: Stage;
  seed?: number;
  backend?: string;
  config?: Record<string, unknown>;
}

export interface StudentView {
  student_id: string;
  display_name: string;
  emotions: Record<string, number>;
  dominant_emotion: string;
  last_utterance: string | null;
}

export interface TranscriptEntry {
  turn: number;
  speaker: string;
  text: string;
  instruction?: string;
}

export interface SessionSnapshot {
  session_id: string;
  roster_id: string;
  stage: Stage;
  exaggeration_factor: number;
  turn: number;
  students: StudentView[];
  transcript: TranscriptEntry[];
  metrics: Record<string, unknown>;
}

export interface UtteranceView {
  text: string;
  stage_direction: string | null;
  backend_id: string;
  latency_ms: number;
}

export interface StudentResponseView {
  student_id: string;
  instruction: string;
  action: string;
  confidence_pct: number;
  emotion: string;
  tone: string;
  contextual_note: string | null;
  node_id: string;
  utterance: UtteranceView;
}

export interface EventResult {
  session_id: string;
  turn: number;
  responses: StudentResponseView[];
  students: StudentView[];
}

export interface BenchmarkBody {
  per_call_latency_ms?: number;
  stages?: number;
  beam?: number;
  turns?: number;
  seed?: number;
}

export interface PipelineStats {
  label: string;
  performer_calls: number;
  calls_per_turn: number;
  wall_ms: number;
}

export interface BenchmarkReport {
  config: Record<string, unknown>;
  single: PipelineStats;
  baseline: PipelineStats;
  speedup: number;
}

// Server-push frames on GET /sessions/{id}/stream.
export interface HelloFrame {
  session_id: string;
  turn: number;
}

export interface TranscriptFrame {
  session_id: string;
  entry: TranscriptEntry;
}

export interface EmotionFrame {
  session_id: string;
  turn: number;
  exaggeration_factor: number;
  students: StudentView[];
}
