// Emotion badge model. A badge is the student's dominant emotion as reported
// by the server, scaled for display by the session's exaggeration factor.
// The scaling is presentation-only: the raw stored intensity rides along so
// the UI can reveal it on hover, and nothing here feeds back into simulation.

import type { StudentView } from "./types.js";

export function clamp01(value: number): number {
  return value < 0 ? 0 : value > 1 ? 1 : value;
}

/** Displayed intensity = stored intensity × exaggeration factor, clamped. */
export function displayIntensity(raw: number, exaggerationFactor: number): number {
  return clamp01(raw * exaggerationFactor);
}

export const EMOTION_GLYPHS: Record<string, string> = {
  joy: "😄",
  engagement: "🙋",
  confusion: "😕",
  anxiety_shyness: "😰",
  pride_accomplishment: "😌",
  resentment: "😒",
  boredom: "🥱",
  frustration: "😤",
  curiosity: "🤔",
  excitement: "🤩",
};

export function emotionLabel(emotionId: string): string {
  return emotionId
    .split("_")
    .map((word) => word.charAt(0).toUpperCase() + word.slice(1))
    .join(" ");
}

export interface Badge {
  emotion: string;
  glyph: string;
  label: string;
  raw: number;
  displayed: number;
}

export function badgeFor(student: StudentView, exaggerationFactor: number): Badge {
  const emotion = student.dominant_emotion;
  const raw = student.emotions[emotion] ?? 0;
  return {
    emotion,
    glyph: EMOTION_GLYPHS[emotion] ?? "❔",
    label: emotionLabel(emotion),
    raw,
    displayed: displayIntensity(raw, exaggerationFactor),
  };
}

export type BadgeMode = "large" | "standard" | "hover";

export interface StagePresentation {
  badge: BadgeMode;
  /** Whether numeric intensities are printed next to the badge. */
  showNumbers: boolean;
}

/**
 * How loudly affect is displayed per realism stage: Stage1 trains on big
 * iconographic badges with the numbers in plain sight; Stage3 tucks the badge
 * behind hover and hides the numbers entirely. Stage2 sits between — a
 * standard badge, numbers already hidden. Unknown stages get the middle
 * treatment rather than crashing the view.
 */
export function presentationFor(stage: string): StagePresentation {
  switch (stage) {
    case "Stage1":
      return { badge: "large", showNumbers: true };
    case "Stage3":
      return { badge: "hover", showNumbers: false };
    default:
      return { badge: "standard", showNumbers: false };
  }
}
