// Pure view-state machine for one evaluation session.
//
// Stages move forward only:
//   Comparing -> Confidence -> Revealed -> Rating -> (next trial | Done)
// Confidence and ratings are clamped to integers 1..5 at the state
// boundary, so no widget interaction can produce an out-of-range value.

import type { Position, RevealResponse, TrialPayload } from "./api.js";

export type ViewStage = "Comparing" | "Confidence" | "Revealed" | "Rating" | "Done";

export interface RatingsDraft {
  thematic_faithfulness: number;
  artistic_merit: number;
  overall_quality: number;
}

export interface UiTrialState {
  stage: ViewStage;
  trial: TrialPayload | null;
  choice: Position | null;
  confidence: number;
  ratings: RatingsDraft;
  reveal: RevealResponse | null;
  completedTrials: number;
  totalPairs: number;
  submitting: boolean;
  error: string | null;
  vertical: boolean;
}

export function initialState(): UiTrialState {
  return {
    stage: "Done",
    trial: null,
    choice: null,
    confidence: 3,
    ratings: { thematic_faithfulness: 3, artistic_merit: 3, overall_quality: 3 },
    reveal: null,
    completedTrials: 0,
    totalPairs: 0,
    submitting: false,
    error: null,
    vertical: false,
  };
}

export function clampScore(value: number): number {
  if (!Number.isFinite(value)) return 1;
  return Math.min(5, Math.max(1, Math.round(value)));
}

export class StageError extends Error {
  constructor(from: ViewStage, action: string) {
    super(`cannot ${action} while in stage ${from}`);
    this.name = "StageError";
  }
}

export function startTrial(state: UiTrialState, trial: TrialPayload): UiTrialState {
  return {
    ...initialState(),
    stage: "Comparing",
    trial,
    vertical: state.vertical,
    completedTrials: trial.progress.completed,
    totalPairs: trial.progress.total,
  };
}

export function markExhausted(state: UiTrialState, completed: number): UiTrialState {
  return { ...state, stage: "Done", trial: null, completedTrials: completed };
}

export function selectPoem(state: UiTrialState, choice: Position): UiTrialState {
  if (state.stage !== "Comparing" && state.stage !== "Confidence") {
    throw new StageError(state.stage, "select a poem");
  }
  return { ...state, stage: "Confidence", choice };
}

export function setConfidence(state: UiTrialState, value: number): UiTrialState {
  if (state.stage !== "Confidence") {
    throw new StageError(state.stage, "set confidence");
  }
  return { ...state, confidence: clampScore(value) };
}

export function beginSubmit(state: UiTrialState): UiTrialState {
  return { ...state, submitting: true, error: null };
}

export function failSubmit(state: UiTrialState, detail: string): UiTrialState {
  return { ...state, submitting: false, error: detail };
}

export function applyReveal(state: UiTrialState, reveal: RevealResponse): UiTrialState {
  if (state.stage !== "Confidence") {
    throw new StageError(state.stage, "apply a reveal");
  }
  return { ...state, stage: "Revealed", reveal, submitting: false, error: null };
}

export function proceedToRating(state: UiTrialState): UiTrialState {
  if (state.stage !== "Revealed") {
    throw new StageError(state.stage, "start rating");
  }
  return { ...state, stage: "Rating" };
}

export function setRating(
  state: UiTrialState,
  dimension: keyof RatingsDraft,
  value: number,
): UiTrialState {
  if (state.stage !== "Rating") {
    throw new StageError(state.stage, "set a rating");
  }
  return {
    ...state,
    ratings: { ...state.ratings, [dimension]: clampScore(value) },
  };
}

export function applyRatingsAck(state: UiTrialState): UiTrialState {
  if (state.stage !== "Rating") {
    throw new StageError(state.stage, "complete ratings");
  }
  return {
    ...state,
    stage: "Done",
    submitting: false,
    error: null,
    completedTrials: state.completedTrials + 1,
  };
}

export function toggleVertical(state: UiTrialState): UiTrialState {
  return { ...state, vertical: !state.vertical };
}

// The generated poem's position: derivable only from the server reveal.
export function generatedPosition(reveal: RevealResponse): Position {
  return reveal.human === "First" ? "Second" : "First";
}
