// View-state transitions for one play session. Pure functions: the DOM
// layer renders whatever state says, and every transition is driven by a
// server response.

import type { AnswerResult, SessionView } from "./api.js";

export type Phase = "loading" | "playing" | "solved" | "session-complete" | "error";

export interface PlayViewState {
  phase: Phase;
  sessionId: string | null;
  prompt: string;
  game: string;
  difficulty: string;
  index: number;
  puzzleCount: number;
  attempts: number;
  timerSeconds: number;
  feedback: string[];
  lastElapsedS: number | null;
  errorMessage: string | null;
}

export function initialState(): PlayViewState {
  return {
    phase: "loading",
    sessionId: null,
    prompt: "",
    game: "",
    difficulty: "",
    index: 0,
    puzzleCount: 0,
    attempts: 0,
    timerSeconds: 0,
    feedback: [],
    lastElapsedS: null,
    errorMessage: null,
  };
}

export function applySessionView(
  state: PlayViewState,
  view: SessionView,
): PlayViewState {
  const sessionId = view.session_id ?? state.sessionId;
  if (view.complete || view.puzzle === null) {
    return {
      ...state,
      sessionId,
      phase: "session-complete",
      prompt: "",
      index: view.index,
      puzzleCount: view.puzzle_count,
      feedback: [],
    };
  }
  return {
    ...state,
    sessionId,
    phase: "playing",
    prompt: view.puzzle.prompt,
    game: view.puzzle.game,
    difficulty: view.puzzle.difficulty,
    index: view.index,
    puzzleCount: view.puzzle_count,
    attempts: view.puzzle.attempts,
    timerSeconds: 0,
    feedback: [],
    lastElapsedS: null,
    errorMessage: null,
  };
}

export function applyAnswerResult(
  state: PlayViewState,
  result: AnswerResult,
): PlayViewState {
  // Attempt counts always mirror the server's, never a local increment.
  if (result.solved) {
    return {
      ...state,
      phase: "solved",
      attempts: result.attempts,
      feedback: [],
      lastElapsedS: result.elapsed_s ?? null,
    };
  }
  return {
    ...state,
    phase: "playing",
    attempts: result.attempts,
    feedback: result.feedback,
  };
}

export function applyError(state: PlayViewState, message: string): PlayViewState {
  return { ...state, phase: "error", errorMessage: message };
}

export function tickTimer(state: PlayViewState): PlayViewState {
  if (state.phase !== "playing") {
    return state;
  }
  return { ...state, timerSeconds: state.timerSeconds + 1 };
}
