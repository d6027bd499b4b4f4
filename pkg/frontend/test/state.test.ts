import { describe, expect, it } from "vitest";

import type { AnswerResult, SessionView } from "../src/api.js";
import {
  applyAnswerResult,
  applyError,
  applySessionView,
  initialState,
  tickTimer,
} from "../src/state.js";

const view: SessionView = {
  session_id: "s1",
  puzzle_count: 2,
  index: 0,
  complete: false,
  puzzle: {
    instance_id: "i1",
    game: "islands",
    difficulty: "hard",
    prompt: "grid prompt",
    attempts: 0,
  },
};

describe("state transitions", () => {
  it("enters playing with a fresh timer on a session view", () => {
    const state = applySessionView(initialState(), view);
    expect(state.phase).toBe("playing");
    expect(state.prompt).toBe("grid prompt");
    expect(state.timerSeconds).toBe(0);
    expect(state.attempts).toBe(0);
    expect(state.sessionId).toBe("s1");
  });

  it("enters session-complete when the view has no puzzle", () => {
    const done: SessionView = {
      puzzle_count: 2,
      index: 2,
      complete: true,
      puzzle: null,
    };
    const state = applySessionView(applySessionView(initialState(), view), done);
    expect(state.phase).toBe("session-complete");
    expect(state.sessionId).toBe("s1");
  });

  it("mirrors server attempts and keeps feedback verbatim on a miss", () => {
    const playing = applySessionView(initialState(), view);
    const result: AnswerResult = {
      solved: false,
      feedback: ["There must be exactly 3 islands, but you provided 1 islands"],
      attempts: 1,
      advance: false,
      session_complete: false,
      next: { index: 0, puzzle_count: 2, complete: false },
    };
    const state = applyAnswerResult(playing, result);
    expect(state.phase).toBe("playing");
    expect(state.attempts).toBe(1);
    expect(state.feedback).toEqual(result.feedback);
  });

  it("records server elapsed on a solve", () => {
    const playing = applySessionView(initialState(), view);
    const result: AnswerResult = {
      solved: true,
      feedback: [],
      attempts: 2,
      advance: true,
      session_complete: false,
      elapsed_s: 12.3,
      next: { index: 1, puzzle_count: 2, complete: false },
    };
    const state = applyAnswerResult(playing, result);
    expect(state.phase).toBe("solved");
    expect(state.attempts).toBe(2);
    expect(state.lastElapsedS).toBe(12.3);
  });

  it("ticks the timer only while playing", () => {
    let state = applySessionView(initialState(), view);
    state = tickTimer(state);
    state = tickTimer(state);
    expect(state.timerSeconds).toBe(2);
    const errored = tickTimer(applyError(state, "down"));
    expect(errored.timerSeconds).toBe(2);
    expect(errored.phase).toBe("error");
  });
});
