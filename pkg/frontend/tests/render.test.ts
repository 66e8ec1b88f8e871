// The rendered transcript is a pure projection of server responses:
// replaying the same stored responses yields identical text.

import { describe, expect, it } from "vitest";

import type { AnswerResponse, CreateResponse, QueryResponse } from "../src/api.js";
import { renderCatalog, renderGauge, renderReport, renderSession } from "../src/render.js";
import {
  initialState,
  sampleAnswered,
  sessionStarted,
  turnPlayed,
  type ViewState,
} from "../src/state.js";

const createResponse: CreateResponse = {
  session_id: "s1",
  owner_token: "t1",
  preamble: "welcome text",
  stage: "Exploration",
  turns_remaining: 2,
  test_count: 2,
};

const queryResponses: QueryResponse[] = [
  { feedback: "<Current Turn: 1, 1 Turns Remaining> XY", stage: "Exploration", turns_remaining: 1 },
  {
    feedback: "<Current Turn: 2, 0 Turns Remaining> ZQ\n...Evaluation Starts...",
    stage: "Evaluation",
    turns_remaining: 0,
  },
];

const answerResponses: AnswerResponse[] = [
  {
    feedback: "Your answer is wrong. Try again.",
    stage: "Evaluation",
    retry: true,
    verdict: null,
    next_sample: 0,
    turns_remaining: 0,
  },
  {
    feedback: "Your answer is correct.",
    stage: "Evaluation",
    retry: false,
    verdict: { sample_index: 0, correct: true, attempts_used: 2 },
    next_sample: 1,
    turns_remaining: 0,
  },
  {
    feedback: "Your answer is correct.",
    stage: "Done",
    retry: false,
    verdict: { sample_index: 1, correct: true, attempts_used: 1 },
    next_sample: null,
    turns_remaining: 0,
    report: {
      env_id: "eri/caesar-8",
      accuracy: 1.0,
      per_sample: [
        { sample_index: 0, correct: true, attempts_used: 2 },
        { sample_index: 1, correct: true, attempts_used: 1 },
      ],
      budget: { exploration_turns: 2, shots_per_sample: 2, feedback_mode: "Instant" },
    },
  },
];

function replay(): ViewState {
  let state = sessionStarted(initialState(), "eri/caesar-8", 2, 2, createResponse);
  state = turnPlayed(state, "ab", queryResponses[0]);
  state = turnPlayed(state, "cd", queryResponses[1]);
  state = sampleAnswered(state, "wrong", answerResponses[0]);
  state = sampleAnswered(state, "right", answerResponses[1]);
  state = sampleAnswered(state, "right again", answerResponses[2]);
  return state;
}

describe("rendering", () => {
  it("is a pure projection: replaying responses yields identical text", () => {
    const first = renderSession(replay());
    const second = renderSession(replay());
    expect(first).toEqual(second);
    expect(first.join("\n")).toContain("you> ab");
    expect(first.join("\n")).toContain("box> <Current Turn: 1, 1 Turns Remaining> XY");
  });

  it("keeps the gauge equal to the server-reported turns", () => {
    let state = sessionStarted(initialState(), "e", 2, 1, createResponse);
    expect(state.turnsRemaining).toBe(2);
    expect(renderGauge(state)).toBe("Turn 1 of 2 (2 remaining)");
    state = turnPlayed(state, "ab", queryResponses[0]);
    expect(state.turnsRemaining).toBe(1);
    expect(renderGauge(state)).toBe("Turn 2 of 2 (1 remaining)");
  });

  it("tracks attempts left through retries and resets on verdicts", () => {
    let state = sessionStarted(initialState(), "e", 2, 2, createResponse);
    state = turnPlayed(state, "a", queryResponses[0]);
    state = turnPlayed(state, "b", queryResponses[1]);
    expect(renderGauge(state)).toBe("Sample 1 of 2 (attempts left: 2)");
    state = sampleAnswered(state, "w", answerResponses[0]);
    expect(renderGauge(state)).toBe("Sample 1 of 2 (attempts left: 1)");
    state = sampleAnswered(state, "r", answerResponses[1]);
    expect(renderGauge(state)).toBe("Sample 2 of 2 (attempts left: 2)");
  });

  it("renders the report with accuracy percent and per-sample marks", () => {
    const lines = renderReport(replay());
    expect(lines[0]).toBe("accuracy: 100.0%");
    expect(lines).toHaveLength(3);
    expect(lines[1]).toContain("sample 1: correct (attempts 2)");
  });

  it("filters the catalog by family and difficulty", () => {
    const state: ViewState = {
      ...initialState(),
      catalog: [
        { id: "a/x", family: "ERI", difficulty: "Easy", description: "", default_test_count: 8 },
        { id: "b/y", family: "GSI", difficulty: "Hard", description: "", default_test_count: 4 },
      ],
      familyFilter: "GSI",
    };
    const lines = renderCatalog(state);
    expect(lines).toHaveLength(2);
    expect(lines[1]).toContain("b/y");
  });
});
