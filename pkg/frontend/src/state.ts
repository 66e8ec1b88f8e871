// View state and its pure transition functions. The state is a direct
// projection of server responses: the client never computes or caches
// anything about the hidden rule, and the turns gauge always carries
// the server-reported value verbatim.

import type { AnswerResponse, CatalogEntry, CreateResponse, QueryResponse, Report } from "./api.js";

export type Stage = "Exploration" | "Evaluation" | "Done";

export interface Exchange {
  role: "you" | "box";
  text: string;
}

export interface ViewState {
  screen: "catalog" | "session";
  catalog: CatalogEntry[];
  familyFilter: string;
  difficultyFilter: string;
  envId: string;
  sessionId: string;
  stage: Stage;
  preamble: string;
  scrollback: Exchange[];
  turnsRemaining: number;
  totalTurns: number;
  shots: number;
  attemptsLeft: number;
  sampleIndex: number;
  testCount: number;
  report: Report | null;
  toast: string;
}

export function initialState(): ViewState {
  return {
    screen: "catalog",
    catalog: [],
    familyFilter: "",
    difficultyFilter: "",
    envId: "",
    sessionId: "",
    stage: "Exploration",
    preamble: "",
    scrollback: [],
    turnsRemaining: 0,
    totalTurns: 0,
    shots: 0,
    attemptsLeft: 0,
    sampleIndex: 0,
    testCount: 0,
    report: null,
    toast: "",
  };
}

export function withCatalog(state: ViewState, catalog: CatalogEntry[]): ViewState {
  return { ...state, catalog };
}

export function withToast(state: ViewState, toast: string): ViewState {
  return { ...state, toast };
}

export function sessionStarted(
  state: ViewState,
  envId: string,
  turns: number,
  shots: number,
  response: CreateResponse,
): ViewState {
  return {
    ...state,
    screen: "session",
    envId,
    sessionId: response.session_id,
    stage: response.stage as Stage,
    preamble: response.preamble,
    scrollback: [{ role: "box", text: response.preamble }],
    turnsRemaining: response.turns_remaining,
    totalTurns: turns,
    shots,
    attemptsLeft: shots,
    sampleIndex: 0,
    testCount: response.test_count,
    report: null,
    toast: "",
  };
}

export function turnPlayed(state: ViewState, query: string, response: QueryResponse): ViewState {
  return {
    ...state,
    stage: response.stage as Stage,
    scrollback: [
      ...state.scrollback,
      { role: "you", text: query },
      { role: "box", text: response.feedback },
    ],
    turnsRemaining: response.turns_remaining,
    toast: "",
  };
}

export function sampleAnswered(state: ViewState, answer: string, response: AnswerResponse): ViewState {
  // Game sessions report retry for every in-game action, so the gauge
  // clamps at zero instead of counting below it.
  const attemptsLeft = response.retry
    ? Math.max(0, state.attemptsLeft - 1)
    : state.shots;
  return {
    ...state,
    stage: response.stage as Stage,
    scrollback: [
      ...state.scrollback,
      { role: "you", text: answer },
      { role: "box", text: response.feedback },
    ],
    turnsRemaining: response.turns_remaining,
    attemptsLeft,
    sampleIndex: response.next_sample ?? state.testCount,
    report: response.report ?? state.report,
    toast: "",
  };
}
