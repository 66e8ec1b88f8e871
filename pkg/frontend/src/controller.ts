// Orchestrates the API client and the view state. Budget invariants
// are mirrored client-side (a zero-turn form never reaches the
// server); HTTP failures surface as toasts with the status attached.

import { ApiClient, ApiError } from "./api.js";
import {
  initialState,
  sampleAnswered,
  sessionStarted,
  turnPlayed,
  withCatalog,
  withToast,
  type ViewState,
} from "./state.js";

export class SessionController {
  state: ViewState = initialState();
  private ownerToken = "";

  constructor(private api: ApiClient) {}

  private fail(err: unknown): ViewState {
    const message = err instanceof ApiError ? err.message : String(err);
    this.state = withToast(this.state, message);
    return this.state;
  }

  async loadCatalog(family = "", difficulty = ""): Promise<ViewState> {
    try {
      const catalog = await this.api.listEnvironments(
        family || undefined,
        difficulty || undefined,
      );
      this.state = withCatalog(
        { ...this.state, familyFilter: family, difficultyFilter: difficulty },
        catalog,
      );
    } catch (err) {
      this.fail(err);
    }
    return this.state;
  }

  async startSession(envId: string, turns: number, shots: number, seed: number): Promise<ViewState> {
    if (!Number.isInteger(turns) || turns < 1 || !Number.isInteger(shots) || shots < 1) {
      return this.fail(new Error("budget must have at least 1 turn and 1 shot"));
    }
    try {
      const response = await this.api.createSession(
        envId,
        { exploration_turns: turns, shots_per_sample: shots },
        seed,
      );
      this.ownerToken = response.owner_token;
      this.state = sessionStarted(this.state, envId, turns, shots, response);
    } catch (err) {
      this.fail(err);
    }
    return this.state;
  }

  async playTurn(text: string): Promise<ViewState> {
    if (!text.trim()) {
      return this.fail(new Error("empty input"));
    }
    if (this.state.stage !== "Exploration") {
      return this.fail(new Error(`stage is ${this.state.stage}, not Exploration`));
    }
    try {
      const response = await this.api.query(this.state.sessionId, this.ownerToken, text);
      this.state = turnPlayed(this.state, text, response);
    } catch (err) {
      this.fail(err);
    }
    return this.state;
  }

  async answerSample(text: string): Promise<ViewState> {
    if (!text.trim()) {
      return this.fail(new Error("empty input"));
    }
    if (this.state.stage !== "Evaluation") {
      return this.fail(new Error(`stage is ${this.state.stage}, not Evaluation`));
    }
    try {
      const response = await this.api.answer(this.state.sessionId, this.ownerToken, text);
      this.state = sampleAnswered(this.state, text, response);
    } catch (err) {
      this.fail(err);
    }
    return this.state;
  }

  /** Route the input box to whichever stage the session is in. */
  async submit(text: string): Promise<ViewState> {
    if (this.state.stage === "Exploration") return this.playTurn(text);
    if (this.state.stage === "Evaluation") return this.answerSample(text);
    return this.fail(new Error("session is complete"));
  }
}
