// Pure projection of the view state into display lines. The DOM layer
// only copies these strings into elements, so replaying the same
// server responses always yields identical rendered text.

import type { ViewState } from "./state.js";

export function renderCatalog(state: ViewState): string[] {
  const rows = state.catalog
    .filter((e) => !state.familyFilter || e.family === state.familyFilter)
    .filter((e) => !state.difficultyFilter || e.difficulty === state.difficultyFilter)
    .map((e) => `${e.id}  [${e.family}/${e.difficulty}]  K=${e.default_test_count}`);
  return ["Pick a black-box:", ...rows];
}

export function renderGauge(state: ViewState): string {
  if (state.stage === "Exploration") {
    const used = state.totalTurns - state.turnsRemaining;
    return `Turn ${Math.min(used + 1, state.totalTurns)} of ${state.totalTurns} (${state.turnsRemaining} remaining)`;
  }
  if (state.stage === "Evaluation") {
    return `Sample ${state.sampleIndex + 1} of ${state.testCount} (attempts left: ${state.attemptsLeft})`;
  }
  return "Session complete";
}

export function renderScrollback(state: ViewState): string[] {
  return state.scrollback.map((x) => `${x.role}> ${x.text}`);
}

export function renderReport(state: ViewState): string[] {
  if (!state.report) return [];
  const percent = (state.report.accuracy * 100).toFixed(1);
  const lines = [`accuracy: ${percent}%`];
  for (const v of state.report.per_sample) {
    const mark = v.correct ? "correct" : "wrong";
    const score = v.score === undefined ? "" : ` score=${v.score.toFixed(3)}`;
    lines.push(`sample ${v.sample_index + 1}: ${mark} (attempts ${v.attempts_used})${score}`);
  }
  return lines;
}

export function renderSession(state: ViewState): string[] {
  const lines = [renderGauge(state), ...renderScrollback(state)];
  if (state.toast) lines.push(`! ${state.toast}`);
  if (state.stage === "Done") lines.push(...renderReport(state));
  return lines;
}
