// DOM binding: copies the pure render output into the page and wires
// the keyboard-first input (Enter submits).

import type { SessionController } from "./controller.js";
import { renderCatalog, renderSession } from "./render.js";

export interface Elements {
  catalog: HTMLElement;
  session: HTMLElement;
  input: HTMLInputElement;
  startForm: {
    envId: HTMLInputElement;
    turns: HTMLInputElement;
    shots: HTMLInputElement;
    seed: HTMLInputElement;
    button: HTMLElement;
  };
}

export function paint(controller: SessionController, els: Elements): void {
  const state = controller.state;
  els.catalog.hidden = state.screen !== "catalog";
  els.session.hidden = state.screen !== "session";
  if (state.screen === "catalog") {
    els.catalog.textContent = renderCatalog(state).join("\n");
    if (state.toast) els.catalog.textContent += `\n! ${state.toast}`;
  } else {
    els.session.textContent = renderSession(state).join("\n");
    els.session.scrollTop = els.session.scrollHeight;
  }
}

export function bind(controller: SessionController, els: Elements): void {
  els.startForm.button.addEventListener("click", async () => {
    await controller.startSession(
      els.startForm.envId.value.trim(),
      Number(els.startForm.turns.value),
      Number(els.startForm.shots.value),
      Number(els.startForm.seed.value || "0"),
    );
    paint(controller, els);
    els.input.focus();
  });
  els.input.addEventListener("keydown", async (event) => {
    if (event.key !== "Enter") return;
    const text = els.input.value;
    els.input.value = "";
    await controller.submit(text);
    paint(controller, els);
  });
}
