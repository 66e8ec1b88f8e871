import { ApiClient } from "./api.js";
import { SessionController } from "./controller.js";
import { bind, paint, type Elements } from "./dom.js";

const baseUrl =
  new URLSearchParams(window.location.search).get("service") ??
  "http://127.0.0.1:8351";

const controller = new SessionController(new ApiClient(baseUrl));

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const elements: Elements = {
  catalog: el("catalog"),
  session: el("session"),
  input: el<HTMLInputElement>("command"),
  startForm: {
    envId: el<HTMLInputElement>("env-id"),
    turns: el<HTMLInputElement>("turns"),
    shots: el<HTMLInputElement>("shots"),
    seed: el<HTMLInputElement>("seed"),
    button: el("start"),
  },
};

bind(controller, elements);
controller.loadCatalog().then(() => paint(controller, elements));
