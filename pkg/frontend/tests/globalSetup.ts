// Spawns the Python session service for the end-to-end tests and tears
// it down afterwards. The port is exported through an env var.

import { spawn, type ChildProcess } from "node:child_process";

const PORT = 8471;
let service: ChildProcess | undefined;

async function waitUntilReady(url: string, attempts = 150): Promise<void> {
  for (let i = 0; i < attempts; i++) {
    try {
      const response = await fetch(url);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error(`service at ${url} never became ready`);
}

export async function setup(): Promise<void> {
  process.env.BOXBENCH_SERVICE = `http://127.0.0.1:${PORT}`;
  service = spawn(
    "python3",
    ["-m", "boxbench.cli", "serve", "--port", String(PORT)],
    { stdio: "ignore" },
  );
  service.on("error", (err) => {
    throw new Error(`cannot start service: ${err}`);
  });
  await waitUntilReady(`${process.env.BOXBENCH_SERVICE}/envs`);
}

export async function teardown(): Promise<void> {
  service?.kill("SIGTERM");
}
