"""Agent drivers: scripted solvers, external line-protocol processes,
and generic chat-completion endpoints.

A driver produces exactly one response text per prompt.  The external
process protocol is newline-delimited: the harness writes the prompt
block followed by a sentinel line, the agent replies with a single line.
"""

from __future__ import annotations

import os
import subprocess
from typing import Callable, Optional

from .solvers import SOLVERS

SENTINEL = "<<<END>>>"


class DriverError(Exception):
    """The driver failed mid-session; the session is aborted."""


class AgentDriver:
    """One driver instance serves one session, sequentially."""

    def respond(self, prompt: str) -> str:
        raise NotImplementedError

    def close(self) -> None:
        pass


class ScriptedDriver(AgentDriver):
    def __init__(self, solver_id: str):
        try:
            self.solver = SOLVERS[solver_id]()
        except KeyError:
            raise DriverError(f"unknown scripted solver {solver_id!r}") from None

    def respond(self, prompt: str) -> str:
        return self.solver.respond(prompt)


class ExternalProcessDriver(AgentDriver):
    def __init__(self, command: list[str]):
        try:
            self.process = subprocess.Popen(
                command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as err:
            raise DriverError(f"cannot start {command!r}: {err}") from None

    def respond(self, prompt: str) -> str:
        try:
            self.process.stdin.write(prompt + "\n" + SENTINEL + "\n")
            self.process.stdin.flush()
            line = self.process.stdout.readline()
        except (BrokenPipeError, OSError) as err:
            raise DriverError(f"agent process failed: {err}") from None
        if not line:
            raise DriverError("agent process closed its output")
        return line.rstrip("\n")

    def close(self) -> None:
        if self.process.poll() is None:
            self.process.stdin.close()
            self.process.terminate()
            self.process.wait(timeout=5)


class ChatEndpointDriver(AgentDriver):
    """Generic chat-completion JSON shape: messages array in, text out."""

    def __init__(self, base_url: str, model: str, key_env: Optional[str] = None,
                 timeout: float = 120.0):
        import requests

        self._requests = requests
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.timeout = timeout
        self.key = os.environ.get(key_env, "") if key_env else ""
        self.messages: list[dict] = []

    def respond(self, prompt: str) -> str:
        self.messages.append({"role": "user", "content": prompt})
        headers = {"Content-Type": "application/json"}
        if self.key:
            headers["Authorization"] = f"Bearer {self.key}"
        try:
            response = self._requests.post(
                f"{self.base_url}/chat/completions",
                json={"model": self.model, "messages": self.messages},
                headers=headers,
                timeout=self.timeout,
            )
            response.raise_for_status()
            text = response.json()["choices"][0]["message"]["content"]
        except Exception as err:  # network, schema, HTTP: all abort
            raise DriverError(f"endpoint failure: {err}") from None
        self.messages.append({"role": "assistant", "content": text})
        return text


def make_driver_factory(spec: str) -> Callable[[], AgentDriver]:
    """Parse a driver spec: 'scripted:NAME', 'process:CMD ...', or
    'endpoint:URL#MODEL[#KEY_ENV]'."""
    kind, _, rest = spec.partition(":")
    if kind == "scripted":
        return lambda: ScriptedDriver(rest)
    if kind == "process":
        command = rest.split()
        return lambda: ExternalProcessDriver(command)
    if kind == "endpoint":
        parts = rest.split("#")
        if len(parts) < 2:
            raise DriverError("endpoint spec needs URL#MODEL[#KEY_ENV]")
        url, model = parts[0], parts[1]
        key_env = parts[2] if len(parts) > 2 else None
        return lambda: ChatEndpointDriver(url, model, key_env)
    raise DriverError(f"unknown driver kind {kind!r}")
