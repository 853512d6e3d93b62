"""Chat-completion backends behind one small interface.

`complete(system, user, temperature) -> text` is all the rest of the engine
knows about. The scripted backend answers from a canned script and records
every call, which is what the test suite and the offline demo run on; the
HTTP backend speaks the common chat-completion wire contract for live use.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from typing import Callable, Iterable, Mapping, Protocol, runtime_checkable

import httpx


class BackendError(RuntimeError):
    """The backend could not produce a completion."""


@runtime_checkable
class ChatBackend(Protocol):
    def complete(self, system: str, user: str, temperature: float) -> str: ...


class ScriptedBackend:
    """Deterministic canned responses, no network.

    Two lookup modes compose: content rules fire when every string in a
    rule's ``contains`` list occurs in the concatenated system and user
    prompt (first matching rule wins); when no rule matches, responses are
    popped from an ordinal queue; when that is empty too, ``default`` is
    returned. Every call is recorded in ``calls``.
    """

    def __init__(
        self,
        rules: Iterable[Mapping[str, object]] | None = None,
        queue: Iterable[str] | None = None,
        default: str | None = None,
    ):
        self._rules: list[tuple[tuple[str, ...], str]] = []
        for rule in rules or []:
            contains = rule.get("contains")
            response = rule.get("response")
            if not isinstance(contains, (list, tuple)) or not isinstance(response, str):
                raise ValueError(
                    "each rule needs a 'contains' list and a 'response' string"
                )
            self._rules.append((tuple(str(c) for c in contains), response))
        self._queue: list[str] = list(queue or [])
        self._default = default
        self._lock = threading.Lock()
        self.calls: list[tuple[str, str, float]] = []

    def complete(self, system: str, user: str, temperature: float) -> str:
        composite = system + "\n" + user
        with self._lock:
            self.calls.append((system, user, temperature))
            for contains, response in self._rules:
                if all(needle in composite for needle in contains):
                    return response
            if self._queue:
                return self._queue.pop(0)
        if self._default is not None:
            return self._default
        raise BackendError("scripted backend has no response for this prompt")


def load_backend_script(source) -> ScriptedBackend:
    """Build a ScriptedBackend from a JSON file or mapping with optional
    ``rules``, ``queue``, and ``default`` keys."""
    if isinstance(source, (str, Path)):
        data = json.loads(Path(source).read_text(encoding="utf-8"))
    elif hasattr(source, "read"):
        data = json.load(source)
    else:
        data = source
    if not isinstance(data, Mapping):
        raise ValueError("backend script must be a JSON object")
    return ScriptedBackend(
        rules=data.get("rules"),
        queue=data.get("queue"),
        default=data.get("default"),
    )


class FunctionBackend:
    """Adapts a plain callable; handy for one-off tests."""

    def __init__(self, fn: Callable[[str, str, float], str]):
        self._fn = fn

    def complete(self, system: str, user: str, temperature: float) -> str:
        return self._fn(system, user, temperature)


class HttpChatBackend:
    """Chat-completion over HTTP: request carries model, a system and a user
    message, and temperature; the reply's first message content is returned.

    The API key is read from the environment variable named by
    ``api_key_env`` at call time, never stored in configuration. A failed
    request is retried ``retries`` times before giving up.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key_env: str = "GRAPHQA_API_KEY",
        timeout: float = 30.0,
        retries: int = 1,
    ):
        self.endpoint = endpoint
        self.model = model
        self.api_key_env = api_key_env
        self.timeout = timeout
        self.retries = retries

    def complete(self, system: str, user: str, temperature: float) -> str:
        api_key = os.environ.get(self.api_key_env)
        if not api_key:
            raise BackendError(
                f"environment variable {self.api_key_env} is not set"
            )
        payload = {
            "model": self.model,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
            "temperature": temperature,
        }
        headers = {"Authorization": f"Bearer {api_key}"}
        last_error: Exception | None = None
        for _ in range(self.retries + 1):
            try:
                response = httpx.post(
                    self.endpoint, json=payload, headers=headers, timeout=self.timeout
                )
                response.raise_for_status()
                body = response.json()
                content = body["choices"][0]["message"]["content"]
                if not isinstance(content, str):
                    raise BackendError("completion content is not text")
                return content
            except (httpx.HTTPError, KeyError, IndexError, TypeError, ValueError) as exc:
                last_error = exc
        raise BackendError(f"chat completion failed: {last_error}") from last_error
