"""Chat-model clients. `send` is the only side-effecting boundary."""

from __future__ import annotations

import json
import os
import threading
import urllib.error
import urllib.request
from pathlib import Path
from typing import Optional, Protocol, Sequence

from ..prompt import ChatMessage

API_KEY_ENV = "SL_LLM_API_KEY"
DEFAULT_TIMEOUT = 120.0


class ClientError(RuntimeError):
    """Transport or protocol failure talking to a model."""


class LLMClient(Protocol):
    deterministic: bool

    def send(self, messages: Sequence[ChatMessage], temperature: float, seed: Optional[int] = None) -> str:
        ...


def _wire_role(role: str) -> str:
    return "assistant" if role == "model" else role


class HttpClient:
    """OpenAI-compatible chat completions over HTTP."""

    deterministic = False

    def __init__(self, api_base: str, model: str = "gpt-4", api_key: Optional[str] = None,
                 timeout: float = DEFAULT_TIMEOUT):
        if not api_base:
            raise ClientError("an API base URL is required for the http client")
        self.url = self.endpoint(api_base)
        self.model = model
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV, "")
        self.timeout = timeout

    @staticmethod
    def endpoint(api_base: str) -> str:
        base = api_base.rstrip("/")
        if base.endswith("/chat/completions"):
            return base
        if base.endswith("/v1"):
            return base + "/chat/completions"
        return base + "/v1/chat/completions"

    def payload(self, messages, temperature, seed=None) -> dict:
        body = {
            "model": self.model,
            "messages": [{"role": _wire_role(m.role), "content": m.content} for m in messages],
            "temperature": temperature,
        }
        if seed is not None:
            body["seed"] = seed
        return body

    def send(self, messages, temperature, seed=None) -> str:
        data = json.dumps(self.payload(messages, temperature, seed)).encode("utf-8")
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        req = urllib.request.Request(self.url, data=data, headers=headers, method="POST")
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                body = json.loads(resp.read().decode("utf-8"))
        except urllib.error.HTTPError as e:
            detail = e.read().decode("utf-8", "replace")[:500]
            raise ClientError(f"HTTP {e.code} from {self.url}: {detail}") from None
        except (urllib.error.URLError, TimeoutError, OSError) as e:
            raise ClientError(f"request to {self.url} failed: {e}") from None
        except json.JSONDecodeError as e:
            raise ClientError(f"invalid JSON from {self.url}: {e}") from None
        try:
            content = body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError):
            raise ClientError(f"unexpected response shape from {self.url}") from None
        if not isinstance(content, str):
            raise ClientError("response content is not text")
        return content


def _reply_lines(text: str) -> list[str]:
    replies = []
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            item = json.loads(line)
        except json.JSONDecodeError as e:
            raise ClientError(f"replay line {n}: invalid JSON: {e}") from None
        if isinstance(item, str):
            replies.append(item)
        elif isinstance(item, dict) and isinstance(item.get("content"), str):
            if item.get("role") in ("model", "assistant"):
                replies.append(item["content"])
        else:
            raise ClientError(f"replay line {n}: expected a string or a {{role, content}} object")
    return replies


class ReplayClient:
    """Returns recorded replies in call order, wrapping around at the end.

    Accepts JSON-Lines whose entries are reply strings or transcript
    messages; only model messages are replayed.
    """

    deterministic = True

    def __init__(self, replies: Sequence[str]):
        if not replies:
            raise ClientError("replay fixture contains no replies")
        self.replies = list(replies)
        self.calls = 0
        self._lock = threading.Lock()

    @classmethod
    def from_file(cls, path) -> "ReplayClient":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ClientError(f"cannot read replay fixture: {e}") from None
        return cls(_reply_lines(text))

    def send(self, messages, temperature, seed=None) -> str:
        with self._lock:
            reply = self.replies[self.calls % len(self.replies)]
            self.calls += 1
        return reply


class ScriptedClient:
    """Picks a reply by matching the first user message and counting the
    model replies already in the conversation.

    Script format: {"rules": [{"when": text, "rounds": [reply, ...]}],
    "default": [reply, ...]}. A rule applies when `when` occurs in the first
    user message. Past the last round the final reply repeats.
    """

    deterministic = True

    def __init__(self, rules: Sequence[tuple[str, Sequence[str]]], default: Sequence[str] = ()):
        self.rules = [(when, list(rounds)) for when, rounds in rules]
        self.default = list(default)
        self.calls = 0

    @classmethod
    def from_json(cls, data) -> "ScriptedClient":
        if not isinstance(data, dict):
            raise ClientError("script must be a JSON object")
        rules = []
        for r in data.get("rules", []):
            if not isinstance(r, dict) or not isinstance(r.get("when", ""), str):
                raise ClientError("each script rule needs a 'when' string and a 'rounds' list")
            rounds = r.get("rounds")
            if not isinstance(rounds, list) or not rounds or not all(isinstance(x, str) for x in rounds):
                raise ClientError("each script rule needs a non-empty 'rounds' list of strings")
            rules.append((r.get("when", ""), rounds))
        default = data.get("default", [])
        if not isinstance(default, list) or not all(isinstance(x, str) for x in default):
            raise ClientError("script 'default' must be a list of strings")
        return cls(rules, default)

    @classmethod
    def from_file(cls, path) -> "ScriptedClient":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ClientError(f"cannot read script: {e}") from None
        return cls.from_json(data)

    def send(self, messages, temperature, seed=None) -> str:
        self.calls += 1
        first_user = next((m.content for m in messages if m.role == "user"), "")
        round_index = sum(m.role == "model" for m in messages)
        for when, rounds in self.rules:
            if when in first_user:
                return rounds[min(round_index, len(rounds) - 1)]
        if not self.default:
            raise ClientError("no script rule matches this prompt")
        return self.default[min(round_index, len(self.default) - 1)]


def make_client(choice: str, api_base: Optional[str] = None, model: str = "gpt-4") -> LLMClient:
    """Build a client from `http`, `replay:FILE` or `script:FILE`."""
    kind, _, arg = choice.partition(":")
    match kind:
        case "http":
            return HttpClient(api_base or os.environ.get("SL_LLM_API_BASE", ""), model=model)
        case "replay" if arg:
            return ReplayClient.from_file(arg)
        case "script" if arg:
            return ScriptedClient.from_file(arg)
    raise ValueError(f"unknown client {choice!r}; use http, replay:FILE or script:FILE")
