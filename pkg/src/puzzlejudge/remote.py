"""Chat-completion client: greedy decoding, bounded retries, transcript log."""
from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass
from typing import Optional

import requests

from .errors import MalformedResponseError, PlayerTransportError
from .prompting import PromptBundle

API_KEY_ENV = "PUZZLEJUDGE_API_KEY"


@dataclass(frozen=True)
class RemoteEndpoint:
    base_url: str
    model: str
    api_key_env: str = API_KEY_ENV
    timeout_s: float = 60.0
    max_retries: int = 3
    backoff_base_s: float = 1.0
    min_interval_s: float = 0.0
    log_path: Optional[str] = None


class _RateLimiter:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._next_allowed: dict[str, float] = {}

    def wait(self, key: str, interval_s: float) -> None:
        if interval_s <= 0:
            return
        while True:
            with self._lock:
                now = time.monotonic()
                allowed = self._next_allowed.get(key, 0.0)
                if now >= allowed:
                    self._next_allowed[key] = now + interval_s
                    return
                delay = allowed - now
            time.sleep(delay)


_LIMITER = _RateLimiter()
_LOG_LOCK = threading.Lock()


def _log(endpoint: RemoteEndpoint, event: str, **payload) -> None:
    if not endpoint.log_path:
        return
    entry = {"ts": time.time(), "event": event, **payload}
    with _LOG_LOCK:
        with open(endpoint.log_path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(entry, ensure_ascii=True) + "\n")


def _extract_text(body: dict) -> str:
    try:
        content = body["choices"][0]["message"]["content"]
    except (KeyError, IndexError, TypeError) as exc:
        raise MalformedResponseError(f"unexpected completion body: {body!r}") from exc
    if not isinstance(content, str):
        raise MalformedResponseError(f"completion content is not text: {content!r}")
    return content


def call_remote_model(endpoint: RemoteEndpoint, bundle: PromptBundle) -> str:
    """POST the bundle to a chat-completions interface and return the reply text.

    Temperature is pinned to 0 so reruns are reproducible. Transient failures
    (connection errors, timeouts, 429, 5xx) are retried with exponential
    backoff; anything else fails fast.
    """
    messages = []
    if bundle.system:
        messages.append({"role": "system", "content": bundle.system})
    messages.extend({"role": m.role, "content": m.content} for m in bundle.messages)
    payload = {"model": endpoint.model, "messages": messages, "temperature": 0}
    headers = {"Content-Type": "application/json"}
    api_key = os.environ.get(endpoint.api_key_env, "")
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    url = endpoint.base_url.rstrip("/") + "/chat/completions"

    last_error: Optional[str] = None
    for attempt in range(endpoint.max_retries):
        _LIMITER.wait(endpoint.base_url, endpoint.min_interval_s)
        _log(endpoint, "request", attempt=attempt, url=url, model=endpoint.model,
             temperature=0, messages=len(messages))
        try:
            response = requests.post(
                url, json=payload, headers=headers, timeout=endpoint.timeout_s
            )
        except requests.RequestException as exc:
            last_error = f"transport: {exc}"
            _log(endpoint, "retry", attempt=attempt, reason=last_error)
            time.sleep(endpoint.backoff_base_s * (2**attempt))
            continue
        if response.status_code == 429 or response.status_code >= 500:
            last_error = f"http {response.status_code}"
            _log(endpoint, "retry", attempt=attempt, reason=last_error)
            time.sleep(endpoint.backoff_base_s * (2**attempt))
            continue
        if response.status_code != 200:
            _log(endpoint, "error", attempt=attempt, status=response.status_code)
            raise PlayerTransportError(
                f"endpoint returned {response.status_code}: {response.text[:200]}"
            )
        try:
            body = response.json()
        except ValueError as exc:
            _log(endpoint, "error", attempt=attempt, reason="not json")
            raise MalformedResponseError("response body is not JSON") from exc
        text = _extract_text(body)
        _log(endpoint, "response", attempt=attempt, chars=len(text))
        return text
    _log(endpoint, "gave_up", attempts=endpoint.max_retries, reason=last_error)
    raise PlayerTransportError(
        f"no response after {endpoint.max_retries} attempts ({last_error})"
    )
