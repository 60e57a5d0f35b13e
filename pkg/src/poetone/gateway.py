"""Provider-agnostic chat-completion client.

One client serves both candidate generation and judge scoring: it
speaks the de-facto chat-completions JSON shape, retries transient
failures with exponential backoff, rate-limits per provider, caches
responses on disk keyed by request content, and supports a
deterministic in-process mock transport so the whole system runs
offline.

API keys are read from the environment at request time via the env-var
name in the provider config; the key value itself never touches
configs, caches, logs, or reports.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import httpx

from .registry import Theme

try:  # Python 3.11+
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib


class GatewayError(Exception):
    """Base class for completion-path failures."""


class AuthError(GatewayError):
    """Missing/rejected credentials; never retried."""


class TransientError(GatewayError):
    """Retryable failure: HTTP 429/5xx or a timeout."""


class MalformedResponseError(GatewayError):
    """Provider returned something that is not a chat completion."""


class ExhaustedRetriesError(GatewayError):
    """All retry attempts failed."""


class JudgeParseFailureError(GatewayError):
    """No judge returned scores that could be parsed."""


@dataclass(frozen=True)
class ProviderConfig:
    provider_id: str
    model_name: str
    base_url: str = ""
    api_key_env_var: str = ""
    temperature: float = 0.0
    max_tokens: int = 1024
    requests_per_minute: int = 600
    max_retries: int = 3

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.requests_per_minute <= 0:
            raise ValueError("requests_per_minute must be > 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


def load_provider_configs(path: str | Path) -> dict[str, ProviderConfig]:
    """Parse a providers TOML file: one ``[providers.<id>]`` table each."""
    with Path(path).open("rb") as handle:
        data = tomllib.load(handle)
    configs: dict[str, ProviderConfig] = {}
    for provider_id, table in data.get("providers", {}).items():
        configs[provider_id] = ProviderConfig(provider_id=provider_id, **table)
    return configs


class MockTransport:
    """Deterministic in-process transport for offline runs and tests.

    ``script`` may be a dict (exact prompt -> reply), a list (cycled),
    or a callable ``(prompt_text, call_index) -> reply``. Exceptions
    raised by a callable script propagate unchanged.
    """

    def __init__(self, script):
        self._script = script
        self._lock = threading.Lock()
        self.calls: list[str] = []

    @property
    def call_count(self) -> int:
        return len(self.calls)

    def send(self, config: ProviderConfig, prompt_text: str) -> str:
        with self._lock:
            index = len(self.calls)
            self.calls.append(prompt_text)
        if callable(self._script):
            return self._script(prompt_text, index)
        if isinstance(self._script, dict):
            try:
                return self._script[prompt_text]
            except KeyError:
                raise MalformedResponseError(
                    f"mock transport has no reply for prompt of {len(prompt_text)} chars"
                ) from None
        return self._script[index % len(self._script)]


class HttpTransport:
    """Chat-completions POST against ``<base_url>/chat/completions``."""

    def __init__(self, timeout: float = 60.0):
        self._timeout = timeout

    def send(self, config: ProviderConfig, prompt_text: str) -> str:
        headers = {"Content-Type": "application/json"}
        if config.api_key_env_var:
            key = os.environ.get(config.api_key_env_var)
            if not key:
                raise AuthError(
                    f"environment variable {config.api_key_env_var} is not set"
                )
            headers["Authorization"] = f"Bearer {key}"
        payload = {
            "model": config.model_name,
            "messages": [{"role": "user", "content": prompt_text}],
            "temperature": config.temperature,
            "max_tokens": config.max_tokens,
        }
        url = config.base_url.rstrip("/") + "/chat/completions"
        try:
            response = httpx.post(url, json=payload, headers=headers, timeout=self._timeout)
        except httpx.TimeoutException as exc:
            raise TransientError(f"timeout calling {config.provider_id}") from exc
        except httpx.HTTPError as exc:
            raise TransientError(f"network error calling {config.provider_id}: {exc}") from exc
        if response.status_code in (401, 403):
            raise AuthError(f"{config.provider_id} rejected credentials ({response.status_code})")
        if response.status_code == 429 or response.status_code >= 500:
            raise TransientError(f"{config.provider_id} returned {response.status_code}")
        if response.status_code != 200:
            raise MalformedResponseError(
                f"{config.provider_id} returned {response.status_code}"
            )
        try:
            content = response.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise MalformedResponseError(
                f"{config.provider_id} response is not a chat completion"
            ) from exc
        if not isinstance(content, str):
            raise MalformedResponseError(f"{config.provider_id} content is not text")
        return content


class ResponseCache:
    """Content-addressed completion cache, JSONL-backed when given a path."""

    def __init__(self, path: str | Path | None = None):
        self._path = Path(path) if path else None
        self._lock = threading.Lock()
        self._entries: dict[str, str] = {}
        if self._path and self._path.exists():
            for line in self._path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    obj = json.loads(line)
                    self._entries[obj["key"]] = obj["response"]

    @staticmethod
    def key_for(config: ProviderConfig, prompt_text: str, salt: str = "") -> str:
        material = json.dumps(
            [config.provider_id, config.model_name, prompt_text,
             config.temperature, salt],
            ensure_ascii=False,
        )
        return hashlib.sha256(material.encode("utf-8")).hexdigest()

    def get(self, key: str) -> str | None:
        with self._lock:
            return self._entries.get(key)

    def put(self, key: str, response: str) -> None:
        with self._lock:
            if key in self._entries:
                return
            self._entries[key] = response
            if self._path:
                self._path.parent.mkdir(parents=True, exist_ok=True)
                with self._path.open("a", encoding="utf-8") as handle:
                    handle.write(
                        json.dumps({"key": key, "response": response}, ensure_ascii=False)
                        + "\n"
                    )

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


class _RateLimiter:
    """Minimum-interval limiter per provider."""

    def __init__(self, time_fn, sleep_fn):
        self._time = time_fn
        self._sleep = sleep_fn
        self._lock = threading.Lock()
        self._next_allowed: dict[str, float] = {}

    def acquire(self, config: ProviderConfig) -> None:
        interval = 60.0 / config.requests_per_minute
        with self._lock:
            now = self._time()
            start = max(now, self._next_allowed.get(config.provider_id, 0.0))
            self._next_allowed[config.provider_id] = start + interval
        delay = start - now
        if delay > 0:
            self._sleep(delay)


class LlmClient:
    """Completion front door: cache, rate limit, retries, in-flight bound."""

    def __init__(
        self,
        transport=None,
        cache: ResponseCache | None = None,
        backoff_base: float = 0.5,
        max_inflight_per_provider: int = 4,
        time_fn=time.monotonic,
        sleep_fn=time.sleep,
    ):
        self.transport = transport or HttpTransport()
        self.cache = cache
        self._backoff_base = backoff_base
        self._sleep = sleep_fn
        self._limiter = _RateLimiter(time_fn, sleep_fn)
        self._inflight_bound = max_inflight_per_provider
        self._semaphores: dict[str, threading.Semaphore] = {}
        self._lock = threading.Lock()
        self.retry_log: list[tuple[str, int, float]] = []

    def _semaphore(self, provider_id: str) -> threading.Semaphore:
        with self._lock:
            if provider_id not in self._semaphores:
                self._semaphores[provider_id] = threading.Semaphore(self._inflight_bound)
            return self._semaphores[provider_id]

    def complete(
        self, config: ProviderConfig, prompt_text: str, cache_salt: str = ""
    ) -> str:
        """Return assistant text for a prompt, retrying transient failures.

        The cache key covers provider, model, prompt, temperature and
        an optional salt (used to keep repeated samples of the same
        prompt distinct). Cache hits perform no network call.
        """
        key = None
        if self.cache is not None:
            key = ResponseCache.key_for(config, prompt_text, cache_salt)
            hit = self.cache.get(key)
            if hit is not None:
                return hit

        last_error: GatewayError | None = None
        for attempt in range(config.max_retries + 1):
            if attempt > 0:
                delay = self._backoff_base * (2 ** (attempt - 1))
                with self._lock:
                    self.retry_log.append((config.provider_id, attempt, delay))
                self._sleep(delay)
            self._limiter.acquire(config)
            semaphore = self._semaphore(config.provider_id)
            with semaphore:
                try:
                    text = self.transport.send(config, prompt_text)
                except TransientError as exc:
                    last_error = exc
                    continue
            if self.cache is not None and key is not None:
                self.cache.put(key, text)
            return text
        raise ExhaustedRetriesError(
            f"{config.provider_id}: no success after {config.max_retries + 1} attempts"
        ) from last_error


# ---------------------------------------------------------------------------
# LLM-as-judge scoring


@dataclass
class QualityScores:
    """Per-dimension 1-5 quality ratings averaged across judges."""

    fluency: float
    coherence: float
    poetic_quality: float
    per_judge: dict[str, tuple[int, int, int]]
    judges: list[str]
    failures: dict[str, str] = field(default_factory=dict)

    def to_obj(self) -> dict:
        return {
            "fluency": self.fluency,
            "coherence": self.coherence,
            "poetic_quality": self.poetic_quality,
            "per_judge": {k: list(v) for k, v in self.per_judge.items()},
            "judges": self.judges,
            "failures": self.failures,
        }

    @property
    def mean(self) -> float:
        return (self.fluency + self.coherence + self.poetic_quality) / 3.0


_JSON_BLOCK_RE = re.compile(r"\{[^{}]*\}", re.DOTALL)
# either "n/5" (the 5 is the scale, not a score) or a standalone digit
_RATING_TOKEN_RE = re.compile(r"([1-5])\s*/\s*5|(?<![\d.])([1-5])(?![\d.])")

_DIMENSIONS = ("fluency", "coherence", "poetic_quality")


def parse_judge_scores(text: str) -> tuple[int, int, int]:
    """Parse a judge reply into three 1-5 integers.

    Strict path: a JSON object with the three dimension keys. Fallback:
    the first three in-range rating tokens in reading order.
    """
    for match in _JSON_BLOCK_RE.finditer(text):
        try:
            obj = json.loads(match.group(0))
        except json.JSONDecodeError:
            continue
        if not isinstance(obj, dict):
            continue
        try:
            values = tuple(int(obj[dim]) for dim in _DIMENSIONS)
        except (KeyError, TypeError, ValueError):
            continue
        if all(1 <= v <= 5 for v in values):
            return values  # type: ignore[return-value]

    ratings: list[int] = []
    for match in _RATING_TOKEN_RE.finditer(text):
        token = match.group(1) or match.group(2)
        ratings.append(int(token))
        if len(ratings) == 3:
            return tuple(ratings)  # type: ignore[return-value]
    raise JudgeParseFailureError(f"could not find three 1-5 ratings in: {text[:200]!r}")


def render_judge_prompt(
    poem_text: str,
    cipai_name: str,
    theme: Theme,
    prompts_dir: str | Path | None = None,
) -> str:
    from .prompts import theme_label  # local import to avoid a cycle

    base = Path(prompts_dir) if prompts_dir else Path(__file__).parent / "data" / "prompts"
    template = (base / "judge.txt").read_text(encoding="utf-8")
    return template.format(cipai_name=cipai_name, theme=theme_label(theme), poem=poem_text)


def judge(
    poem_text: str,
    cipai_id: str,
    theme: Theme,
    judge_configs: list[ProviderConfig],
    client: LlmClient,
    cipai_name: str | None = None,
    prompts_dir: str | Path | None = None,
) -> QualityScores:
    """Score a poem with every judge model and average per dimension.

    Judges that fail (transport or parse) are recorded in ``failures``
    and excluded from the mean; only a total wipeout raises.
    """
    if not poem_text.strip():
        raise ValueError("poem_text is empty")
    if not judge_configs:
        raise ValueError("at least one judge config is required")
    prompt = render_judge_prompt(
        poem_text, cipai_name or cipai_id, theme, prompts_dir
    )
    per_judge: dict[str, tuple[int, int, int]] = {}
    failures: dict[str, str] = {}
    for config in judge_configs:
        try:
            reply = client.complete(config, prompt)
            per_judge[config.provider_id] = parse_judge_scores(reply)
        except GatewayError as exc:
            failures[config.provider_id] = str(exc)
    if not per_judge:
        raise JudgeParseFailureError(
            f"all {len(judge_configs)} judges failed: {failures}"
        )
    n = len(per_judge)
    sums = [0, 0, 0]
    for scores in per_judge.values():
        for i, value in enumerate(scores):
            sums[i] += value
    return QualityScores(
        fluency=sums[0] / n,
        coherence=sums[1] / n,
        poetic_quality=sums[2] / n,
        per_judge=per_judge,
        judges=sorted(per_judge),
        failures=failures,
    )
