"""Chat-model text-to-gloss translation with a persistent offline cache.

All step texts of a task go out in one request; the response must be a JSON
array with one gloss string per step. Every successful response is cached on
disk keyed by a digest of (model, prompt, sampling parameters), so a primed
cache replays translations byte-exactly with zero network traffic. A curated
overlay directory can override cached output per task, which is how manual
correction enters the pipeline without hiding inside the cache.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass
from pathlib import Path
import requests

from .errors import (
    MalformedResponse,
    MissingCredential,
    NetworkFailure,
    SchemaViolation,
)
from .gloss import GlossSequence, Provenance, normalize
from .tasks import TaskSpec

PROMPT_VERSION = "1"
CREDENTIAL_ENV = "SIGNPIPE_LLM_API_KEY"
ENDPOINT_ENV = "SIGNPIPE_LLM_ENDPOINT"


@dataclass(frozen=True)
class LlmRequestConfig:
    model: str = "gpt-3.5-turbo"
    temperature: float = 1.0
    max_tokens: int = 1000
    top_p: float = 1.0
    frequency_penalty: float = 0.0
    presence_penalty: float = 0.0
    endpoint: str = ""
    timeout: float = 30.0
    max_retries: int = 3

    def __post_init__(self):
        if self.temperature < 0:
            raise SchemaViolation("temperature must be >= 0")
        if self.max_tokens < 1:
            raise SchemaViolation("max_tokens must be >= 1")
        if not 0 < self.top_p <= 1:
            raise SchemaViolation("top_p must be in (0, 1]")

    def sampling_params(self) -> dict:
        """The fields that shape the response, and therefore the cache key."""
        return {
            "model": self.model,
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
            "top_p": self.top_p,
            "frequency_penalty": self.frequency_penalty,
            "presence_penalty": self.presence_penalty,
        }


def build_prompt(task: TaskSpec) -> str:
    """Aggregate every step text into one translation request.

    Ingredients are deliberately absent: they are shown as written text on
    screen, not signed.
    """
    payload = json.dumps(
        {"title": task.title, "steps": [s.text for s in task.steps]},
        sort_keys=True, ensure_ascii=False,
    )
    return (
        f"[v{PROMPT_VERSION}] You are given a step-by-step task as JSON. "
        "Your job: translate each step to American Sign Language gloss. "
        "Use uppercase gloss tokens; write fingerspelled words in hyphen "
        "notation (for example T-O-F-U). Respond with a JSON array that "
        "contains exactly one gloss string per step, in step order, and "
        "nothing else.\n" + payload
    )


def cache_key(model: str, prompt: str, config: LlmRequestConfig) -> str:
    material = json.dumps(
        {"model": model, "prompt": prompt, "params": config.sampling_params()},
        sort_keys=True, ensure_ascii=False,
    )
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class TranslationCacheEntry:
    key: str
    model: str
    prompt: str
    params: dict
    response_text: str
    parsed: tuple[str, ...]
    created_at: str
    quarantined: bool = False

    def to_dict(self) -> dict:
        return {
            "key": self.key, "model": self.model, "prompt": self.prompt,
            "params": self.params, "response_text": self.response_text,
            "parsed": list(self.parsed), "created_at": self.created_at,
            "quarantined": self.quarantined,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "TranslationCacheEntry":
        return cls(
            key=raw["key"], model=raw["model"], prompt=raw["prompt"],
            params=raw["params"], response_text=raw["response_text"],
            parsed=tuple(raw["parsed"]), created_at=raw["created_at"],
            quarantined=raw.get("quarantined", False),
        )


class TranslationCache:
    """Append-only directory of response entries keyed by digest."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, key: str) -> TranslationCacheEntry | None:
        path = self._path(key)
        if not path.exists():
            return None
        entry = TranslationCacheEntry.from_dict(json.loads(path.read_text(encoding="utf-8")))
        return None if entry.quarantined else entry

    def put(self, entry: TranslationCacheEntry) -> None:
        path = self._path(entry.key)
        if path.exists() and not entry.quarantined:
            return  # entries are immutable once written
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(entry.to_dict(), sort_keys=True, ensure_ascii=False, indent=2) + "\n",
                       encoding="utf-8")
        tmp.replace(path)

    def keys(self) -> list[str]:
        return sorted(p.stem for p in self.directory.glob("*.json"))


def parse_llm_response(raw: str, expected_steps: int) -> list[str]:
    """Accept a JSON array of strings, or an object wrapping exactly one.

    Anything else is malformed, as is a step-count mismatch.
    """
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as err:
        raise MalformedResponse(f"response is not JSON: {err.msg}", position=f"char {err.pos}") from err
    if isinstance(doc, dict):
        array_fields = [k for k, v in doc.items() if isinstance(v, list)]
        if len(array_fields) != 1:
            raise MalformedResponse("response object must wrap exactly one array field", position="$")
        doc = doc[array_fields[0]]
    if not isinstance(doc, list):
        raise MalformedResponse("response must be a JSON array of strings", position="$")
    for i, item in enumerate(doc):
        if not isinstance(item, str):
            raise MalformedResponse(f"array element is {type(item).__name__}, not string",
                                    position=f"$[{i}]")
    if len(doc) != expected_steps:
        raise MalformedResponse(
            f"expected {expected_steps} gloss strings, got {len(doc)}", position="$")
    return list(doc)


def _post_chat(config: LlmRequestConfig, prompt: str, credential: str) -> str:
    """One chat-completion POST; returns the assistant message text."""
    payload = {
        "model": config.model,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": config.temperature,
        "max_tokens": config.max_tokens,
        "top_p": config.top_p,
        "frequency_penalty": config.frequency_penalty,
        "presence_penalty": config.presence_penalty,
    }
    response = requests.post(
        config.endpoint,
        json=payload,
        headers={"Authorization": f"Bearer {credential}"},
        timeout=config.timeout,
    )
    response.raise_for_status()
    body = response.json()
    try:
        return body["choices"][0]["message"]["content"]
    except (KeyError, IndexError, TypeError) as err:
        raise MalformedResponse("endpoint reply lacks choices[0].message.content") from err


def _call_with_retries(config: LlmRequestConfig, prompt: str, credential: str,
                       backoff_base: float = 0.5) -> str:
    last: Exception | None = None
    for attempt in range(max(1, config.max_retries)):
        try:
            return _post_chat(config, prompt, credential)
        except (requests.RequestException, ConnectionError) as err:
            last = err
            if attempt + 1 < max(1, config.max_retries):
                time.sleep(backoff_base * (2 ** attempt))
    raise NetworkFailure(f"chat endpoint failed after {config.max_retries} attempts: {last}")


def _utc_now() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


def llm_translate(task: TaskSpec,
                  config: LlmRequestConfig,
                  cache: TranslationCache,
                  *,
                  offline: bool = False,
                  credential: str | None = None,
                  backoff_base: float = 0.5) -> list[GlossSequence]:
    """Translate a task's steps, serving from cache whenever possible."""
    prompt = build_prompt(task)
    key = cache_key(config.model, prompt, config)
    entry = cache.get(key)
    if entry is None:
        if offline:
            raise NetworkFailure(
                f"offline mode and no cached translation for task {task.task_id!r} (key {key[:12]}...)")
        if not config.endpoint:
            raise NetworkFailure("no chat endpoint configured "
                                 f"(set {ENDPOINT_ENV} or pass --endpoint)")
        credential = credential if credential is not None else os.environ.get(CREDENTIAL_ENV)
        if not credential:
            raise MissingCredential(f"set {CREDENTIAL_ENV} to call the chat endpoint")
        raw = _call_with_retries(config, prompt, credential, backoff_base)
        try:
            parsed = parse_llm_response(raw, len(task.steps))
        except MalformedResponse as err:
            cache.put(TranslationCacheEntry(
                key=key, model=config.model, prompt=prompt,
                params=config.sampling_params(), response_text=raw,
                parsed=(), created_at=_utc_now(), quarantined=True))
            raise MalformedResponse(str(err), task_id=task.task_id) from err
        entry = TranslationCacheEntry(
            key=key, model=config.model, prompt=prompt,
            params=config.sampling_params(), response_text=raw,
            parsed=tuple(parsed), created_at=_utc_now())
        cache.put(entry)
    sequences = []
    for step, gloss_text in zip(task.steps, entry.parsed):
        sequences.append(GlossSequence(
            step_index=step.index, glosses=tuple(normalize(gloss_text)),
            provenance=Provenance.LLM))
    return sequences


def load_overlay(curated_dir: str | Path, task: TaskSpec) -> list[GlossSequence] | None:
    """Manual correction overlay: curated/<task_id>.json, one gloss string per step."""
    path = Path(curated_dir) / f"{task.task_id}.json"
    if not path.exists():
        return None
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise MalformedResponse(f"curated overlay is not JSON: {err.msg}",
                                task_id=task.task_id) from err
    if not isinstance(doc, list) or len(doc) != len(task.steps) \
            or any(not isinstance(x, str) for x in doc):
        raise MalformedResponse("curated overlay must be an array with one gloss string per step",
                                task_id=task.task_id)
    return [GlossSequence(step_index=step.index, glosses=tuple(normalize(text)),
                          provenance=Provenance.MANUAL)
            for step, text in zip(task.steps, doc)]


class LlmTranslator:
    """Per-task adapter used by the compiler; overlay wins over cache."""

    name = "llm"

    def __init__(self, config: LlmRequestConfig, cache: TranslationCache,
                 *, offline: bool = False, curated_dir: str | Path | None = None,
                 credential: str | None = None):
        self.config = config
        self.cache = cache
        self.offline = offline
        self.curated_dir = curated_dir
        self.credential = credential

    def translate_task(self, task: TaskSpec) -> list[GlossSequence]:
        if self.curated_dir is not None:
            overlay = load_overlay(self.curated_dir, task)
            if overlay is not None:
                return overlay
        return llm_translate(task, self.config, self.cache,
                             offline=self.offline, credential=self.credential)


class ManualTranslator:
    """Overlay-only translation for fully hand-curated task sets."""

    name = "manual"

    def __init__(self, curated_dir: str | Path):
        self.curated_dir = curated_dir

    def translate_task(self, task: TaskSpec) -> list[GlossSequence]:
        overlay = load_overlay(self.curated_dir, task)
        if overlay is None:
            raise MalformedResponse("no curated overlay file for task", task_id=task.task_id)
        return overlay
