"""Task data model and ingestion of task JSON documents.

A task document is a single JSON object (or an array of them) with ``title``,
``main_image``, ``ingredients`` (``[{name, quantity_text}]``), ``task_texts``
(array of step strings), ``images`` (parallel to ``task_texts``) and
``domain``. A ``steps`` array of ``{index, text, image}`` objects is accepted
as an equivalent spelling. Unknown fields are preserved in ``extras`` and
ignored by the pipeline.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import IO, Any, Iterable, Union

from .errors import MalformedDocument, SchemaViolation

FORMAT_VERSION = "1"

_KNOWN_FIELDS = {
    "task_id", "title", "domain", "main_image", "ingredients",
    "task_texts", "images", "steps", "format_version", "extras",
}


class Domain(str, Enum):
    RECIPE = "recipe"
    HOWTO = "howto"


@dataclass(frozen=True)
class IngredientLine:
    name: str
    quantity_text: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "quantity_text": self.quantity_text}


@dataclass(frozen=True)
class InstructionStep:
    index: int
    text: str
    image: str | None = None
    relevant_ingredients: tuple[str, ...] | None = None

    def to_dict(self) -> dict:
        out: dict = {"index": self.index, "text": self.text, "image": self.image}
        if self.relevant_ingredients is not None:
            out["relevant_ingredients"] = list(self.relevant_ingredients)
        return out


@dataclass(frozen=True)
class TaskSpec:
    task_id: str
    title: str
    domain: Domain
    steps: tuple[InstructionStep, ...]
    ingredients: tuple[IngredientLine, ...] = ()
    main_image: str | None = None
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "title": self.title,
            "domain": self.domain.value,
            "main_image": self.main_image,
            "ingredients": [i.to_dict() for i in self.ingredients],
            "steps": [s.to_dict() for s in self.steps],
            **({"extras": self.extras} if self.extras else {}),
        }


def _slug(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-") or "task"


def _parse_ingredients(raw: Any, task_id: str) -> tuple[IngredientLine, ...]:
    if raw is None:
        return ()
    if not isinstance(raw, list):
        raise SchemaViolation("ingredients must be an array", task_id, "$.ingredients")
    lines = []
    for i, item in enumerate(raw):
        path = f"$.ingredients[{i}]"
        if isinstance(item, str):
            item = {"name": item}
        if not isinstance(item, dict) or not str(item.get("name", "")).strip():
            raise SchemaViolation("ingredient needs a non-empty name", task_id, path)
        lines.append(IngredientLine(name=str(item["name"]).strip(),
                                    quantity_text=str(item.get("quantity_text", "")).strip()))
    return tuple(lines)


def _parse_steps(doc: dict, task_id: str) -> tuple[InstructionStep, ...]:
    if "task_texts" in doc:
        texts = doc["task_texts"]
        if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
            raise SchemaViolation("task_texts must be an array of strings", task_id, "$.task_texts")
        images = doc.get("images") or [None] * len(texts)
        if len(images) != len(texts):
            raise SchemaViolation("images must parallel task_texts", task_id, "$.images")
        raw_steps: list[dict] = [
            {"index": i, "text": t, "image": images[i]} for i, t in enumerate(texts)
        ]
    elif "steps" in doc:
        raw_steps = doc["steps"]
        if not isinstance(raw_steps, list):
            raise SchemaViolation("steps must be an array", task_id, "$.steps")
    else:
        raise SchemaViolation("document has neither task_texts nor steps", task_id, "$")

    steps: list[InstructionStep] = []
    for pos, item in enumerate(raw_steps):
        path = f"$.steps[{pos}]"
        if not isinstance(item, dict):
            raise SchemaViolation("step must be an object", task_id, path)
        index = item.get("index", pos)
        if index != pos:
            raise SchemaViolation(
                f"step indices must be contiguous from 0; found {index} at position {pos}",
                task_id, path + ".index")
        text = str(item.get("text", "")).strip()
        if not text:
            raise SchemaViolation("step text is empty", task_id, path + ".text")
        relevant = item.get("relevant_ingredients")
        steps.append(InstructionStep(
            index=pos, text=text, image=item.get("image"),
            relevant_ingredients=tuple(relevant) if relevant is not None else None))
    if not steps:
        raise SchemaViolation("task has no steps", task_id, "$.steps")
    return tuple(steps)


def _parse_task(doc: dict) -> TaskSpec:
    if not isinstance(doc, dict):
        raise SchemaViolation("task document must be a JSON object", None, "$")
    title = str(doc.get("title", "")).strip()
    task_id = str(doc.get("task_id") or _slug(title))
    if not title:
        raise SchemaViolation("title is missing or empty", task_id or None, "$.title")

    ingredients = _parse_ingredients(doc.get("ingredients"), task_id)
    if "domain" in doc:
        try:
            domain = Domain(doc["domain"])
        except ValueError:
            raise SchemaViolation(f"unknown domain {doc['domain']!r}", task_id, "$.domain") from None
    else:
        domain = Domain.RECIPE if ingredients else Domain.HOWTO
    if domain is Domain.HOWTO and ingredients:
        raise SchemaViolation("howto tasks carry an empty ingredient list", task_id, "$.ingredients")

    steps = _parse_steps(doc, task_id)
    extras = dict(doc.get("extras") or {})
    extras.update({k: doc[k] for k in doc if k not in _KNOWN_FIELDS})
    return TaskSpec(task_id=task_id, title=title, domain=domain, steps=steps,
                    ingredients=ingredients, main_image=doc.get("main_image"), extras=extras)


def load_tasks(source: Union[bytes, str, IO[bytes], IO[str]],
               format_version: str = FORMAT_VERSION) -> list[TaskSpec]:
    """Parse and validate one task document (or an array of them)."""
    if format_version != FORMAT_VERSION:
        raise SchemaViolation(f"unsupported format_version {format_version!r}")
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as err:
            raise MalformedDocument(f"input is not UTF-8: {err}") from err
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as err:
        raise MalformedDocument(f"input is not JSON: {err}") from err
    docs = doc if isinstance(doc, list) else [doc]
    return [_parse_task(d) for d in docs]


def load_task_dir(path: str | Path) -> list[TaskSpec]:
    """Load every ``*.json`` task file in a directory, sorted by filename."""
    tasks: list[TaskSpec] = []
    for file in sorted(Path(path).glob("*.json")):
        with open(file, "rb") as fh:
            tasks.extend(load_tasks(fh))
    return tasks


@dataclass(frozen=True)
class ValidationReport:
    duplicate_ids: tuple[str, ...] = ()
    empty_step_tasks: tuple[str, ...] = ()
    dangling_images: tuple[tuple[str, str], ...] = ()  # (task_id, uri)

    @property
    def findings(self) -> int:
        return len(self.duplicate_ids) + len(self.empty_step_tasks) + len(self.dangling_images)

    def to_dict(self) -> dict:
        return {
            "duplicate_ids": list(self.duplicate_ids),
            "empty_step_tasks": list(self.empty_step_tasks),
            "dangling_images": [list(pair) for pair in self.dangling_images],
            "findings": self.findings,
        }


_URI_RE = re.compile(r"^(https?://\S+|[\w./-]+)$")


def _image_ok(uri: str | None) -> bool:
    return uri is None or bool(_URI_RE.match(uri))


def validate_collection(tasks: Iterable[TaskSpec]) -> ValidationReport:
    """Cross-task checks; report-only (syntactic image check, no fetching)."""
    seen: set[str] = set()
    dupes: list[str] = []
    empty: list[str] = []
    dangling: list[tuple[str, str]] = []
    for task in tasks:
        if task.task_id in seen and task.task_id not in dupes:
            dupes.append(task.task_id)
        seen.add(task.task_id)
        if not task.steps:
            empty.append(task.task_id)
        for uri in [task.main_image, *(s.image for s in task.steps)]:
            if not _image_ok(uri):
                dangling.append((task.task_id, uri))
    return ValidationReport(tuple(dupes), tuple(empty), tuple(dangling))
