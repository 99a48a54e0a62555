"""Screen model for the task walkthrough UI.

One task renders as a landing screen (entry into signing mode), a task list
screen, then one step screen per instruction step. Step screens for recipes
carry an ingredients panel rendered as written text; signing the ingredient
list is deliberately avoided.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .resolver import CompiledTask
from .tasks import Domain


class ScreenKind(str, Enum):
    LANDING = "landing"
    TASK_LIST = "task_list"
    STEP = "step"


@dataclass(frozen=True)
class TaskCard:
    task_id: str
    title: str
    domain: str
    main_image: str | None
    asl_supported: bool

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id, "title": self.title, "domain": self.domain,
            "main_image": self.main_image, "asl_supported": self.asl_supported,
        }


def task_card(compiled: CompiledTask) -> TaskCard:
    supported = any(s.playlist and s.playlist.segments for s in compiled.steps)
    return TaskCard(
        task_id=compiled.task.task_id, title=compiled.task.title,
        domain=compiled.task.domain.value, main_image=compiled.task.main_image,
        asl_supported=supported,
    )


def _ingredients_panel(compiled: CompiledTask, step_index: int) -> list[dict] | None:
    if compiled.task.domain is not Domain.RECIPE:
        return None
    step = compiled.task.steps[step_index]
    lines = compiled.task.ingredients
    if step.relevant_ingredients is not None:
        wanted = set(step.relevant_ingredients)
        lines = tuple(line for line in lines if line.name in wanted)
    return [line.to_dict() for line in lines]


def screens_for_task(compiled: CompiledTask,
                     catalog: Sequence[TaskCard] | None = None) -> list[dict]:
    """Landing, task list, then one step screen per step.

    ``catalog`` supplies the cards shown on the task list screen; by default
    only the compiled task itself appears. Output ordering and field layout
    are stable so re-serving a recompiled task is byte-identical.
    """
    cards = list(catalog) if catalog is not None else [task_card(compiled)]
    card_dicts = [c.to_dict() for c in cards]
    screens: list[dict] = [
        {
            "kind": ScreenKind.LANDING.value,
            "featured": card_dicts,
            "asl_entry": {"label": "ASL Tasks", "action": "enter_asl_mode"},
        },
        {
            "kind": ScreenKind.TASK_LIST.value,
            "cards": card_dicts,
        },
    ]
    last = len(compiled.steps) - 1
    for step in compiled.steps:
        screen = {
            "kind": ScreenKind.STEP.value,
            "task_id": compiled.task.task_id,
            "step_index": step.index,
            "step_count": len(compiled.steps),
            "text": step.text,
            "image": step.image,
            "playlist": step.playlist.to_dict() if step.playlist else None,
            "captions": [
                {"token": token, "start": start, "end": end}
                for token, start, end in (step.playlist.boundaries if step.playlist else ())
            ],
            "navigation": {
                "previous": step.index > 0,
                "next": step.index < last,
                "home": True,
            },
            "error": step.error,
        }
        panel = _ingredients_panel(compiled, step.index)
        if panel is not None:
            screen["ingredients"] = panel
        screens.append(screen)
    return screens
