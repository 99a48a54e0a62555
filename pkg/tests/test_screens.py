from __future__ import annotations

import json

import pytest

from signpipe.resolver import compile_task
from signpipe.ruletrans import RuleTranslator
from signpipe.screens import screens_for_task, task_card
from signpipe.service import canonical_json
from signpipe.tasks import load_tasks


@pytest.fixture(scope="module")
def compiled_pair(bundled_manifest, bundled_synonyms):
    from signpipe.tasks import load_task_dir

    from conftest import DATA_DIR

    tasks = {t.task_id: t for t in load_task_dir(DATA_DIR / "tasks")}
    translator = RuleTranslator()
    return (
        compile_task(tasks["blondies"], translator, bundled_manifest, bundled_synonyms),
        compile_task(tasks["origami-crane"], translator, bundled_manifest, bundled_synonyms),
    )


def step_screens(screens):
    return [s for s in screens if s["kind"] == "step"]


class TestScreenSequence:
    def test_four_step_task_storyboard_shape(self, compiled_pair):
        _, origami = compiled_pair
        assert len(origami.steps) == 4
        screens = screens_for_task(origami)
        assert [s["kind"] for s in screens] == ["landing", "task_list"] + ["step"] * 4

    def test_recipe_ingredients_on_every_step(self, compiled_pair):
        blondies, _ = compiled_pair
        for screen in step_screens(screens_for_task(blondies)):
            assert screen["ingredients"]
            assert any(line["name"] == "chocolate" for line in screen["ingredients"])

    def test_howto_has_no_ingredients_panel(self, compiled_pair):
        _, origami = compiled_pair
        for screen in step_screens(screens_for_task(origami)):
            assert "ingredients" not in screen

    def test_navigation_totality(self, compiled_pair):
        _, origami = compiled_pair
        steps = step_screens(screens_for_task(origami))
        assert steps[0]["navigation"] == {"previous": False, "next": True, "home": True}
        assert steps[-1]["navigation"] == {"previous": True, "next": False, "home": True}
        for mid in steps[1:-1]:
            assert mid["navigation"]["previous"] and mid["navigation"]["next"]

    def test_single_step_task_disables_both_directions(self, bundled_manifest):
        (task,) = load_tasks(b'{"title":"One","steps":[{"text":"Stir."}]}')
        compiled = compile_task(task, RuleTranslator(), bundled_manifest)
        (step,) = step_screens(screens_for_task(compiled))
        assert step["navigation"] == {"previous": False, "next": False, "home": True}

    def test_step_screen_references_playlist_and_image(self, compiled_pair):
        blondies, _ = compiled_pair
        for screen in step_screens(screens_for_task(blondies)):
            assert screen["playlist"]["segments"]
            assert screen["captions"] == screen["playlist"]["boundaries"]
            assert screen["image"]

    def test_relevant_ingredients_filter_honored(self, bundled_manifest):
        doc = {
            "title": "Filtered", "domain": "recipe",
            "ingredients": [{"name": "salt"}, {"name": "pepper"}],
            "steps": [{"text": "Add salt.", "relevant_ingredients": ["salt"]}],
        }
        (task,) = load_tasks(json.dumps(doc).encode())
        compiled = compile_task(task, RuleTranslator(), bundled_manifest)
        (step,) = step_screens(screens_for_task(compiled))
        assert [line["name"] for line in step["ingredients"]] == ["salt"]


class TestDeterminism:
    def test_screens_byte_identical_across_recompiles(self, bundled_manifest,
                                                      bundled_synonyms, bundled_tasks):
        task = next(t for t in bundled_tasks if t.task_id == "blondies")
        first = compile_task(task, RuleTranslator(), bundled_manifest, bundled_synonyms)
        second = compile_task(task, RuleTranslator(), bundled_manifest, bundled_synonyms)
        assert canonical_json(screens_for_task(first)) == canonical_json(screens_for_task(second))


def test_task_card_flags_signing_support(compiled_pair):
    blondies, origami = compiled_pair
    assert task_card(blondies).asl_supported
    assert task_card(origami).domain == "howto"
