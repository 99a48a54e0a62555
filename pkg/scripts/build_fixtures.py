#!/usr/bin/env python3
"""Regenerate the bundled manifest and primed translation cache.

The cache entries are frozen chat-model translations for every bundled task
(one authored response per task, styled after real model output: content
words, occasional synonym swaps, object-first ordering, fingerspelling for
terms without an established sign). The manifest covers most of the corpus
vocabulary plus general dictionary padding and letter clips; a few corpus
tokens are deliberately left without videos so the synonym fallback and the
retrieval metrics have something to do.

Run from the repository root: python scripts/build_fixtures.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from signpipe.gloss import GlossSequence, Provenance, normalize
from signpipe.llm import LlmRequestConfig, TranslationCacheEntry, build_prompt, cache_key
from signpipe.manifest import SynonymTable, VideoManifest
from signpipe.metrics.retrieval import coverage_curve, default_sizes, retrieval_report
from signpipe.ruletrans import rule_translate
from signpipe.tasks import load_task_dir

DATA = ROOT / "src" / "signpipe" / "data"
FROZEN_TIMESTAMP = "2024-01-15T00:00:00Z"

# Authored chat-model translations, one gloss string per step.
LLM_GLOSSES: dict[str, list[str]] = {
    "blondies": [
        "OVEN PREHEAT 350 PAN BUTTER SPREAD",
        "BUTTER SUGAR WHISK BOWL EGG VANILLA BEAT",
        "CHOCOLATE CHOP ADD DOUGH MIX STIR",
        "DOUGH POUR PAN BAKE 25 MINUTE GOLDEN",
        "COOL CUT SQUARE",
    ],
    "origami-crane": [
        "PAPER FOLD HALF DIAGONAL CREASE",
        "PAPER OPEN CORNER FOLD CENTER",
        "MODEL FLIP EDGE FOLD MIDDLE",
        "WING PULL GENTLE HEAD SHAPE",
    ],
    "mapo-tofu": [
        "T-O-F-U DRAIN CUT SMALL CUBE",
        "OIL HEAT WOK GINGER GARLIC FRY FRAGRANT",
        "SAUCE ADD SIMMER T-O-F-U SLIDE",
        "SCALLION SPRINKLE RICE SERVE",
    ],
    "banana-bread": [
        "BANANA MASH BOWL",
        "FLOUR SUGAR SALT MIX BANANA COMBINE",
        "LOAF PAN POUR BAKE 60 MINUTE",
        "BREAD REST BEFORE SLICE",
    ],
    "scrambled-eggs": [
        "EGG CRACK BOWL WHISK",
        "BUTTER MELT PAN LOW HEAT",
        "EGG POUR STIR SLOW SOFT",
        "SALT PEPPER SEASON SERVE WARM",
    ],
    "paper-boat": [
        "PAPER FOLD HALF TOP CORNER MIDDLE FOLD",
        "BOTTOM FLAP FOLD UP SIDE",
        "SIDE PULL APART FLATTEN SQUARE",
        "BOTTOM POINT FOLD UP BOAT OPEN",
    ],
    "tomato-soup": [
        "ONION GARLIC CHOP",
        "ONION COOK OLIVE OIL SOFT",
        "TOMATO BROTH ADD SIMMER 20 MINUTE",
        "SOUP BLEND SMOOTH SEASON",
    ],
    "grilled-cheese": [
        "BREAD 2 SLICE BUTTER SPREAD",
        "CHEESE PLACE SLICE BETWEEN",
        "SANDWICH GRILL PAN GOLDEN FLIP",
        "HALF CUT SERVE HOT",
    ],
    "fruit-salad": [
        "APPLE GRAPE BERRY WASH",
        "ORANGE PEEL BANANA SLICE",
        "FRUIT LEMON JUICE HONEY TOSS",
        "CHILL SERVE",
    ],
    "iced-tea": [
        "WATER BOIL TEA BAG STEEP 5 MINUTE",
        "BAG REMOVE SUGAR STIR",
        "ICE POUR LEMON SLICE ADD",
        "REFRIGERATE UNTIL COLD",
    ],
    "plant-seedling": [
        "SOIL SMALL HOLE DIG",
        "SEEDLING POT REMOVE CAREFUL",
        "ROOT HOLE PLACE SOIL COVER",
        "PLANT WATER DEEP",
    ],
    "pancakes": [
        "FLOUR MILK EGG WHISK SMOOTH DOUGH",
        "PAN HEAT DOUGH POUR",
        "COOK BUBBLE FORM PANCAKE FLIP",
        "PANCAKE STACK SYRUP TOP",
    ],
}

# Corpus tokens deliberately left without a video. MIX/DOUGH/CHILL and the
# adjective forms are recoverable through synonyms; TOFU gets fingerspelled;
# PANCAKE decomposes into PAN CAKE.
NO_VIDEO = {"MIX", "DOUGH", "CHILL", "GENTLE", "CAREFUL", "DEEP", "SLOW",
            "TOFU", "T-O-F-U", "PANCAKE"}

# Entries served from the secondary dictionary source.
BACKUP_SOURCE = {"WOK", "SEEDLING", "FLATTEN", "REFRIGERATE", "SYRUP",
                 "SCALLION", "CREASE", "STEEP", "BROTH", "LOAF", "MODEL",
                 "FRAGRANT", "DIAGONAL", "DIAGONALLY", "GENTLY"}

# General dictionary padding beyond the bundled corpus vocabulary.
PADDING = """
KNIFE FORK SPOON PLATE CUP TABLESPOON TEASPOON KITCHEN TABLE CHAIR
REFRIGERATOR FREEZER MICROWAVE DISH TOWEL NAPKIN GLOVE APRON RECIPE FOOD
MEAL BREAKFAST LUNCH DINNER SNACK TASTE SMELL LOOK SEE WATCH WAIT START
FINISH BEGIN END MAKE PREPARE CLEAN DIRTY EMPTY FULL MORE LESS ENOUGH HELP
NEED WANT USE HOLD GRAB LIFT CARRY BRING PUT SET MOVE PUSH PRESS SQUEEZE
ROLL WRAP TIE HANG ATTACH CONNECT MEASURE WEIGH COUNT NUMBER TIME HOUR
SECOND DAY WEEK SAFE CHICKEN BEEF PORK FISH SHRIMP PASTA NOODLE POTATO
CARROT PEA CORN BEAN MUSHROOM SPINACH LETTUCE CUCUMBER AVOCADO STRAWBERRY
BLUEBERRY PEACH PEAR MANGO MELON PINEAPPLE COCONUT ALMOND PEANUT WALNUT
RAISIN CINNAMON NUTMEG BASIL OREGANO THYME PARSLEY MINT DILL CUMIN PAPRIKA
CHILI MUSTARD KETCHUP VINEGAR COFFEE CREAM YOGURT TOAST BAGEL MUFFIN COOKIE
BROWNIE PIE TART PUDDING JAM JELLY OATMEAL CEREAL TORTILLA TACO PIZZA
BURGER SALAD STEW CURRY GRAVY SCISSORS TAPE GLUE STRING ROPE WIRE NAIL
SCREW HAMMER RULER PENCIL PEN MARKER BRUSH PAINT WOOD METAL PLASTIC FABRIC
THREAD NEEDLE BUTTON SEED FLOWER STEM BRANCH GARDEN SHOVEL RAKE HOSE BUCKET
SPONGE SOAP CAKE TURN LITTLE PREPARE STOVE
""".split()


def rule_corpus(tasks) -> list[GlossSequence]:
    out = []
    for task in tasks:
        for step in task.steps:
            out.append(rule_translate(step.text, step_index=step.index))
    return out


def llm_corpus(tasks) -> list[GlossSequence]:
    out = []
    for task in tasks:
        for step, text in zip(task.steps, LLM_GLOSSES[task.task_id]):
            out.append(GlossSequence(step.index, tuple(normalize(text)), Provenance.LLM))
    return out


def build_cache(tasks) -> None:
    cache_dir = DATA / "llm_cache"
    cache_dir.mkdir(parents=True, exist_ok=True)
    for old in cache_dir.glob("*.json"):
        old.unlink()
    config = LlmRequestConfig()
    for task in tasks:
        glosses = LLM_GLOSSES[task.task_id]
        assert len(glosses) == len(task.steps), task.task_id
        prompt = build_prompt(task)
        key = cache_key(config.model, prompt, config)
        entry = TranslationCacheEntry(
            key=key, model=config.model, prompt=prompt,
            params=config.sampling_params(),
            response_text=json.dumps(glosses, ensure_ascii=False),
            parsed=tuple(glosses), created_at=FROZEN_TIMESTAMP)
        (cache_dir / f"{key}.json").write_text(
            json.dumps(entry.to_dict(), sort_keys=True, ensure_ascii=False, indent=2) + "\n",
            encoding="utf-8")
    print(f"cache: {len(tasks)} entries")


def build_manifest(rule_seqs, llm_seqs) -> VideoManifest:
    vocab = set()
    for seq in [*rule_seqs, *llm_seqs]:
        vocab.update(seq.tokens)
    keys = sorted((vocab | set(PADDING)) - NO_VIDEO)
    entries = {}
    for key in keys:
        if key in BACKUP_SOURCE:
            entries[key] = {"uri": f"backup/{key}.mp4", "source": "backup"}
        else:
            entries[key] = {"uri": f"signs/{key}.mp4", "source": "primary"}
    for ch in "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789":
        entries.setdefault(ch, {"uri": f"letters/{ch}.mp4", "source": "primary"})
    (DATA / "manifest.json").write_text(
        json.dumps(entries, sort_keys=True, ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8")
    manifest = VideoManifest.from_mapping(entries)
    non_letter = sum(1 for k in entries if len(k) > 1)
    print(f"manifest: {len(entries)} entries ({non_letter} multi-char, "
          f"{len(manifest.letter_clips)} letter clips)")
    return manifest


def verify(rule_seqs, llm_seqs, manifest) -> None:
    syn = SynonymTable.load(DATA / "synonyms.tsv")
    for name, seqs in (("rule", rule_seqs), ("llm", llm_seqs)):
        report = retrieval_report(seqs, manifest, syn)
        print(f"{name}: hit_rate={report.hit_rate:.4f} recall@1={report.recall_at_1:.4f} "
              f"({report.n_hits}/{report.n_glosses} hits, {report.n_synonym_recoverable} recoverable)")
    curve = coverage_curve(llm_seqs, manifest, "frequency", (0,),
                           default_sizes(len(manifest.entries)), syn)
    recalls = [p.recall_at_1 for p in curve.points if p.recall_at_1 is not None]
    print(f"llm curve recall@1 range: [{min(recalls):.4f}, {max(recalls):.4f}]")
    assert all(0.78 <= r <= 1.0 for r in recalls), "curve bound violated; adjust NO_VIDEO"
    hit_rates = [p.hit_rate for p in curve.points]
    assert all(b >= a for a, b in zip(hit_rates, hit_rates[1:])), "hit rate not monotone"


def main() -> None:
    tasks = load_task_dir(DATA / "tasks")
    assert set(LLM_GLOSSES) == {t.task_id for t in tasks}, "task set and authored glosses differ"
    build_cache(tasks)
    rule_seqs = rule_corpus(tasks)
    llm_seqs = llm_corpus(tasks)
    manifest = build_manifest(rule_seqs, llm_seqs)
    verify(rule_seqs, llm_seqs, manifest)


if __name__ == "__main__":
    main()
