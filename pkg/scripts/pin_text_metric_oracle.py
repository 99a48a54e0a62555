#!/usr/bin/env python3
"""Pin expected text-metric values computed by independent oracles.

BLEU and chrF come from sacrebleu 1.4.5 (pass the path to its single-file
source with --sacrebleu); BLEU-1..3 are derived from sacrebleu's own
sufficient statistics via the standard cumulative formula. ROUGE-L F1 uses a
direct recursive longest-common-subsequence implementation and WER a
full-matrix edit distance, both written here independently of the library
code under test. Output: tests/fixtures/text_metric_oracle.json.
"""

from __future__ import annotations

import argparse
import functools
import json
import math
import sys
import types
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]

# Pinned sample corpus: aligned hypothesis/reference gloss pairs with partial
# overlap, a perfect match, a disjoint pair, and a length mismatch.
HYPS = [
    "CHOCOLATE CHOP ADD DOUGH MIX STIR",
    "OVEN PREHEAT 350 PAN BUTTER SPREAD",
    "COOL CUT SQUARE",
    "PAPER FOLD HALF TOP CORNER MIDDLE FOLD",
    "EGG CRACK BOWL WHISK",
    "WATER BOIL TEA BAG STEEP 5 MINUTE",
]
REFS = [
    "CHOP CHOCOLATE ADD BATTER STIR UNTIL INCORPORATE",
    "PREHEAT OVEN 350 DEGREE BUTTER SQUARE BAKE PAN",
    "COOL CUT SQUARE",
    "FOLD PAPER IN HALF FOLD TOP CORNER MIDDLE",
    "SEASON WITH SALT PEPPER",
    "BOIL WATER STEEP TEA BAG FOR 5 MINUTE",
]


def load_sacrebleu(path: Path):
    sys.modules.setdefault("portalocker", types.ModuleType("portalocker"))
    mecab = types.ModuleType("MeCab")  # only the ja-mecab tokenizer needs it
    mecab.Tagger = lambda *args: types.SimpleNamespace(
        parse=lambda s: s,
        dictionary_info=lambda: types.SimpleNamespace(filename="stub", next=None,
                                                      size=392126))
    sys.modules.setdefault("MeCab", mecab)
    namespace: dict = {"__name__": "sacrebleu_oracle"}
    code = path.read_text(encoding="utf-8")
    exec(compile(code, str(path), "exec"), namespace)
    return types.SimpleNamespace(**namespace)


def oracle_bleu(sb) -> dict[str, float]:
    stats = sb.corpus_bleu(HYPS, [REFS], smooth_method="none", force=True,
                           tokenize="none", use_effective_order=False)
    # sacrebleu reports percentages; precisions[i] is for order i+1
    precisions = [p / 100.0 for p in stats.precisions]
    out = {}
    for n in range(1, 5):
        if any(p == 0.0 for p in precisions[:n]):
            out[f"bleu_{n}"] = 0.0
        else:
            out[f"bleu_{n}"] = stats.bp * math.exp(
                sum(math.log(p) for p in precisions[:n]) / n)
    assert abs(out["bleu_4"] - stats.score / 100.0) < 1e-12
    return out


def oracle_chrf(sb) -> float:
    return float(sb.corpus_chrf(HYPS, REFS, order=6, beta=2).score)


def lcs_recursive(a: tuple, b: tuple) -> int:
    @functools.lru_cache(maxsize=None)
    def go(i: int, j: int) -> int:
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + go(i + 1, j + 1)
        return max(go(i + 1, j), go(i, j + 1))

    return go(0, 0)


def oracle_rouge_l() -> float:
    scores = []
    for hyp, ref in zip(HYPS, REFS):
        h, r = tuple(hyp.split()), tuple(ref.split())
        lcs = lcs_recursive(h, r)
        if lcs == 0:
            scores.append(0.0)
            continue
        p, q = lcs / len(h), lcs / len(r)
        scores.append(2 * p * q / (p + q))
    return sum(scores) / len(scores)


def edit_distance_full_matrix(a: list, b: list) -> int:
    d = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        d[i][0] = i
    for j in range(len(b) + 1):
        d[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            d[i][j] = min(d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost)
    return d[-1][-1]


def oracle_wer() -> float:
    dist = sum(edit_distance_full_matrix(h.split(), r.split()) for h, r in zip(HYPS, REFS))
    ref_len = sum(len(r.split()) for r in REFS)
    return dist / ref_len


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--sacrebleu", required=True, type=Path,
                        help="Path to a sacrebleu 1.4.x single-file source")
    args = parser.parse_args()
    sb = load_sacrebleu(args.sacrebleu)
    assert sb.VERSION.startswith("1.4"), sb.VERSION

    expected = {"hyps": HYPS, "refs": REFS, "oracle": "sacrebleu " + sb.VERSION}
    expected.update(oracle_bleu(sb))
    expected["chrf"] = oracle_chrf(sb)
    expected["rouge_l_f1"] = oracle_rouge_l()
    expected["wer"] = oracle_wer()

    out = ROOT / "tests" / "fixtures" / "text_metric_oracle.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(expected, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    for key in ("bleu_1", "bleu_2", "bleu_3", "bleu_4", "chrf", "rouge_l_f1", "wer"):
        print(f"{key} = {expected[key]:.12f}")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
