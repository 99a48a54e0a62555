"""Corpus text-similarity metrics over aligned gloss corpora.

Inputs are parallel lists of gloss strings (one per step), whitespace
tokenized as-is. BLEU is corpus-level with modified n-gram precision and
brevity penalty, unsmoothed unless asked; chrF uses character n-grams up to
order 6 with beta=2 over whitespace-stripped text; ROUGE-L is the mean
per-pair LCS F1; WER is token edit distance over reference length and may
exceed 1.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..errors import AlignmentError, UndefinedMetric

Smoothing = str  # "none" | "add1"


def _check_aligned(hyps: Sequence[str], refs: Sequence[str]) -> None:
    if len(hyps) != len(refs):
        raise AlignmentError(f"hypothesis corpus has {len(hyps)} segments, reference has {len(refs)}")
    if not hyps:
        raise UndefinedMetric("corpora are empty")


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu_n(hyps: Sequence[str], refs: Sequence[str], n: int = 4,
           smoothing: Smoothing = "none") -> float:
    """Corpus BLEU with maximum n-gram order ``n``, in [0, 1]."""
    _check_aligned(hyps, refs)
    if not 1 <= n <= 9:
        raise UndefinedMetric(f"unsupported BLEU order {n}")
    correct = [0] * n
    total = [0] * n
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hyps, refs):
        hyp_tokens = hyp.split()
        ref_tokens = ref.split()
        hyp_len += len(hyp_tokens)
        ref_len += len(ref_tokens)
        for order in range(1, n + 1):
            hyp_ngrams = _ngrams(hyp_tokens, order)
            ref_ngrams = _ngrams(ref_tokens, order)
            total[order - 1] += sum(hyp_ngrams.values())
            correct[order - 1] += sum(min(count, ref_ngrams[gram])
                                      for gram, count in hyp_ngrams.items())

    log_sum = 0.0
    for order in range(1, n + 1):
        c, t = correct[order - 1], total[order - 1]
        if smoothing == "add1" and order > 1:
            c, t = c + 1, t + 1
        if t == 0 or c == 0:
            return 0.0
        log_sum += math.log(c / t)
    precision_mean = math.exp(log_sum / n)
    if hyp_len == 0:
        return 0.0
    bp = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    return bp * precision_mean


def _lcs_len(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0]
        for j, y in enumerate(b, 1):
            curr.append(prev[j - 1] + 1 if x == y else max(prev[j], curr[j - 1]))
        prev = curr
    return prev[-1]


def rouge_l(hyps: Sequence[str], refs: Sequence[str]) -> float:
    """Mean per-pair ROUGE-L F1 (longest common subsequence, beta=1)."""
    _check_aligned(hyps, refs)
    scores = []
    for hyp, ref in zip(hyps, refs):
        hyp_tokens = hyp.split()
        ref_tokens = ref.split()
        lcs = _lcs_len(hyp_tokens, ref_tokens)
        if lcs == 0:
            scores.append(0.0)
            continue
        precision = lcs / len(hyp_tokens)
        recall = lcs / len(ref_tokens)
        scores.append(2 * precision * recall / (precision + recall))
    return sum(scores) / len(scores)


def _char_ngrams(text: str, n: int) -> Counter:
    return Counter(text[i:i + n] for i in range(len(text) - n + 1))


def chrf(hyps: Sequence[str], refs: Sequence[str], order: int = 6, beta: float = 2.0,
         remove_whitespace: bool = True) -> float:
    """Corpus chrF in [0, 1]: char n-gram F-beta averaged over orders 1..order."""
    _check_aligned(hyps, refs)
    hyp_totals = [0] * order
    ref_totals = [0] * order
    matches = [0] * order
    for hyp, ref in zip(hyps, refs):
        if remove_whitespace:
            hyp = "".join(hyp.split())
            ref = "".join(ref.split())
        for i in range(order):
            hyp_ngrams = _char_ngrams(hyp, i + 1)
            ref_ngrams = _char_ngrams(ref, i + 1)
            hyp_totals[i] += sum(hyp_ngrams.values())
            ref_totals[i] += sum(ref_ngrams.values())
            matches[i] += sum((hyp_ngrams & ref_ngrams).values())

    avg_precision = 0.0
    avg_recall = 0.0
    effective = 0
    for i in range(order):
        if hyp_totals[i] > 0 and ref_totals[i] > 0:
            avg_precision += matches[i] / hyp_totals[i]
            avg_recall += matches[i] / ref_totals[i]
            effective += 1
    if effective == 0:
        return 0.0
    avg_precision /= effective
    avg_recall /= effective
    if avg_precision + avg_recall == 0:
        return 0.0
    beta_sq = beta * beta
    return (1 + beta_sq) * avg_precision * avg_recall / (beta_sq * avg_precision + avg_recall)


def edit_distance(a: Sequence[str], b: Sequence[str]) -> int:
    """Levenshtein distance over token sequences (two-row DP)."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        curr = [i]
        for j, y in enumerate(b, 1):
            cost = 0 if x == y else 1
            curr.append(min(prev[j] + 1, curr[j - 1] + 1, prev[j - 1] + cost))
        prev = curr
    return prev[-1]


def wer(hyps: Sequence[str], refs: Sequence[str]) -> float:
    """Corpus WER: summed token edit distance over summed reference length."""
    _check_aligned(hyps, refs)
    distance = 0
    ref_len = 0
    for hyp, ref in zip(hyps, refs):
        distance += edit_distance(hyp.split(), ref.split())
        ref_len += len(ref.split())
    if ref_len == 0:
        raise UndefinedMetric("reference corpus contains no tokens")
    return distance / ref_len


@dataclass(frozen=True)
class TextMetricReport:
    bleu_1: float
    bleu_2: float
    bleu_3: float
    bleu_4: float
    rouge_l_f1: float
    chrf: float
    wer: float
    n_pairs: int
    extras: Mapping[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "bleu_1": self.bleu_1, "bleu_2": self.bleu_2,
            "bleu_3": self.bleu_3, "bleu_4": self.bleu_4,
            "rouge_l_f1": self.rouge_l_f1, "chrf": self.chrf, "wer": self.wer,
            "n_pairs": self.n_pairs,
        }
        out.update(dict(sorted(self.extras.items())))
        return out


def compare_translations(hyp_corpus: Sequence[str], ref_corpus: Sequence[str],
                         smoothing: Smoothing = "none",
                         extra_scores: Mapping[str, Sequence[float]] | None = None) -> TextMetricReport:
    """All text metrics of a hypothesis corpus against a reference corpus.

    ``extra_scores`` folds externally computed per-pair scores (for metrics
    needing models we do not ship, e.g. embedding-based ones) into the
    report as corpus means.
    """
    _check_aligned(hyp_corpus, ref_corpus)
    extras = {}
    for name, values in (extra_scores or {}).items():
        if len(values) != len(hyp_corpus):
            raise AlignmentError(f"extra scorer {name!r} has {len(values)} values for {len(hyp_corpus)} pairs")
        extras[name] = sum(values) / len(values)
    return TextMetricReport(
        bleu_1=bleu_n(hyp_corpus, ref_corpus, 1, smoothing),
        bleu_2=bleu_n(hyp_corpus, ref_corpus, 2, smoothing),
        bleu_3=bleu_n(hyp_corpus, ref_corpus, 3, smoothing),
        bleu_4=bleu_n(hyp_corpus, ref_corpus, 4, smoothing),
        rouge_l_f1=rouge_l(hyp_corpus, ref_corpus),
        chrf=chrf(hyp_corpus, ref_corpus),
        wer=wer(hyp_corpus, ref_corpus),
        n_pairs=len(hyp_corpus),
        extras=extras,
    )
