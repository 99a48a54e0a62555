"""Hit Rate, Recall@1 and the dataset-growth curve.

Both metrics use multiset semantics: a gloss appearing five times counts five
times. Hit Rate is the fraction of gloss occurrences with a video in the
dictionary. Recall@1 divides hits by hits plus the occurrences of video-less
glosses that are recoverable through a synonym with a video; occurrences that
are neither served nor recoverable fall out of the ratio entirely. A second,
literal definition (hits over all occurrences, which collapses into Hit Rate)
is available via ``definition="appendix"``.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

from ..errors import UndefinedMetric
from ..gloss import GlossSequence
from ..manifest import SynonymTable, VideoManifest

RecallDefinition = Literal["example", "appendix"]


@dataclass(frozen=True)
class RetrievalReport:
    hit_rate: float
    recall_at_1: float
    n_glosses: int
    n_hits: int
    n_synonym_recoverable: int

    def to_dict(self) -> dict:
        return {
            "hit_rate": self.hit_rate,
            "recall_at_1": self.recall_at_1,
            "n_glosses": self.n_glosses,
            "n_hits": self.n_hits,
            "n_synonym_recoverable": self.n_synonym_recoverable,
        }


def _counts(sequences: Iterable[GlossSequence]) -> Counter:
    counts: Counter = Counter()
    for seq in sequences:
        counts.update(seq.tokens)
    return counts


def retrieval_report(sequences: Sequence[GlossSequence],
                     manifest: VideoManifest,
                     syn: SynonymTable | None = None,
                     definition: RecallDefinition = "example") -> RetrievalReport:
    syn = syn or SynonymTable()
    counts = _counts(sequences)
    total = sum(counts.values())
    if total == 0:
        raise UndefinedMetric("corpus contains no glosses")

    hits = sum(n for token, n in counts.items() if token in manifest.entries)
    recoverable = sum(
        n for token, n in counts.items()
        if token not in manifest.entries
        and any(s in manifest.entries for s in syn.synonyms(token))
    )

    denom = total if definition == "appendix" else hits + recoverable
    if denom == 0:
        raise UndefinedMetric("recall@1 denominator is zero")
    return RetrievalReport(
        hit_rate=hits / total,
        recall_at_1=hits / denom,
        n_glosses=total,
        n_hits=hits,
        n_synonym_recoverable=recoverable,
    )


def hit_rate(sequences: Sequence[GlossSequence], manifest: VideoManifest) -> float:
    counts = _counts(sequences)
    total = sum(counts.values())
    if total == 0:
        raise UndefinedMetric("corpus contains no glosses")
    return sum(n for token, n in counts.items() if token in manifest.entries) / total


def recall_at_1(sequences: Sequence[GlossSequence],
                manifest: VideoManifest,
                syn: SynonymTable | None = None,
                definition: RecallDefinition = "example") -> float:
    return retrieval_report(sequences, manifest, syn, definition).recall_at_1


SubsetPolicy = Literal["frequency", "random"]


@dataclass(frozen=True)
class CurvePoint:
    video_count: int
    hit_rate: float
    recall_at_1: float | None


@dataclass(frozen=True)
class CoverageCurve:
    policy: SubsetPolicy
    seeds: tuple[int, ...]
    points: tuple[CurvePoint, ...]  # averaged over seeds
    per_seed: dict[int, tuple[CurvePoint, ...]]

    def to_rows(self) -> list[dict]:
        rows = []
        for seed, pts in sorted(self.per_seed.items()):
            for p in pts:
                rows.append({
                    "policy": self.policy, "seed": seed, "video_count": p.video_count,
                    "hit_rate": p.hit_rate,
                    "recall_at_1": "" if p.recall_at_1 is None else p.recall_at_1,
                })
        return rows


def default_sizes(n: int, points: int = 20) -> list[int]:
    sizes = sorted({max(1, round(n * k / points)) for k in range(1, points + 1)} | {n})
    return [s for s in sizes if s <= n]


def _ordering(manifest: VideoManifest, counts: Counter, policy: SubsetPolicy, seed: int) -> list[str]:
    keys = sorted(manifest.entries)
    if policy == "frequency":
        keys.sort(key=lambda token: (-counts.get(token, 0), token))
    else:
        random.Random(seed).shuffle(keys)
    return keys


def coverage_curve(sequences: Sequence[GlossSequence],
                   full_manifest: VideoManifest,
                   policy: SubsetPolicy = "frequency",
                   seeds: Sequence[int] = (0,),
                   sizes: Sequence[int] | None = None,
                   syn: SynonymTable | None = None,
                   definition: RecallDefinition = "example") -> CoverageCurve:
    """Metrics on nested manifest subsets of growing size.

    Per seed the subsets are prefixes of one ordering, so per-seed hit_rate
    is nondecreasing by construction. ``frequency`` orders by corpus
    frequency (most frequent first, seed ignored beyond seeds[0]); ``random``
    shuffles per seed and the reported points average the seeds.
    """
    if not full_manifest.entries:
        raise UndefinedMetric("manifest is empty")
    counts = _counts(sequences)
    sizes = list(sizes) if sizes is not None else default_sizes(len(full_manifest.entries))
    used_seeds = tuple(seeds) if policy == "random" else (tuple(seeds)[:1] or (0,))

    per_seed: dict[int, tuple[CurvePoint, ...]] = {}
    for seed in used_seeds:
        order = _ordering(full_manifest, counts, policy, seed)
        pts = []
        for size in sizes:
            sub = full_manifest.subset(order[:size])
            try:
                report = retrieval_report(sequences, sub, syn, definition)
                pts.append(CurvePoint(size, report.hit_rate, report.recall_at_1))
            except UndefinedMetric:
                total = sum(counts.values())
                hits = sum(n for t, n in counts.items() if t in sub.entries)
                pts.append(CurvePoint(size, hits / total if total else 0.0, None))
        per_seed[seed] = tuple(pts)

    averaged = []
    for i, size in enumerate(sizes):
        hr = sum(per_seed[s][i].hit_rate for s in used_seeds) / len(used_seeds)
        recalls = [per_seed[s][i].recall_at_1 for s in used_seeds
                   if per_seed[s][i].recall_at_1 is not None]
        averaged.append(CurvePoint(size, hr, sum(recalls) / len(recalls) if recalls else None))
    return CoverageCurve(policy=policy, seeds=used_seeds,
                         points=tuple(averaged), per_seed=per_seed)
