"""Retrieval and text-similarity metrics."""

from .retrieval import (
    CoverageCurve,
    CurvePoint,
    RetrievalReport,
    coverage_curve,
    default_sizes,
    hit_rate,
    recall_at_1,
    retrieval_report,
)
from .text import (
    TextMetricReport,
    bleu_n,
    chrf,
    compare_translations,
    edit_distance,
    rouge_l,
    wer,
)

__all__ = [
    "CoverageCurve", "CurvePoint", "RetrievalReport", "coverage_curve",
    "default_sizes", "hit_rate", "recall_at_1", "retrieval_report",
    "TextMetricReport", "bleu_n", "chrf", "compare_translations",
    "edit_distance", "rouge_l", "wer",
]
