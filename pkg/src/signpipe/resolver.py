"""Gloss-to-video resolution and playlist stitching.

Each gloss walks a fallback ladder: direct hit in the primary source, backup
source, curated compound decomposition, letter-by-letter fingerspelling, and
(for meaning-carrying glosses) a synonym with a video. Whatever cannot be
served is dropped with a reason, never silently. Per-step playlists are the
flattened URI lists of everything that resolved.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .errors import UnresolvableCrucialGloss
from .gloss import Gloss, GlossKind, GlossSequence, TranslationFailure
from .manifest import CompoundTable, SynonymTable, VideoManifest, VideoSource
from .ruletrans import Lexicon, Pos, default_lexicon
from .tasks import TaskSpec


class ResolutionKind(str, Enum):
    DIRECT = "direct"
    BACKUP = "backup"
    COMPOUND = "compound"
    FINGERSPELLED = "fingerspelled"
    SYNONYM = "synonym"
    DROPPED = "dropped"


# Ladder position per kind; lower is better. Manifest growth must never move
# a gloss to a higher number (fallback monotonicity).
RESOLUTION_RANK = {
    ResolutionKind.DIRECT: 0,
    ResolutionKind.BACKUP: 1,
    ResolutionKind.COMPOUND: 2,
    ResolutionKind.FINGERSPELLED: 3,
    ResolutionKind.SYNONYM: 4,
    ResolutionKind.DROPPED: 5,
}


@dataclass(frozen=True)
class ResolvedGloss:
    gloss: Gloss
    kind: ResolutionKind
    uris: tuple[str, ...]
    parts: tuple[str, ...] | None = None
    substitute: str | None = None
    reason: str | None = None

    def __post_init__(self):
        n = len(self.uris)
        if self.kind in (ResolutionKind.DIRECT, ResolutionKind.BACKUP) and n != 1:
            raise ValueError(f"{self.kind.value} resolution must carry exactly 1 uri, got {n}")
        if self.kind in (ResolutionKind.COMPOUND, ResolutionKind.FINGERSPELLED):
            if self.parts is None or n != len(self.parts):
                raise ValueError(f"{self.kind.value} resolution must carry one uri per part")
        if self.kind is ResolutionKind.SYNONYM and (n != 1 or not self.substitute):
            raise ValueError("synonym resolution must carry the substitute and its uri")
        if self.kind is ResolutionKind.DROPPED and n != 0:
            raise ValueError("dropped gloss must carry no uris")

    def to_dict(self) -> dict:
        return {
            "token": self.gloss.token,
            "gloss_kind": self.gloss.kind.value,
            "kind": self.kind.value,
            "uris": list(self.uris),
            "parts": list(self.parts) if self.parts is not None else None,
            "substitute": self.substitute,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class ResolvedStep:
    step_index: int
    items: tuple[ResolvedGloss, ...]


@dataclass(frozen=True)
class Playlist:
    step_index: int
    segments: tuple[str, ...]
    boundaries: tuple[tuple[str, int, int], ...]  # (token, first segment, one past last)

    def to_dict(self) -> dict:
        return {
            "step_index": self.step_index,
            "segments": list(self.segments),
            "boundaries": [
                {"token": token, "start": start, "end": end}
                for token, start, end in self.boundaries
            ],
        }


@dataclass(frozen=True)
class CrucialPolicy:
    """Which word classes count as meaning-carrying.

    A gloss token is tagged with the same lexicon the rule translator uses;
    content classes default to crucial so they are never silently dropped.
    """

    crucial_pos: frozenset[Pos] = frozenset({Pos.NOUN, Pos.VERB, Pos.ADJECTIVE, Pos.NUMERAL})

    def is_crucial(self, gloss: Gloss, lexicon: Lexicon) -> bool:
        if gloss.kind is GlossKind.FINGERSPELLING:
            return True
        word = gloss.token.lower()
        pos = lexicon.pos_of(word) or lexicon.guess_pos(word) or Pos.NOUN
        return pos in self.crucial_pos


@dataclass(frozen=True)
class ResolverOptions:
    prefer_synonym: bool = False  # swap the fingerspelling and synonym rungs
    fingerspell: bool = True
    crucial: CrucialPolicy = CrucialPolicy()


def _lookup(token: str, manifest: VideoManifest) -> tuple[ResolutionKind, str] | None:
    asset = manifest.entries.get(token)
    if asset is None:
        return None
    kind = ResolutionKind.DIRECT if asset.source is VideoSource.PRIMARY else ResolutionKind.BACKUP
    return kind, asset.uri


def _try_compound(g: Gloss, manifest: VideoManifest, compounds: CompoundTable) -> ResolvedGloss | None:
    parts = compounds.decompose(g.token)
    if not parts:
        return None
    uris = []
    for part in parts:
        asset = manifest.entries.get(part)
        if asset is None:
            return None
        uris.append(asset.uri)
    return ResolvedGloss(g, ResolutionKind.COMPOUND, tuple(uris), parts=parts)


def _try_fingerspell(g: Gloss, manifest: VideoManifest) -> ResolvedGloss | None:
    letters = g.letters
    uris = []
    for letter in letters:
        clip = manifest.letter_clips.get(letter)
        if clip is None:
            return None
        uris.append(clip.uri)
    return ResolvedGloss(g, ResolutionKind.FINGERSPELLED, tuple(uris), parts=letters)


def _try_synonym(g: Gloss, manifest: VideoManifest, syn: SynonymTable,
                 freq: Mapping[str, int] | None) -> ResolvedGloss | None:
    candidates = [s for s in syn.synonyms(g.token) if s in manifest.entries]
    if not candidates:
        return None
    freq = freq or {}
    candidates.sort(key=lambda tok: (-freq.get(tok, 0), tok))
    chosen = candidates[0]
    return ResolvedGloss(g, ResolutionKind.SYNONYM, (manifest.entries[chosen].uri,),
                         substitute=chosen)


def resolve_gloss(g: Gloss,
                  manifest: VideoManifest,
                  syn: SynonymTable | None = None,
                  crucial: bool = False,
                  decomposition: CompoundTable | None = None,
                  *,
                  options: ResolverOptions | None = None,
                  freq: Mapping[str, int] | None = None) -> ResolvedGloss:
    """Walk the fallback ladder for one gloss; first applicable rung wins."""
    syn = syn or SynonymTable()
    decomposition = decomposition or CompoundTable()
    options = options or ResolverOptions()

    hit = _lookup(g.token, manifest)
    if hit is not None:
        kind, uri = hit
        return ResolvedGloss(g, kind, (uri,))

    compound = _try_compound(g, manifest, decomposition)
    if compound is not None:
        return compound

    rungs = [lambda: _try_fingerspell(g, manifest) if options.fingerspell else None,
             lambda: _try_synonym(g, manifest, syn, freq) if crucial else None]
    if options.prefer_synonym:
        rungs.reverse()
    for rung in rungs:
        hit = rung()
        if hit is not None:
            return hit

    if crucial:
        raise UnresolvableCrucialGloss(g.token)
    return ResolvedGloss(g, ResolutionKind.DROPPED, (), reason="no video in any source; not crucial")


def resolve_step(seq: GlossSequence,
                 manifest: VideoManifest,
                 syn: SynonymTable | None = None,
                 decomposition: CompoundTable | None = None,
                 *,
                 options: ResolverOptions | None = None,
                 lexicon: Lexicon | None = None,
                 freq: Mapping[str, int] | None = None,
                 memo: dict | None = None) -> ResolvedStep:
    """Resolve every gloss of a step independently, preserving order."""
    options = options or ResolverOptions()
    lexicon = lexicon or default_lexicon()
    items: list[ResolvedGloss] = []
    for g in seq.glosses:
        key = g.token
        if memo is not None and key in memo:
            resolved = memo[key]
            if isinstance(resolved, UnresolvableCrucialGloss):
                raise UnresolvableCrucialGloss(resolved.token, seq.step_index)
        else:
            crucial = options.crucial.is_crucial(g, lexicon)
            try:
                resolved = resolve_gloss(g, manifest, syn, crucial, decomposition,
                                         options=options, freq=freq)
            except UnresolvableCrucialGloss as err:
                if memo is not None:
                    memo[key] = err
                raise UnresolvableCrucialGloss(err.token, seq.step_index) from None
            if memo is not None:
                memo[key] = resolved
        items.append(resolved)
    return ResolvedStep(step_index=seq.step_index, items=tuple(items))


def stitch(resolved: ResolvedStep) -> Playlist:
    """Flatten resolved URIs in gloss order; boundaries map segments to glosses."""
    segments: list[str] = []
    boundaries: list[tuple[str, int, int]] = []
    for item in resolved.items:
        if item.kind is ResolutionKind.DROPPED:
            continue
        start = len(segments)
        segments.extend(item.uris)
        boundaries.append((item.gloss.token, start, len(segments)))
    return Playlist(resolved.step_index, tuple(segments), tuple(boundaries))


@dataclass(frozen=True)
class CompiledStep:
    index: int
    text: str
    image: str | None
    sequence: GlossSequence | None
    resolved: ResolvedStep | None
    playlist: Playlist | None
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "text": self.text,
            "image": self.image,
            "provenance": self.sequence.provenance.value if self.sequence else None,
            "glosses": [g.token for g in self.sequence.glosses] if self.sequence else [],
            "resolutions": [r.to_dict() for r in self.resolved.items] if self.resolved else [],
            "playlist": self.playlist.to_dict() if self.playlist else None,
            "error": self.error,
        }


@dataclass(frozen=True)
class CompiledTask:
    task: TaskSpec
    translator: str
    steps: tuple[CompiledStep, ...]

    def to_dict(self) -> dict:
        return {
            "task": self.task.to_dict(),
            "translator": self.translator,
            "steps": [s.to_dict() for s in self.steps],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def corpus_frequencies(sequences: Iterable[GlossSequence]) -> Counter:
    """Token occurrence counts, used for deterministic synonym tie-breaks."""
    counts: Counter = Counter()
    for seq in sequences:
        counts.update(seq.tokens)
    return counts


def compile_task(task: TaskSpec,
                 translator,
                 manifest: VideoManifest,
                 syn: SynonymTable | None = None,
                 decomposition: CompoundTable | None = None,
                 *,
                 options: ResolverOptions | None = None,
                 lexicon: Lexicon | None = None,
                 freq: Mapping[str, int] | None = None) -> CompiledTask:
    """Translate, resolve and stitch every step of one task.

    Steps that fail keep their error message while the rest of the task
    compiles; identical inputs always produce identical output.
    """
    results = translator.translate_task(task)
    sequences = [r for r in results if isinstance(r, GlossSequence)]
    if freq is None:
        freq = corpus_frequencies(sequences)
    memo: dict = {}
    steps: list[CompiledStep] = []
    for step, result in zip(task.steps, results):
        if isinstance(result, TranslationFailure):
            steps.append(CompiledStep(step.index, step.text, step.image,
                                      None, None, None, error=result.reason))
            continue
        try:
            resolved = resolve_step(result, manifest, syn, decomposition,
                                    options=options, lexicon=lexicon, freq=freq, memo=memo)
        except UnresolvableCrucialGloss as err:
            steps.append(CompiledStep(step.index, step.text, step.image,
                                      result, None, None, error=str(err)))
            continue
        steps.append(CompiledStep(step.index, step.text, step.image,
                                  result, resolved, stitch(resolved)))
    return CompiledTask(task=task, translator=getattr(translator, "name", "unknown"),
                        steps=tuple(steps))
