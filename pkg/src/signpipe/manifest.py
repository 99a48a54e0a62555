"""Video dictionary, synonym table and compound decomposition table.

The manifest is a flat JSON object mapping gloss token to asset record
(``{"uri": ..., "source": "primary"|"backup", "duration_ms": ...}``). Keys of
a single character double as fingerspelling letter clips. Synonyms and
compounds are TSV because they are curated by hand.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

from .errors import MalformedDocument, SchemaViolation
from .gloss import GLOSS_RE


class VideoSource(str, Enum):
    PRIMARY = "primary"
    BACKUP = "backup"


@dataclass(frozen=True)
class VideoAsset:
    gloss_key: str
    uri: str
    source: VideoSource = VideoSource.PRIMARY
    duration_ms: int | None = None

    def __post_init__(self):
        if not self.uri:
            raise SchemaViolation(f"video asset for {self.gloss_key!r} has an empty uri")

    def to_dict(self) -> dict:
        out: dict = {"uri": self.uri, "source": self.source.value}
        if self.duration_ms is not None:
            out["duration_ms"] = self.duration_ms
        return out


_LETTER_KEYS = set("ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789")


@dataclass(frozen=True)
class VideoManifest:
    """Immutable catalog of available sign videos."""

    entries: Mapping[str, VideoAsset]
    letter_clips: Mapping[str, VideoAsset]
    source_priority: tuple[VideoSource, ...] = (VideoSource.PRIMARY, VideoSource.BACKUP)
    conflicts: frozenset[str] = frozenset()

    @classmethod
    def from_mapping(cls, raw: Mapping[str, dict], conflicts: Iterable[str] = ()) -> "VideoManifest":
        entries: dict[str, VideoAsset] = {}
        letters: dict[str, VideoAsset] = {}
        for key in sorted(raw):
            if not GLOSS_RE.match(key):
                raise SchemaViolation(f"manifest key {key!r} violates the gloss charset")
            record = raw[key]
            asset = VideoAsset(
                gloss_key=key,
                uri=record["uri"],
                source=VideoSource(record.get("source", "primary")),
                duration_ms=record.get("duration_ms"),
            )
            entries[key] = asset
            if len(key) == 1 and key in _LETTER_KEYS:
                letters[key] = asset
        return cls(entries=entries, letter_clips=letters, conflicts=frozenset(conflicts))

    @classmethod
    def load(cls, path: str | Path) -> "VideoManifest":
        """Load a manifest file, recording duplicate keys as conflicts."""
        text = Path(path).read_text(encoding="utf-8")
        conflicts: list[str] = []

        def dedupe(pairs):
            seen: dict = {}
            for key, value in pairs:
                if key in seen:
                    conflicts.append(key)
                seen[key] = value
            return seen

        try:
            raw = json.loads(text, object_pairs_hook=dedupe)
        except json.JSONDecodeError as err:
            raise MalformedDocument(f"manifest {path}: {err}") from err
        if not isinstance(raw, dict) or any(not isinstance(v, dict) for v in raw.values()):
            raise SchemaViolation(f"manifest {path} must be an object of gloss -> asset records")
        return cls.from_mapping(raw, conflicts)

    def subset(self, keys: Iterable[str]) -> "VideoManifest":
        """Restricted manifest used by the dataset-growth experiment."""
        keep = set(keys)
        entries = {k: v for k, v in self.entries.items() if k in keep}
        letters = {k: v for k, v in self.letter_clips.items() if k in keep}
        return VideoManifest(entries=entries, letter_clips=letters,
                             source_priority=self.source_priority, conflicts=self.conflicts)

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def to_mapping(self) -> dict[str, dict]:
        return {k: v.to_dict() for k, v in sorted(self.entries.items())}


@dataclass(frozen=True)
class SynonymTable:
    """Symmetric synonym relation over gloss tokens."""

    relation: Mapping[str, frozenset[str]] = field(default_factory=dict)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "SynonymTable":
        rel: dict[str, set[str]] = {}
        for a, b in pairs:
            a, b = a.strip().upper(), b.strip().upper()
            if not a or not b or a == b:
                continue
            rel.setdefault(a, set()).add(b)
            rel.setdefault(b, set()).add(a)
        return cls({k: frozenset(v) for k, v in rel.items()})

    @classmethod
    def load(cls, path: str | Path) -> "SynonymTable":
        pairs = []
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise SchemaViolation(f"synonym table {path}:{lineno}: expected 2 columns")
            pairs.append((cols[0], cols[1]))
        return cls.from_pairs(pairs)

    def synonyms(self, token: str) -> frozenset[str]:
        return self.relation.get(token, frozenset())


@dataclass(frozen=True)
class CompoundTable:
    """Curated decompositions of one gloss into an ordered part sequence."""

    parts: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    @classmethod
    def load(cls, path: str | Path) -> "CompoundTable":
        table: dict[str, tuple[str, ...]] = {}
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 2 or not cols[1].strip():
                raise SchemaViolation(f"compound table {path}:{lineno}: expected 'TOKEN<TAB>PART PART ...'")
            table[cols[0].strip().upper()] = tuple(cols[1].upper().split())
        return cls(table)

    def decompose(self, token: str) -> tuple[str, ...] | None:
        return self.parts.get(token)
