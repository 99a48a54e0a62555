"""Gloss model and post-processing of raw gloss strings.

Raw translator output (rule-based or chat-model) is free text; everything
downstream wants clean uppercase tokens. ``normalize`` is the single funnel:
punctuation is stripped, fingerspelling notation (``T-O-F-U``) survives as one
token, and anything that still breaks the gloss charset is an error rather
than silently mangled output.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Iterable

from .errors import CharsetViolation

if TYPE_CHECKING:  # pragma: no cover
    from .manifest import VideoManifest

# One gloss token: uppercase alphanumeric runs joined by single hyphens.
GLOSS_RE = re.compile(r"^[A-Z0-9]+(-[A-Z0-9]+)*$")
# Fingerspelling notation: two or more hyphen-joined single characters.
FINGERSPELL_RE = re.compile(r"^[A-Z0-9](-[A-Z0-9])+$")


class GlossKind(str, Enum):
    PLAIN = "plain"
    FINGERSPELLING = "fingerspelling"


class Provenance(str, Enum):
    RULE = "rule"
    LLM = "llm"
    MANUAL = "manual"


@dataclass(frozen=True)
class Gloss:
    """A single sign label."""

    token: str
    kind: GlossKind = GlossKind.PLAIN

    def __post_init__(self):
        if not GLOSS_RE.match(self.token):
            raise CharsetViolation(f"gloss token {self.token!r} violates charset [A-Z0-9-]")
        spelled = bool(FINGERSPELL_RE.match(self.token))
        if spelled != (self.kind is GlossKind.FINGERSPELLING):
            raise CharsetViolation(
                f"gloss token {self.token!r} inconsistent with kind {self.kind.value}"
            )

    @property
    def letters(self) -> tuple[str, ...]:
        """Single-character units, used for letter-wise video lookup."""
        if self.kind is GlossKind.FINGERSPELLING:
            return tuple(self.token.split("-"))
        return tuple(self.token)


def classify(token: str) -> Gloss:
    """Build a Gloss, inferring Plain vs Fingerspelling from its shape."""
    kind = GlossKind.FINGERSPELLING if FINGERSPELL_RE.match(token) else GlossKind.PLAIN
    return Gloss(token, kind)


@dataclass(frozen=True)
class GlossSequence:
    """The glosses of one instruction step, in signing order."""

    step_index: int
    glosses: tuple[Gloss, ...]
    provenance: Provenance

    @property
    def text(self) -> str:
        return " ".join(g.token for g in self.glosses)

    @property
    def tokens(self) -> tuple[str, ...]:
        return tuple(g.token for g in self.glosses)


@dataclass(frozen=True)
class TranslationFailure:
    """A step whose translation produced nothing usable."""

    step_index: int
    reason: str


class Issue(str, Enum):
    UNKNOWN_GLOSS = "UnknownGloss"
    DUPLICATE_CONFLICT = "DuplicateConflict"
    CHARSET_VIOLATION = "CharsetViolation"


@dataclass(frozen=True)
class ValidationFinding:
    step_index: int
    token: str
    issue: Issue

    def to_dict(self) -> dict:
        return {"step_index": self.step_index, "token": self.token, "issue": self.issue.value}


# Apostrophe clitics carry no separate sign; drop them with the apostrophe.
_CLITIC_RE = re.compile(r"['’](S|RE|VE|LL|D|M|T)?$")
# Everything that is not a letter, digit or hyphen counts as punctuation.
_PUNCT_RE = re.compile(r"[^\w-]|_", re.UNICODE)


def _clean_token(raw: str) -> str:
    token = _CLITIC_RE.sub("", raw.upper())
    token = _PUNCT_RE.sub("", token)
    token = re.sub(r"-{2,}", "-", token).strip("-")
    if token and not GLOSS_RE.match(token):
        raise CharsetViolation(f"token {raw!r} contains disallowed characters after stripping")
    return token


def normalize(raw: str) -> list[Gloss]:
    """Clean one raw gloss string into Gloss tokens.

    Uppercases, removes punctuation except hyphens, collapses whitespace and
    classifies fingerspelling tokens. Tokens that dissolve entirely (pure
    punctuation) are dropped; tokens with characters outside the gloss
    charset raise CharsetViolation.
    """
    glosses: list[Gloss] = []
    for raw_token in raw.split():
        token = _clean_token(raw_token)
        if not token:
            continue
        glosses.append(classify(token))
    return glosses


def render(glosses: Iterable[Gloss]) -> str:
    return " ".join(g.token for g in glosses)


def validate_sequence(seq: GlossSequence, manifest: "VideoManifest") -> list[ValidationFinding]:
    """Report tokens the video dictionary cannot serve.

    Fingerspelling tokens are checked letter-wise and are only unknown when a
    letter clip is missing. Report-only; fallback decisions live in the
    resolver.
    """
    findings: list[ValidationFinding] = []
    for g in seq.glosses:
        if g.token in manifest.conflicts:
            findings.append(ValidationFinding(seq.step_index, g.token, Issue.DUPLICATE_CONFLICT))
            continue
        if g.kind is GlossKind.FINGERSPELLING:
            if not all(letter in manifest.letter_clips for letter in g.letters):
                findings.append(ValidationFinding(seq.step_index, g.token, Issue.UNKNOWN_GLOSS))
        elif g.token not in manifest.entries:
            findings.append(ValidationFinding(seq.step_index, g.token, Issue.UNKNOWN_GLOSS))
    return findings
