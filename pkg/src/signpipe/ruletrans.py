"""Rule-based text-to-gloss translation.

One deterministic pass per sentence: tokenize, tag parts of speech, drop the
non-signed word classes, lemmatize what survives, then uppercase. Tagging and
lemmatization run off a bundled lexicon plus suffix rules, so translation
works offline and byte-identically on every run.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .errors import EmptyTranslation, SchemaViolation
from .gloss import GlossSequence, Provenance, normalize


class Pos(str, Enum):
    NOUN = "noun"
    VERB = "verb"
    ADJECTIVE = "adjective"
    ADVERB = "adverb"
    NUMERAL = "numeral"
    PRONOUN = "pronoun"
    PREPOSITION = "preposition-or-subordinator"
    COORDINATING_CONJUNCTION = "coordinating-conjunction"
    INFINITIVAL_TO = "infinitival-to"
    DETERMINER = "determiner"
    AUXILIARY = "auxiliary"
    PUNCTUATION = "punctuation"
    OTHER = "other"


# Short codes used in the TSV data files.
_POS_CODES = {
    "noun": Pos.NOUN, "verb": Pos.VERB, "adj": Pos.ADJECTIVE, "adv": Pos.ADVERB,
    "num": Pos.NUMERAL, "pron": Pos.PRONOUN, "prep": Pos.PREPOSITION,
    "cconj": Pos.COORDINATING_CONJUNCTION, "to": Pos.INFINITIVAL_TO,
    "det": Pos.DETERMINER, "aux": Pos.AUXILIARY, "punct": Pos.PUNCTUATION,
    "other": Pos.OTHER,
}


@dataclass(frozen=True)
class TaggedToken:
    surface: str
    pos: Pos


@dataclass(frozen=True)
class PosFilterPolicy:
    """Which word classes the gloss filter removes."""

    drop_set: frozenset[Pos]

    def __post_init__(self):
        bad = self.drop_set - set(Pos)
        if bad:
            raise SchemaViolation(f"drop_set contains unknown tags: {sorted(bad)}")

    @classmethod
    def default(cls) -> "PosFilterPolicy":
        # Keeps prepositions/subordinators ("until stays"), drops glue words.
        return cls(frozenset({
            Pos.DETERMINER, Pos.COORDINATING_CONJUNCTION, Pos.INFINITIVAL_TO,
            Pos.AUXILIARY, Pos.PUNCTUATION,
        }))

    @classmethod
    def from_codes(cls, codes: Iterable[str]) -> "PosFilterPolicy":
        try:
            return cls(frozenset(_POS_CODES[c] for c in codes))
        except KeyError as err:
            raise SchemaViolation(f"unknown POS code {err.args[0]!r}") from None


@dataclass(frozen=True)
class Lexicon:
    """Word list with POS priorities and lemmas, plus OOV suffix guesses."""

    entries: Mapping[str, tuple[tuple[Pos, str], ...]]
    suffix_pos: tuple[tuple[str, Pos], ...]

    @classmethod
    def load(cls, lexicon_path: str | Path, suffix_path: str | Path) -> "Lexicon":
        entries: dict[str, list[tuple[Pos, str]]] = {}
        for lineno, line in enumerate(Path(lexicon_path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.rstrip()
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) not in (2, 3):
                raise SchemaViolation(f"lexicon {lexicon_path}:{lineno}: expected 'word<TAB>pos[<TAB>lemma]'")
            word = cols[0].lower()
            pos = _POS_CODES.get(cols[1])
            if pos is None:
                raise SchemaViolation(f"lexicon {lexicon_path}:{lineno}: unknown POS {cols[1]!r}")
            lemma = cols[2].lower() if len(cols) == 3 and cols[2] else word
            entries.setdefault(word, []).append((pos, lemma))
        suffixes: list[tuple[str, Pos]] = []
        for lineno, line in enumerate(Path(suffix_path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.rstrip()
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 2 or cols[1] not in _POS_CODES:
                raise SchemaViolation(f"suffix table {suffix_path}:{lineno}: expected 'suffix<TAB>pos'")
            suffixes.append((cols[0].lower(), _POS_CODES[cols[1]]))
        suffixes.sort(key=lambda item: -len(item[0]))
        return cls({w: tuple(ps) for w, ps in entries.items()}, tuple(suffixes))

    def pos_of(self, word: str) -> Pos | None:
        entry = self.entries.get(word.lower())
        return entry[0][0] if entry else None

    def lemma_of(self, word: str, pos: Pos) -> str | None:
        entry = self.entries.get(word.lower())
        if not entry:
            return None
        for entry_pos, lemma in entry:
            if entry_pos is pos:
                return lemma
        return entry[0][1]

    def guess_pos(self, word: str) -> Pos | None:
        lower = word.lower()
        for suffix, pos in self.suffix_pos:
            if lower.endswith(suffix) and len(lower) > len(suffix) + 2:
                return pos
        return None


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    data = resources.files("signpipe").joinpath("data")
    return Lexicon.load(str(data / "lexicon.tsv"), str(data / "suffix_rules.tsv"))


_WORD_RE = re.compile(r"[0-9]+(?:[0-9,]*[0-9])?|[A-Za-z]+(?:['’-][A-Za-z0-9]+)*|[^\sA-Za-z0-9]")
_NUMERAL_RE = re.compile(r"^[0-9]+(?:[0-9,]*[0-9])?$")
_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")


def tokenize(sentence: str) -> list[str]:
    """Whitespace split with punctuation broken out; intra-word hyphens kept."""
    return _WORD_RE.findall(sentence)


def split_sentences(text: str) -> list[str]:
    return [part for part in _SENTENCE_SPLIT_RE.split(text.strip()) if part]


def _is_punct(token: str) -> bool:
    return not any(ch.isalnum() for ch in token)


def pos_tag(tokens: Iterable[str], lexicon: Lexicon | None = None) -> list[TaggedToken]:
    """Tag each token: lexicon first, suffix guess second, noun as default."""
    lexicon = lexicon or default_lexicon()
    tagged: list[TaggedToken] = []
    for token in tokens:
        if _is_punct(token):
            pos = Pos.PUNCTUATION
        elif _NUMERAL_RE.match(token):
            pos = Pos.NUMERAL
        else:
            pos = lexicon.pos_of(token) or lexicon.guess_pos(token) or Pos.NOUN
        tagged.append(TaggedToken(token, pos))
    return tagged


def filter_pos(tagged: Iterable[TaggedToken], policy: PosFilterPolicy | None = None) -> list[TaggedToken]:
    policy = policy or PosFilterPolicy.default()
    return [t for t in tagged if t.pos not in policy.drop_set]


_DOUBLE_OK = "bdgkmnprt"


def _undouble(stem: str) -> str:
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] in _DOUBLE_OK:
        return stem[:-1]
    return stem


def _restore_e(stem: str) -> str:
    # bake->baking style e-drop cannot be undone in general; c/u/v endings can
    return stem + "e" if stem.endswith(("c", "u", "v")) else stem


def _strip_plural(word: str) -> str:
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith(("ches", "shes", "sses", "xes", "zes")):
        return word[:-2]
    if word.endswith("oes") and len(word) > 4:
        return word[:-2]
    if word.endswith("s") and not word.endswith(("ss", "us", "is")) and len(word) > 3:
        return word[:-1]
    return word


def _strip_verb_suffix(word: str) -> str:
    if word.endswith("ied") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("ed") and len(word) > 3:
        stem = word[:-2]
        undoubled = _undouble(stem)
        return undoubled if undoubled != stem else _restore_e(stem)
    if word.endswith("ing") and len(word) > 4:
        stem = word[:-3]
        undoubled = _undouble(stem)
        return undoubled if undoubled != stem else _restore_e(stem)
    return _strip_plural(word)


def lemmatize(token: str, pos: Pos, lexicon: Lexicon | None = None) -> str:
    """Reduce a surface form to its lemma (lowercase)."""
    lexicon = lexicon or default_lexicon()
    word = re.sub(r"['’](s|re|ve|ll|d|m)?$", "", token.lower())
    known = lexicon.lemma_of(word, pos)
    if known is not None:
        return known
    if pos is Pos.NUMERAL or _NUMERAL_RE.match(word):
        return word
    if pos is Pos.VERB:
        return _strip_verb_suffix(word)
    if pos is Pos.NOUN:
        return _strip_plural(word)
    return word


def rule_translate(step_text: str,
                   policy: PosFilterPolicy | None = None,
                   lexicon: Lexicon | None = None,
                   *,
                   step_index: int = 0,
                   faithful_case_order: bool = False) -> GlossSequence:
    """Translate one instruction step into a gloss sequence.

    Sentences within the step are processed independently and concatenated in
    order. ``faithful_case_order`` uppercases the sentence before tagging,
    which reproduces the literal uppercase-first pipeline at the cost of
    tagger accuracy; by default the original case reaches the tagger and the
    output is uppercased at the end, which leaves the result unchanged.
    """
    if not step_text or not step_text.strip():
        raise EmptyTranslation("step text is empty")
    lexicon = lexicon or default_lexicon()
    policy = policy or PosFilterPolicy.default()
    pieces: list[str] = []
    for sentence in split_sentences(step_text):
        if faithful_case_order:
            sentence = sentence.upper()
        tokens = tokenize(sentence)
        kept = filter_pos(pos_tag(tokens, lexicon), policy)
        lemmas = [lemmatize(t.surface, t.pos, lexicon) for t in kept]
        piece = " ".join(lemmas).strip()
        if piece:
            pieces.append(piece)
    glosses = normalize(" ".join(pieces).upper())
    if not glosses:
        raise EmptyTranslation(f"all tokens of step {step_index} were filtered: {step_text!r}")
    return GlossSequence(step_index=step_index, glosses=tuple(glosses), provenance=Provenance.RULE)


class RuleTranslator:
    """Per-task adapter used by the compiler."""

    name = "rule"

    def __init__(self, policy: PosFilterPolicy | None = None,
                 lexicon: Lexicon | None = None,
                 faithful_case_order: bool = False):
        self.policy = policy or PosFilterPolicy.default()
        self.lexicon = lexicon or default_lexicon()
        self.faithful_case_order = faithful_case_order

    def translate_task(self, task) -> list:
        from .gloss import TranslationFailure

        out = []
        for step in task.steps:
            try:
                out.append(rule_translate(step.text, self.policy, self.lexicon,
                                          step_index=step.index,
                                          faithful_case_order=self.faithful_case_order))
            except EmptyTranslation as err:
                out.append(TranslationFailure(step.index, str(err)))
        return out
