"""Medical terminology dictionary and n-gram entity matching.

Each entry carries two keys: the exact key (lowercased tokens of the
definition) and the approximate key (lemmas with function words and
punctuation removed). Text is scanned left to right; at each position
windows of 10 down to 1 tokens are tried, and the first window that hits
either index becomes a mention.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .text import NLPResources, TokenizedText, _bundled, default_resources, tokenize

logger = logging.getLogger(__name__)

MAX_NGRAM = 10


class SemanticGroup(str, enum.Enum):
    TREATMENT = "Treatment"
    SIGN_OR_SYMPTOM = "SignOrSymptom"
    BODY_PART = "BodyPart"
    DISORDER = "Disorder"
    DRUG = "Drug"
    ACTIVE_INGREDIENT = "ActiveIngredient"


class MatchKind(str, enum.Enum):
    EXACT = "Exact"
    APPROXIMATE = "Approximate"


class DictionaryError(ValueError):
    pass


@dataclass(frozen=True)
class DictionaryEntry:
    surface: str
    semantic_group: SemanticGroup
    exact_key: tuple[str, ...]
    approx_key: tuple[str, ...]


@dataclass(frozen=True)
class EntityMention:
    entry_id: int
    sentence_index: int
    token_start: int
    token_end: int
    match_kind: MatchKind

    def __len__(self):
        return self.token_end - self.token_start


def build_exact_key(surface: str, resources: NLPResources | None = None) -> tuple[str, ...]:
    text = tokenize(surface, resources)
    return tuple(tok.surface.lower() for tok in text.tokens())


def build_approx_key(surface: str, resources: NLPResources | None = None) -> tuple[str, ...]:
    """Lemmatised, lowercased content words of ``surface`` in order.

    >>> build_approx_key("aneurysm of the vein of galen")
    ('aneurysm', 'vein', 'galen')
    """
    text = tokenize(surface, resources)
    return tuple(tok.lemma for tok in text.tokens() if not tok.is_function_word)


@dataclass
class Dictionary:
    entries: list[DictionaryEntry] = field(default_factory=list)
    exact_index: dict[tuple[str, ...], list[int]] = field(default_factory=dict)
    approx_index: dict[tuple[str, ...], list[int]] = field(default_factory=dict)
    max_ngram: int = MAX_NGRAM
    skipped_malformed: int = 0
    skipped_empty: int = 0

    def __len__(self):
        return len(self.entries)

    def add(self, surface: str, group: SemanticGroup | str, resources: NLPResources | None = None) -> int | None:
        """Add one definition; returns its id, or None if it has no content words."""
        group = SemanticGroup(group)
        approx = build_approx_key(surface, resources)
        if not approx:
            self.skipped_empty += 1
            return None
        entry = DictionaryEntry(surface, group, build_exact_key(surface, resources), approx)
        entry_id = len(self.entries)
        self.entries.append(entry)
        self.exact_index.setdefault(entry.exact_key, []).append(entry_id)
        self.approx_index.setdefault(entry.approx_key, []).append(entry_id)
        return entry_id

    @classmethod
    def from_entries(
        cls, pairs: Iterable[tuple[str, SemanticGroup | str]], resources: NLPResources | None = None
    ) -> "Dictionary":
        d = cls()
        for surface, group in pairs:
            d.add(surface, group, resources)
        return d


def load_dictionary(path: str | Path | None = None, resources: NLPResources | None = None) -> Dictionary:
    """Load a ``surface<TAB>semantic_group`` file.

    Lines with the wrong number of fields or an unknown group are skipped,
    as are definitions made only of function words; both are counted on
    the returned dictionary. ``path=None`` loads the bundled synthetic
    dictionary.
    """
    path = path or _bundled("dictionary.tsv")
    resources = resources or default_resources()
    d = Dictionary()
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise DictionaryError(f"cannot read dictionary {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].strip():
                d.skipped_malformed += 1
                logger.warning("%s:%d: malformed dictionary line", path, lineno)
                continue
            try:
                group = SemanticGroup(parts[1].strip())
            except ValueError:
                d.skipped_malformed += 1
                logger.warning("%s:%d: unknown semantic group %r", path, lineno, parts[1])
                continue
            if d.add(parts[0].strip(), group, resources) is None:
                logger.warning("%s:%d: definition has no content words", path, lineno)
    return d


def match_entities(text: TokenizedText, dictionary: Dictionary) -> list[EntityMention]:
    """Greedy leftmost-longest dictionary matching.

    A window matches exactly when its lowercased surfaces equal an exact
    key. Otherwise it matches approximately when it starts and ends on a
    content token and its content lemmas equal an approximate key, so
    interleaved function words are absorbed into the span. Matching
    resumes after each mention, so mentions never overlap.
    """
    exact_lengths = {len(k) for k in dictionary.exact_index}
    approx_lengths = {len(k) for k in dictionary.approx_index}
    exact_first = {k[0] for k in dictionary.exact_index}
    approx_first = {k[0] for k in dictionary.approx_index}
    mentions = []
    for s_idx, sent in enumerate(text.sentences):
        n = len(sent)
        lowers = [tok.surface.lower() for tok in sent]
        lemmas = [tok.lemma for tok in sent]
        content = [not tok.is_function_word for tok in sent]
        i = 0
        while i < n:
            if lowers[i] not in exact_first and not (content[i] and lemmas[i] in approx_first):
                i += 1
                continue
            hit = None
            for j in range(min(n, i + dictionary.max_ngram), i, -1):
                if j - i in exact_lengths:
                    ids = dictionary.exact_index.get(tuple(lowers[i:j]))
                    if ids:
                        hit = EntityMention(ids[0], s_idx, i, j, MatchKind.EXACT)
                        break
                if content[i] and content[j - 1]:
                    key = tuple(lem for lem, c in zip(lemmas[i:j], content[i:j]) if c)
                    if len(key) in approx_lengths:
                        ids = dictionary.approx_index.get(key)
                        if ids:
                            hit = EntityMention(ids[0], s_idx, i, j, MatchKind.APPROXIMATE)
                            break
            if hit is None:
                i += 1
            else:
                mentions.append(hit)
                i = hit.token_end
    return mentions


def count_mentions(mentions: list[EntityMention]) -> int:
    return len(mentions)
