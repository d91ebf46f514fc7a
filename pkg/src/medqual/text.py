"""Sentence splitting, tokenisation, lemma folding and word-class lists.

Everything here is rule based. Lemmas come from a small surface-to-lemma
lexicon with plural-folding suffix rules as the fallback, and function
words (prepositions, articles/determiners, coordinating conjunctions and
punctuation) come from closed word lists.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources as _pkg_resources
from pathlib import Path
from typing import Iterable, Mapping

__all__ = [
    "Token",
    "TokenizedText",
    "NLPResources",
    "load_resources",
    "default_resources",
    "load_word_list",
    "load_lemma_lexicon",
    "tokenize",
    "lemmatize",
    "classify_function_word",
    "is_punctuation",
    "remove_stopwords",
]

_TOKEN = re.compile(r"\d+(?:[.,]\d+)*|\w+(?:['’\-]\w+)*|[^\w\s]")
_TERMINATORS = frozenset(".!?")
ABBREVIATIONS = frozenset(
    "dr mr mrs ms prof st vs etc al fig figs approx vol jr sr inc ltd ca cf resp".split()
)
_LATIN_ABBREV = {("e", "g"), ("i", "e")}


@dataclass(frozen=True, slots=True)
class Token:
    surface: str
    lemma: str
    is_stopword: bool = False
    is_function_word: bool = False


@dataclass
class TokenizedText:
    sentences: list[list[Token]] = field(default_factory=list)

    def __iter__(self):
        return iter(self.sentences)

    def __len__(self):
        return len(self.sentences)

    def tokens(self) -> list[Token]:
        return [tok for sent in self.sentences for tok in sent]

    def surfaces(self) -> list[list[str]]:
        return [[tok.surface for tok in sent] for sent in self.sentences]


def load_word_list(path: str | Path) -> frozenset[str]:
    """One lowercase word per line; blank and ``#`` lines are ignored."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word and not word.startswith("#"):
                words.add(word.lower())
    return frozenset(words)


def load_lemma_lexicon(path: str | Path) -> dict[str, str]:
    """Read a ``surface<TAB>lemma`` file.

    The lexicon is closed under its own output: chains are followed to
    their end, and every lemma maps to itself, so lemmatising a lemma is a
    no-op.
    """
    raw: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                continue
            raw[parts[0].strip().lower()] = parts[1].strip().lower()
    return _close_lexicon(raw)


def _close_lexicon(raw: Mapping[str, str]) -> dict[str, str]:
    closed = {}
    for surface in raw:
        lemma = surface
        seen = {lemma}
        while lemma in raw and raw[lemma] not in seen:
            lemma = raw[lemma]
            seen.add(lemma)
        closed[surface] = lemma
    for lemma in set(closed.values()):
        closed.setdefault(lemma, lemma)
    return closed


@dataclass(frozen=True)
class NLPResources:
    lemmas: Mapping[str, str]
    stopwords: frozenset[str]
    function_words: frozenset[str]


def _bundled(name: str) -> Path:
    return Path(str(_pkg_resources.files("medqual") / "data" / name))


def load_resources(
    lemma_path: str | Path | None = None,
    stopword_path: str | Path | None = None,
    function_word_path: str | Path | None = None,
) -> NLPResources:
    """Load lexica from files, falling back to the bundled copies."""
    return NLPResources(
        lemmas=load_lemma_lexicon(lemma_path or _bundled("lemmas.tsv")),
        stopwords=load_word_list(stopword_path or _bundled("stopwords.txt")),
        function_words=load_word_list(function_word_path or _bundled("function_words.txt")),
    )


@lru_cache(maxsize=1)
def default_resources() -> NLPResources:
    return load_resources()


def _fallback_lemma(word: str) -> str:
    while word.endswith(("'s", "’s")) and len(word) > 2:
        word = word[:-2]
    if not word.isalpha():
        return word
    n = len(word)
    if n > 4 and word.endswith("ies"):
        return word[:-3] + "y"
    if n > 4 and word.endswith("sses"):
        return word[:-2]
    if n > 4 and word.endswith(("ches", "shes", "xes", "zes")):
        return word[:-2]
    if n > 3 and word.endswith("s") and not word.endswith(("ss", "us", "is")):
        return word[:-1]
    return word


def lemmatize(surface: str, lexicon: Mapping[str, str] | None = None) -> str:
    """Lowercase normal form of ``surface``.

    Lexicon lookup first; on a miss, possessive and plural suffixes are
    folded (``-ies`` to ``-y``, sibilant ``-es`` and plain ``-s`` dropped).

    >>> lemmatize("injuries", {})
    'injury'
    >>> lemmatize("Diseases", {})
    'disease'
    """
    if lexicon is None:
        lexicon = default_resources().lemmas
    word = surface.lower()
    if word in lexicon:
        return lexicon[word]
    folded = _fallback_lemma(word)
    return lexicon.get(folded, folded)


def is_punctuation(surface: str) -> bool:
    return bool(surface) and not any(ch.isalnum() for ch in surface)


def classify_function_word(surface: str, function_words: Iterable[str] | None = None) -> bool:
    """True for prepositions, articles/determiners, conjunctions and punctuation."""
    if function_words is None:
        function_words = default_resources().function_words
    return is_punctuation(surface) or surface.lower() in function_words


def _is_boundary(text: str, matches: list[re.Match], i: int) -> bool:
    """Does a sentence end after token ``i``?"""
    cur = matches[i]
    nxt = matches[i + 1]
    gap = text[cur.end() : nxt.start()]
    if "\n" in gap:
        return True
    if cur.group() not in _TERMINATORS or not gap or not nxt.group()[0].isupper():
        return False
    if cur.group() == "." and i > 0 and matches[i - 1].end() == cur.start():
        prev = matches[i - 1].group().lower()
        if prev in ABBREVIATIONS:
            return False
        if i > 2 and (matches[i - 3].group().lower(), prev) in _LATIN_ABBREV:
            return False
    return True


def tokenize(text: str, resources: NLPResources | None = None) -> TokenizedText:
    """Split text into sentences of tokens.

    A sentence ends at ``.``, ``!`` or ``?`` followed by whitespace and a
    capitalised token (unless the full stop closes a known abbreviation),
    and at every line break. Punctuation marks are tokens of their own.

    >>> tokenize("A. B.").surfaces()
    [['A', '.'], ['B', '.']]
    """
    res = resources or default_resources()
    matches = list(_TOKEN.finditer(text))
    sentences: list[list[Token]] = []
    current: list[Token] = []
    seen: dict[str, Token] = {}
    for i, m in enumerate(matches):
        surface = m.group()
        tok = seen.get(surface)
        if tok is None:
            tok = seen[surface] = Token(
                surface=surface,
                lemma=lemmatize(surface, res.lemmas),
                is_stopword=surface.lower() in res.stopwords,
                is_function_word=classify_function_word(surface, res.function_words),
            )
        current.append(tok)
        if i + 1 == len(matches) or _is_boundary(text, matches, i):
            sentences.append(current)
            current = []
    return TokenizedText(sentences)


def remove_stopwords(text: TokenizedText, stoplist: Iterable[str] | None = None) -> TokenizedText:
    """Drop tokens whose lowercased surface is a stopword; empty sentences vanish."""
    stop = default_resources().stopwords if stoplist is None else frozenset(stoplist)
    kept = []
    for sent in text.sentences:
        sent = [tok for tok in sent if tok.surface.lower() not in stop]
        if sent:
            kept.append(sent)
    return TokenizedText(kept)
