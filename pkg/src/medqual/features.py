"""Per-article feature vectors: the five actionable-model features plus the
medical-domain features (entity count, infobox size, category)."""

from __future__ import annotations

import csv
import io
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence, TextIO

from .corpus import QUALITY_CLASSES, RawArticle
from .dictionary import Dictionary, count_mentions, match_entities
from .text import NLPResources, TokenizedText, default_resources, is_punctuation, lemmatize, tokenize
from .wikitext import (
    StructuralElements,
    TitleIndex,
    count_wikilinks,
    extract_infobox_bytes,
    parse_article,
)

CATEGORIES = ("A", "B", "D", "F", "O")

# Keyword rows in matching order. A trailing "*" is a prefix match on any
# word; bare words match whole words or their lemma; multi-word entries
# match as a consecutive phrase.
CATEGORY_KEYWORDS: Mapping[str, tuple[str, ...]] = {
    "A": ("anatom*", "embryolog*", "organ", "tissue"),
    "B": ("born", "death", "birth"),
    "D": ("disorder", "disease", "pathology"),
    "F": ("first aid",),
}

FEATURE_NAMES = (
    "completeness",
    "informativeness",
    "num_headings",
    "article_length",
    "refs_per_length",
    "domain_informativeness",
    "infobox_norm_size",
    "category",
)
NOMINAL_FEATURES = frozenset({"category"})

VARIANTS: Mapping[str, tuple[str, ...]] = {
    "Baseline": FEATURE_NAMES[:5],
    "MedicalDomain": FEATURE_NAMES[:6],
    "FullMedicalDomain": FEATURE_NAMES,
}

CSV_HEADER = ("title",) + FEATURE_NAMES + ("label",)

_WORD = re.compile(r"[^\W_]+")


@dataclass(frozen=True)
class FeatureVector:
    title: str
    completeness: float
    informativeness: float
    num_headings: float
    article_length: float
    refs_per_length: float
    domain_informativeness: float
    infobox_norm_size: float
    category: str
    label: str | None

    def values(self) -> tuple:
        return tuple(getattr(self, name) for name in FEATURE_NAMES)


@dataclass(frozen=True)
class ExtractionIntermediates:
    num_wikilinks: int
    num_broken_wikilinks: int
    info_noise: float
    num_images: int
    num_references: int
    raw_bytes: int
    infobox_bytes: int


def compute_info_noise(
    raw: RawArticle,
    elems: StructuralElements,
    resources: NLPResources | None = None,
    tokens: TokenizedText | None = None,
) -> float:
    """Share of the raw bytes left after markup, stopword and punctuation removal.

    Surviving tokens are joined with single spaces before measuring.
    ``tokens`` may carry an existing tokenisation of ``elems.plain_text``.
    """
    raw_bytes = raw.byte_length
    if raw_bytes == 0:
        return 0.0
    if tokens is None:
        tokens = tokenize(elems.plain_text, resources or default_resources())
    kept = [
        tok.surface
        for tok in tokens.tokens()
        if not tok.is_stopword and not is_punctuation(tok.surface)
    ]
    ratio = len(" ".join(kept).encode("utf-8")) / raw_bytes
    return min(max(ratio, 0.0), 1.0)


def article_length(raw_bytes: int) -> float:
    return math.log10(max(raw_bytes, 1))


def completeness(num_broken: float, num_wikilinks: float) -> float:
    return 0.4 * num_broken + 0.4 * num_wikilinks


def informativeness(info_noise: float, num_images: float) -> float:
    return 0.6 * info_noise + 0.3 * num_images


def compute_baseline(inter: ExtractionIntermediates, num_headings: int) -> dict[str, float]:
    """The five actionable-model features from extracted counts."""
    length = article_length(inter.raw_bytes)
    return {
        "completeness": completeness(inter.num_broken_wikilinks, inter.num_wikilinks),
        "informativeness": informativeness(inter.info_noise, inter.num_images),
        "num_headings": num_headings,
        "article_length": length,
        "refs_per_length": inter.num_references / length if length > 0 else 0.0,
    }


def compute_infobox_norm_size(infobox_bytes: int, raw_bytes: int) -> float:
    """log10 of the infobox bytes over the log10 article length (0 when either is 0)."""
    length = article_length(raw_bytes)
    if infobox_bytes <= 0 or length == 0:
        return 0.0
    return math.log10(max(infobox_bytes, 1)) / length


def _keyword_matches(keyword: str, words: Sequence[str], lemmas: Sequence[str]) -> bool:
    if keyword.endswith("*"):
        prefix = keyword[:-1]
        return any(w.startswith(prefix) for w in words)
    phrase = keyword.split()
    if len(phrase) > 1:
        k = len(phrase)
        return any(
            list(words[i : i + k]) == phrase or list(lemmas[i : i + k]) == phrase
            for i in range(len(words) - k + 1)
        )
    return keyword in words or keyword in lemmas


def assign_category(category_strings: Iterable[str], lexicon: Mapping[str, str] | None = None) -> str:
    """Map MediaWiki category names to one of A, B, D, F or O.

    >>> assign_category(["1901 births"])
    'B'
    >>> assign_category([])
    'O'
    """
    if lexicon is None:
        lexicon = default_resources().lemmas
    tokenised = []
    for cat in category_strings:
        words = _WORD.findall(cat.lower())
        tokenised.append((words, [lemmatize(w, lexicon) for w in words]))
    for letter, keywords in CATEGORY_KEYWORDS.items():
        for words, lemmas in tokenised:
            if any(_keyword_matches(kw, words, lemmas) for kw in keywords):
                return letter
    return "O"


def extract_intermediates(
    raw: RawArticle,
    elems: StructuralElements,
    index: TitleIndex,
    resources: NLPResources | None = None,
    tokens: TokenizedText | None = None,
) -> ExtractionIntermediates:
    links, broken = count_wikilinks(elems, index)
    return ExtractionIntermediates(
        num_wikilinks=links,
        num_broken_wikilinks=broken,
        info_noise=compute_info_noise(raw, elems, resources, tokens),
        num_images=elems.images,
        num_references=elems.references,
        raw_bytes=raw.byte_length,
        infobox_bytes=extract_infobox_bytes(elems),
    )


def extract_features(
    raw: RawArticle,
    index: TitleIndex,
    dictionary: Dictionary,
    resources: NLPResources | None = None,
) -> FeatureVector:
    """Compute the full feature vector of one article."""
    res = resources or default_resources()
    elems = parse_article(raw)
    tokens = tokenize(elems.plain_text, res)
    inter = extract_intermediates(raw, elems, index, res, tokens)
    base = compute_baseline(inter, len(elems.headings))
    mentions = match_entities(tokens, dictionary)
    return FeatureVector(
        title=raw.title,
        domain_informativeness=float(count_mentions(mentions)),
        infobox_norm_size=compute_infobox_norm_size(inter.infobox_bytes, inter.raw_bytes),
        category=assign_category(elems.category_strings, res.lemmas),
        label=raw.label,
        **base,
    )


def extract_all(
    articles: Sequence[RawArticle],
    index: TitleIndex,
    dictionary: Dictionary,
    resources: NLPResources | None = None,
    jobs: int = 1,
) -> list[FeatureVector]:
    """Extract every article; output order always follows input order."""
    res = resources or default_resources()
    if jobs <= 1:
        return [extract_features(a, index, dictionary, res) for a in articles]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda a: extract_features(a, index, dictionary, res), articles))


def _fmt_real(x: float) -> str:
    return f"{x:.6f}"


def _fmt_count(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else _fmt_real(x)


def feature_row(v: FeatureVector) -> list[str]:
    return [
        v.title,
        _fmt_real(v.completeness),
        _fmt_real(v.informativeness),
        _fmt_count(v.num_headings),
        _fmt_real(v.article_length),
        _fmt_real(v.refs_per_length),
        _fmt_real(v.domain_informativeness),
        _fmt_real(v.infobox_norm_size),
        v.category,
        v.label or "",
    ]


def write_feature_csv(
    vectors: Iterable[FeatureVector], out: TextIO, synthetic: Sequence[bool] | None = None
) -> None:
    """Write the feature matrix; a ``synthetic`` column is added only when given."""
    writer = csv.writer(out, lineterminator="\n")
    header = list(CSV_HEADER)
    if synthetic is not None:
        header.append("synthetic")
    writer.writerow(header)
    for i, v in enumerate(vectors):
        row = feature_row(v)
        if synthetic is not None:
            row.append("1" if synthetic[i] else "0")
        writer.writerow(row)


def features_to_csv(vectors: Iterable[FeatureVector]) -> str:
    buf = io.StringIO()
    write_feature_csv(vectors, buf)
    return buf.getvalue()


class FeatureFileError(ValueError):
    pass


def read_feature_csv(source: str | Path | TextIO) -> tuple[list[FeatureVector], list[bool]]:
    """Parse a feature CSV; returns vectors and per-row synthetic flags."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8", newline="") as fh:
            return read_feature_csv(fh)
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None or tuple(header[: len(CSV_HEADER)]) != CSV_HEADER:
        raise FeatureFileError(f"unexpected feature CSV header: {header}")
    has_flag = len(header) > len(CSV_HEADER) and header[len(CSV_HEADER)] == "synthetic"
    vectors, flags = [], []
    for lineno, row in enumerate(reader, 2):
        try:
            label = row[9] or None
            if label is not None and label not in QUALITY_CLASSES:
                raise ValueError(f"unknown label {label!r}")
            if row[8] not in CATEGORIES:
                raise ValueError(f"unknown category {row[8]!r}")
            vectors.append(
                FeatureVector(
                    row[0], *(float(x) for x in row[1:8]), category=row[8], label=label
                )
            )
            flags.append(has_flag and row[10] == "1")
        except (IndexError, ValueError) as exc:
            raise FeatureFileError(f"line {lineno}: {exc}") from exc
    return vectors, flags
