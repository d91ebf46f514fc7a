"""Article records and the JSON Lines corpus format."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

logger = logging.getLogger(__name__)

#: WikiProject Medicine quality scale, lowest to highest. Class A is never used.
QUALITY_CLASSES = ("Stub", "Start", "C", "B", "GA", "FA")


class CorpusError(ValueError):
    """Raised for unreadable or inconsistent corpus input."""


@dataclass(frozen=True)
class RawArticle:
    title: str
    wikitext: str
    label: str | None = None

    def __post_init__(self):
        if self.label is not None and self.label not in QUALITY_CLASSES:
            raise CorpusError(f"unknown quality class {self.label!r} for {self.title!r}")

    @property
    def byte_length(self) -> int:
        return len(self.wikitext.encode("utf-8"))


def parse_corpus_lines(lines: Iterable[str], require_label: bool = True) -> tuple[list[RawArticle], int]:
    """Parse JSON Lines records into articles.

    Malformed lines (bad JSON, missing or mistyped fields, unknown label)
    are skipped. Returns the articles in input order and the skip count.
    """
    articles = []
    skipped = 0
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            title = obj["title"]
            wikitext = obj["wikitext"]
            label = obj.get("label")
            if not isinstance(title, str) or not isinstance(wikitext, str):
                raise TypeError("title and wikitext must be strings")
            if label is None and require_label:
                raise KeyError("label")
            articles.append(RawArticle(title, wikitext, label))
        except (ValueError, KeyError, TypeError, AttributeError) as exc:
            logger.warning("skipping corpus line %d: %s", lineno, exc)
            skipped += 1
    return articles, skipped


def read_corpus(path: str | Path, require_label: bool = True) -> tuple[list[RawArticle], int]:
    """Read a UTF-8 JSON Lines corpus file. See :func:`parse_corpus_lines`."""
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_corpus_lines(fh, require_label=require_label)
    except OSError as exc:
        raise CorpusError(f"cannot read corpus {path}: {exc}") from exc


def iter_corpus_records(articles: Iterable[RawArticle]) -> Iterator[str]:
    for art in articles:
        record = {"title": art.title, "wikitext": art.wikitext}
        if art.label is not None:
            record["label"] = art.label
        yield json.dumps(record, ensure_ascii=False)


def write_corpus(articles: Iterable[RawArticle], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in iter_corpus_records(articles):
            fh.write(line + "\n")
