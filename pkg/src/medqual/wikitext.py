"""
MediaWiki markup parsing.

The parser is a best-effort scanner rather than a full MediaWiki
implementation: it recognises internal links, images, categories,
references, headings, templates (with the first outermost ``Infobox``
kept aside) and external links, and produces the prose that remains once
all of that markup is removed. It never raises on malformed input: an
opener that is never closed (``[[``, ``{{``, ``<!--``) is dropped and the
text after it is read as usual, so a broken construct cannot hide the
rest of the article. A ``<ref>`` without its closing tag counts as a
reference whose body is ordinary text.

>>> elems = parse_article("[[Fever]] is a [[symptom]].")
>>> elems.internal_links
['Fever', 'symptom']
>>> elems.plain_text
'Fever is a symptom.'
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from .corpus import RawArticle

__all__ = [
    "StructuralElements",
    "TitleIndex",
    "DuplicateTitleError",
    "parse_article",
    "parse_wikitext",
    "count_wikilinks",
    "extract_infobox_bytes",
    "build_title_index",
    "normalize_title",
]

IMAGE_NAMESPACES = ("file", "image")
CATEGORY_NAMESPACE = "category"

_NEXT = re.compile(
    r"<|\{\{|\[|''|__[A-Z]+__|(?:https?|ftp)://|\|\||^[=|!{]",
    re.MULTILINE,
)
_REF_OPEN = re.compile(r"<ref(?=[\s/>]|$)", re.IGNORECASE)
_REF_CLOSE = re.compile(r"</ref\s*>", re.IGNORECASE)
_TAG = re.compile(r"</?[A-Za-z][A-Za-z0-9]*(?:\s[^<>]*)?/?>")
_MAGIC_WORD = re.compile(r"__[A-Z]+__")
_BARE_URL = re.compile(r"(?:https?|ftp)://[^\s<>\[\]{}|\"]+")
_EXT_LINK = re.compile(r"\[((?:https?:|ftp:)?//[^\s\[\]<>\"]+)([^\[\]\n]*)\]")
_REF_PREFIX = re.compile(r"</?ref", re.IGNORECASE)
_HEADING = re.compile(r"(={1,6})(.+?)(={1,6})[ \t]*(?=\n|$)")
_DOUBLE_BRACES = re.compile(r"\{\{|\}\}")
_DOUBLE_BRACKETS = re.compile(r"\[\[|\]\]")
_HSPACE = re.compile(r"[^\S\n]+")
_BLANK_RUNS = re.compile(r"\n{3,}")


@dataclass
class StructuralElements:
    internal_links: list[str] = field(default_factory=list)
    external_links: list[str] = field(default_factory=list)
    headings: list[str] = field(default_factory=list)
    references: int = 0
    images: int = 0
    infobox_raw: str | None = None
    category_strings: list[str] = field(default_factory=list)
    plain_text: str = ""

    @property
    def structure_count(self) -> int:
        """Total number of structural elements found (excluding text)."""
        return (
            len(self.internal_links)
            + len(self.external_links)
            + len(self.headings)
            + self.references
            + self.images
            + (self.infobox_raw is not None)
            + len(self.category_strings)
        )


def _match_pair(text: str, start: int, pattern: re.Pattern, opener: str) -> tuple[str, int] | None:
    """Return (inner, end) for the balanced pair opening at ``start``, or
    None when the opener is never closed."""
    depth = 0
    for m in pattern.finditer(text, start):
        if m.group() == opener:
            depth += 1
        else:
            depth -= 1
            if depth == 0:
                return text[start + 2 : m.start()], m.end()
    return None


def _skip_line(text: str, i: int) -> int:
    end = text.find("\n", i)
    return len(text) if end < 0 else end


class _Scanner:
    def __init__(self):
        self.elems = StructuralElements()
        self._template_depth = 0

    def scan(self, text: str) -> str:
        """Collect structure from ``text`` and return its prose."""
        out: list[str] = []
        e = self.elems
        i = 0
        n = len(text)
        while i < n:
            m = _NEXT.search(text, i)
            if m is None:
                out.append(text[i:])
                break
            out.append(text[i : m.start()])
            i = m.start()
            tok = m.group()

            if tok == "<":
                i = self._angle(text, i, out)
            elif tok == "{{":
                pair = _match_pair(text, i, _DOUBLE_BRACES, "{{")
                if pair is None:
                    i += 2
                    continue
                inner, i = pair
                self._template(inner)
            elif tok == "[":
                i = self._bracket(text, i, out)
            elif tok == "''":
                while i < n and text[i] == "'":
                    i += 1
            elif tok.startswith("__"):
                i = m.end()
            elif tok == "||":
                out.append(" ")
                i += 2
            elif tok in ("http://", "https://", "ftp://"):
                url = _BARE_URL.match(text, i)
                if url is None:
                    out.append(tok)
                    i = m.end()
                    continue
                stripped = url.group().rstrip(".,;:!?)")
                e.external_links.append(stripped)
                i += len(stripped)
            else:
                i = self._line_start(text, i, out)
        return "".join(out)

    def _angle(self, text: str, i: int, out: list[str]) -> int:
        if text.startswith("<!--", i):
            end = text.find("-->", i + 4)
            return i + 4 if end < 0 else end + 3
        if _REF_OPEN.match(text, i):
            gt = text.find(">", i)
            if gt < 0:
                return i + 4
            self.elems.references += 1
            if text[gt - 1] == "/":
                return gt + 1
            close = _REF_CLOSE.search(text, gt + 1)
            if close is None:
                return gt + 1
            self.scan(text[gt + 1 : close.start()])
            return close.end()
        tag = _TAG.match(text, i)
        if tag:
            return tag.end()
        stray = _REF_PREFIX.match(text, i)
        if stray:
            return stray.end()
        out.append("<")
        return i + 1

    def _template(self, inner: str) -> None:
        name = inner.split("|", 1)[0].strip().lower()
        if (
            self._template_depth == 0
            and self.elems.infobox_raw is None
            and name.startswith("infobox")
        ):
            self.elems.infobox_raw = inner
        self._template_depth += 1
        self.scan(inner)
        self._template_depth -= 1

    def _bracket(self, text: str, i: int, out: list[str]) -> int:
        if text.startswith("[[", i):
            pair = _match_pair(text, i, _DOUBLE_BRACKETS, "[[")
            if pair is None:
                return i + 2
            inner, end = pair
            out.append(self._wikilink(inner))
            return end
        m = _EXT_LINK.match(text, i)
        if m:
            self.elems.external_links.append(m.group(1))
            out.append(self.scan(m.group(2).strip()))
            return m.end()
        out.append("[")
        return i + 1

    def _wikilink(self, inner: str) -> str:
        e = self.elems
        target, sep, rest = inner.partition("|")
        target = target.strip()
        leading_colon = target.startswith(":")
        target = target.lstrip(":").strip()
        if not target:
            return self.scan(rest) if sep else ""
        namespace = target.split(":", 1)[0].strip().lower() if ":" in target else ""
        if not leading_colon and namespace in IMAGE_NAMESPACES:
            e.images += 1
            self.scan(rest)
            return ""
        if not leading_colon and namespace == CATEGORY_NAMESPACE:
            e.category_strings.append(target.split(":", 1)[1].strip())
            return ""
        page = target.split("#", 1)[0].strip()
        if page:
            e.internal_links.append(page)
        label = rest if sep and rest.strip() else target
        return self.scan(label)

    def _table_control(self, text: str, i: int) -> int:
        """Table open/row/close line: attributes are not prose, but any
        markup on the line still counts."""
        end = _skip_line(text, i)
        self.scan(text[i + 2 : end])
        return end

    def _line_start(self, text: str, i: int, out: list[str]) -> int:
        c = text[i]
        nxt = text[i + 1] if i + 1 < len(text) else ""
        if c == "=":
            m = _HEADING.match(text, i)
            if m:
                left, title, right = m.groups()
                level = min(len(left), len(right))
                if level >= 2:
                    title = "=" * (len(left) - level) + title + "=" * (len(right) - level)
                    heading = self.scan(title).strip()
                    self.elems.headings.append(heading)
                    out.append(heading)
                    return m.end()
        elif c == "{":
            if nxt == "|":
                return self._table_control(text, i)
        elif c == "|":
            if nxt in ("}", "-"):
                return self._table_control(text, i)
            return i + (2 if nxt == "+" else 1)
        elif c == "!":
            return i + 1
        out.append(c)
        return i + 1


def _normalize_whitespace(text: str) -> str:
    lines = [_HSPACE.sub(" ", line).strip() for line in text.split("\n")]
    return _BLANK_RUNS.sub("\n\n", "\n".join(lines)).strip()


def _prose(text: str) -> str:
    return _normalize_whitespace(_Scanner().scan(text))


def parse_wikitext(wikitext: str) -> StructuralElements:
    """Parse a wikitext string into :class:`StructuralElements`.

    ``plain_text`` is re-scanned until it no longer changes, so markup that
    only appears once other markup is removed (``[<!-- -->[x]]``) never
    survives into the prose.
    """
    scanner = _Scanner()
    elems = scanner.elems
    plain = _normalize_whitespace(scanner.scan(wikitext))
    while True:
        again = _prose(plain)
        if again == plain:
            break
        plain = again
    elems.plain_text = plain
    return elems


def parse_article(raw: RawArticle) -> StructuralElements:
    return parse_wikitext(raw.wikitext)


def normalize_title(title: str) -> str:
    """Normalise a page title the way MediaWiki does for lookups.

    Underscores become spaces, whitespace runs collapse, and the first
    character is upper-cased.

    >>> normalize_title("  a_b  c ")
    'A b c'
    """
    t = " ".join(title.replace("_", " ").split())
    return t[:1].upper() + t[1:]


class DuplicateTitleError(ValueError):
    pass


class TitleIndex:
    """Immutable set of normalised corpus titles."""

    __slots__ = ("_titles",)

    def __init__(self, titles: Iterable[str] = ()):
        self._titles = frozenset(normalize_title(t) for t in titles)

    def __contains__(self, title: str) -> bool:
        return normalize_title(title) in self._titles

    def __len__(self) -> int:
        return len(self._titles)

    def __iter__(self):
        return iter(sorted(self._titles))

    def __eq__(self, other):
        return isinstance(other, TitleIndex) and self._titles == other._titles

    def __hash__(self):
        return hash(self._titles)

    def __repr__(self):
        return f"TitleIndex({len(self)} titles)"


def build_title_index(corpus: Iterable[RawArticle]) -> TitleIndex:
    """Index the corpus titles; two titles that normalise alike are an error."""
    seen: dict[str, str] = {}
    for art in corpus:
        key = normalize_title(art.title)
        if key in seen:
            raise DuplicateTitleError(
                f"duplicate normalized title {key!r} ({seen[key]!r} and {art.title!r})"
            )
        seen[key] = art.title
    return TitleIndex(seen)


def count_wikilinks(elems: StructuralElements, index: TitleIndex) -> tuple[int, int]:
    """Return ``(num_wikilinks, num_broken)``; duplicates are counted."""
    links = elems.internal_links
    broken = sum(1 for target in links if target not in index)
    return len(links), broken


def extract_infobox_bytes(elems: StructuralElements) -> int:
    if elems.infobox_raw is None:
        return 0
    return len(elems.infobox_raw.encode("utf-8"))
