"""
Synthetic wikitext corpora with controllable per-class structure.

Articles are assembled from neutral filler prose into which dictionary
terms, links, references, images, headings, an infobox and categories are
placed according to a per-class :class:`ClassProfile`. Three presets are
provided: a loosely ordered corpus for demos, a separable one where every
feature tracks the class, and one where only the medical-domain features
carry class signal.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .corpus import QUALITY_CLASSES, RawArticle
from .dictionary import Dictionary, load_dictionary

# None of these is a stopword or part of a bundled dictionary key.
FILLER_NOUNS = (
    "patient study report year people group result change level rate period evidence "
    "method sample region author review summary table figure record member town village "
    "school garden river morning evening market window letter museum station bridge "
    "harbour journey library picture story season weather meeting project version "
    "system model process journal chapter number section article family country city "
    "century decade practice community hospital clinic doctor nurse research"
).split()
FILLER_LEADS = ("the", "a", "this", "some", "every", "each", "another", "its")
FILLER_VERBS = ("describes", "follows", "shows", "includes", "supports", "mentions", "covers", "reaches")

ANATOMY_CATEGORIES = ("Human anatomy", "Organs (anatomy)", "Embryology of the nervous system", "Soft tissue")
DISORDER_CATEGORIES = ("Rare diseases", "Disorders of the skin", "Pathology", "Infectious diseases")
BIOGRAPHY_CATEGORIES = ("1901 births", "1950 deaths", "People born in Vienna")
FIRST_AID_CATEGORIES = ("First aid", "Emergency first aid")
OTHER_CATEGORIES = ("Medical terminology", "Health policy", "Hospitals in Italy")
CATEGORY_POOLS = {
    "A": ANATOMY_CATEGORIES,
    "B": BIOGRAPHY_CATEGORIES,
    "D": DISORDER_CATEGORIES,
    "F": FIRST_AID_CATEGORIES,
    "O": OTHER_CATEGORIES,
}

Range = tuple[int, int]


@dataclass(frozen=True)
class ClassProfile:
    """Inclusive integer ranges for each structural element of an article."""

    sentences: Range = (5, 10)
    headings: Range = (0, 2)
    links: Range = (0, 5)
    broken_links: Range = (0, 1)
    references: Range = (0, 3)
    images: Range = (0, 1)
    mentions: Range = (0, 5)
    infobox_fields: Range = (0, 0)
    categories: Mapping[str, float] = field(default_factory=lambda: {"O": 1.0})


def _draw(rng: np.random.Generator, r: Range) -> int:
    return int(rng.integers(r[0], r[1] + 1))


def _pick(rng: np.random.Generator, seq: Sequence[str]) -> str:
    return seq[int(rng.integers(len(seq)))]


def _filler_chunk(rng: np.random.Generator) -> list[str]:
    chunk = [_pick(rng, FILLER_NOUNS)]
    if rng.random() < 0.5:
        chunk.insert(0, _pick(rng, FILLER_LEADS))
    if rng.random() < 0.3:
        chunk.append(_pick(rng, FILLER_VERBS))
    return chunk


def generate_article(
    rng: np.random.Generator,
    title: str,
    label: str,
    profile: ClassProfile,
    terms: Sequence[str],
    link_targets: Sequence[str],
) -> RawArticle:
    """Assemble one article; ``terms`` are dictionary definitions to mention.

    Mentions and links each take one chunk of a sentence, so their counts
    are capped by the number of chunks drawn.
    """
    n_sent = max(1, _draw(rng, profile.sentences))
    chunk_counts = rng.integers(4, 9, size=n_sent)
    total_chunks = int(chunk_counts.sum())
    n_mentions = min(_draw(rng, profile.mentions), total_chunks)
    mention_slots = set(rng.choice(total_chunks, size=n_mentions, replace=False).tolist())

    n_links = _draw(rng, profile.links)
    n_broken = _draw(rng, profile.broken_links)
    link_words = {}
    filler_slots = [s for s in range(total_chunks) if s not in mention_slots]
    chosen = rng.permutation(filler_slots)[: n_links + n_broken].tolist()
    for j, slot in enumerate(chosen):
        if j < n_links and link_targets:
            link_words[slot] = _pick(rng, link_targets)
        else:
            link_words[slot] = f"Missing page {int(rng.integers(10**6))}"

    sentences = []
    slot = 0
    for count in chunk_counts:
        words: list[str] = []
        for _ in range(int(count)):
            if slot in mention_slots:
                words.extend(_pick(rng, terms).split())
                words.append(_pick(rng, FILLER_NOUNS))
            else:
                chunk = _filler_chunk(rng)
                if slot in link_words:
                    chunk[-1] = f"[[{link_words[slot]}|{chunk[-1]}]]"
                words.extend(chunk)
            slot += 1
        first = words[0]
        if not first.startswith("[["):
            words[0] = first[:1].upper() + first[1:]
        sentences.append(" ".join(words) + ".")

    n_refs = _draw(rng, profile.references)
    for r in rng.choice(n_sent, size=n_refs, replace=True):
        year = 1950 + int(rng.integers(70))
        sentences[r] += f"<ref>{_pick(rng, FILLER_NOUNS).title()} review. Journal of medicine. {year}.</ref>"

    n_head = _draw(rng, profile.headings)
    n_img = _draw(rng, profile.images)
    blocks: list[list[str]] = [[] for _ in range(n_head + 1)]
    cut_points = sorted(rng.choice(np.arange(1, n_sent + 1), size=n_head, replace=True).tolist())
    bounds = [0] + cut_points + [n_sent]
    for b in range(n_head + 1):
        blocks[b] = sentences[bounds[b] : bounds[b + 1]]

    parts: list[str] = []
    n_fields = _draw(rng, profile.infobox_fields)
    if n_fields > 0:
        lines = ["{{Infobox medical condition", f"| name = {title}"]
        for f in range(n_fields - 1):
            if f % 3 == 2:
                lines.append(f"| icd10 = {{{{ICD10|{chr(65 + f % 26)}|{10 + f}}}}}")
            else:
                lines.append(f"| field{f} = {_pick(rng, FILLER_NOUNS)} {_pick(rng, FILLER_NOUNS)}")
        lines.append("}}")
        parts.append("\n".join(lines))
    image_blocks = rng.integers(0, n_head + 1, size=n_img)
    for b, block in enumerate(blocks):
        if b > 0:
            parts.append(f"== {_pick(rng, FILLER_NOUNS).title()} {b} ==")
        for k in range(int(np.sum(image_blocks == b))):
            parts.append(f"[[File:{title.replace(' ', '_')}_{b}_{k}.png|thumb|{_pick(rng, FILLER_NOUNS)}]]")
        if block:
            parts.append(" ".join(block))

    letters = list(profile.categories)
    weights = np.array([profile.categories[c] for c in letters], dtype=float)
    letter = letters[int(rng.choice(len(letters), p=weights / weights.sum()))]
    category = _pick(rng, CATEGORY_POOLS[letter])
    parts.append(f"[[Category:{category}]]")
    return RawArticle(title, "\n\n".join(parts) + "\n", label)


def generate_corpus(
    profiles: Mapping[str, ClassProfile],
    per_class: int | Mapping[str, int],
    seed: int = 0,
    dictionary: Dictionary | None = None,
    title_prefix: str = "Synthetic article",
) -> list[RawArticle]:
    """Articles for every profiled class, interleaved by class.

    Valid links point at other titles of the same corpus; broken ones at
    titles that do not exist in it.
    """
    rng = np.random.default_rng(seed)
    dictionary = dictionary or load_dictionary()
    terms = [e.surface for e in dictionary.entries]
    counts = {c: per_class if isinstance(per_class, int) else per_class.get(c, 0) for c in profiles}
    plan = []
    for i in range(max(counts.values(), default=0)):
        for c in QUALITY_CLASSES:
            if c in profiles and i < counts[c]:
                plan.append((f"{title_prefix} {c} {i + 1:03d}", c))
    titles = [t for t, _ in plan]
    return [generate_article(rng, t, c, profiles[c], terms, titles) for t, c in plan]


def ordered_profiles() -> dict[str, ClassProfile]:
    """Overlapping classes whose size and richness grow with quality."""
    out = {}
    for c, cls in enumerate(QUALITY_CLASSES):
        out[cls] = ClassProfile(
            sentences=(3 + 4 * c, 8 + 7 * c),
            headings=(max(0, c - 1), 1 + 2 * c),
            links=(c, 3 + 4 * c),
            broken_links=(0, 1 + c // 2),
            references=(0, 1 + 3 * c),
            images=(0, c // 2 + (c > 3)),
            mentions=(c, 3 + 4 * c),
            infobox_fields=(0, 2 + 2 * c),
            categories={"A": 1, "B": 0.5, "D": 2, "F": 0.3, "O": 1},
        )
    return out


def separable_profiles() -> dict[str, ClassProfile]:
    """Disjoint ranges per class for every structural element."""
    letters = ("O", "A", "D", "B", "F", "D")
    out = {}
    for c, cls in enumerate(QUALITY_CLASSES):
        out[cls] = ClassProfile(
            sentences=(4 + 12 * c, 8 + 12 * c),
            headings=(3 * c, 3 * c + 1),
            links=(6 * c, 6 * c + 3),
            broken_links=(c, c),
            references=(5 * c, 5 * c + 2),
            images=(c, c),
            mentions=(6 * c, 6 * c + 3),
            infobox_fields=(2 * c, 2 * c + 1),
            categories={letters[c]: 1.0},
        )
    return out


def domain_signal_profiles() -> dict[str, ClassProfile]:
    """Structure is class-independent; entity counts separate pairs of
    classes and the category letter separates the two classes of a pair."""
    shared = ClassProfile(
        sentences=(20, 30),
        headings=(1, 6),
        links=(2, 15),
        broken_links=(0, 3),
        references=(0, 8),
        images=(0, 2),
        infobox_fields=(0, 6),
    )
    out = {}
    for c, cls in enumerate(QUALITY_CLASSES):
        group = c // 2
        out[cls] = replace(
            shared,
            mentions=(2 + 12 * group, 6 + 12 * group),
            categories={"A" if c % 2 == 0 else "D": 1.0},
        )
    return out


MINI_CORPUS_SEED = 2016


def fixture_articles() -> list[RawArticle]:
    """Hand-written articles with hand-checked feature values."""
    alzheimer = (
        "{{Infobox medical condition\n"
        "| name = Alzheimer mini\n"
        "| field = [[Neurology]]\n"
        "| ICD10 = {{ICD10|G|30}}\n"
        "}}\n"
        "'''Alzheimer mini''' is a [[dementia]] that affects the [[hippocampus]].<ref>Smith J. Memory. 2010.</ref>\n"
        "\n"
        "== Signs and symptoms ==\n"
        "Other risk factors include a history of head injuries, depression, or hypertension."
        '<ref name="b">Doe A. Risk. 2012.</ref>\n'
        "[[File:Brain.png|thumb|The brain]]\n"
        "\n"
        "== Treatment ==\n"
        'Treatment with [[donepezil]] may help.<ref name="b"/>\n'
        "\n"
        "[[Category:Neurological disorders]]\n"
    )
    two_mentions = (
        "'''Two mention note''' is a short stub.\n"
        "\n"
        "Patients reported fever and cough in the village.\n"
        "[[Category:Medical terminology]]\n"
    )
    infobox_only = (
        "{{Infobox anatomy\n"
        "| Name = Sample structure\n"
        "| Latin = structura\n"
        "| System = [[Nervous system]]\n"
        "}}\n"
    )
    return [
        RawArticle("alzheimer_mini", alzheimer, "B"),
        RawArticle("two_mention_note", two_mentions, "Stub"),
        RawArticle("infobox_only", infobox_only, "Start"),
    ]


def mini_corpus() -> list[RawArticle]:
    """The bundled 60-article corpus: 10 per class, three of them hand-written."""
    fixtures = fixture_articles()
    per_class = {c: 10 for c in QUALITY_CLASSES}
    for art in fixtures:
        per_class[art.label] -= 1
    generated = generate_corpus(ordered_profiles(), per_class, seed=MINI_CORPUS_SEED, title_prefix="Mini article")
    return fixtures + generated
