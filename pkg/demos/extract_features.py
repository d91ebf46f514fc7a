"""
Feature extraction on the bundled corpus
========================================

Sixty labelled articles, ten per quality class. Three are hand written,
the rest come from the synthetic generator.
"""

from collections import Counter
from pathlib import Path

import numpy as np

import medqual
from medqual import FEATURE_NAMES, build_title_index, extract_all, load_dictionary, read_corpus

corpus = Path(medqual.__file__).parent / "data" / "mini_corpus.jsonl"
articles, skipped = read_corpus(corpus)
print(len(articles), "articles,", skipped, "skipped")
print(Counter(a.label for a in articles))

vectors = extract_all(articles, build_title_index(articles), load_dictionary())

alz = next(v for v in vectors if v.title == "alzheimer_mini")
for name in FEATURE_NAMES:
    print(f"  {name:24} {getattr(alz, name)}")

# class means of a few features: bigger, richer articles sit higher up the scale
print()
print(f"{'class':6} {'length':>8} {'headings':>9} {'mentions':>9}")
for cls in medqual.QUALITY_CLASSES:
    rows = [v for v in vectors if v.label == cls]
    print(f"{cls:6} {np.mean([v.article_length for v in rows]):8.2f} "
          f"{np.mean([v.num_headings for v in rows]):9.1f} {np.mean([v.domain_informativeness for v in rows]):9.1f}")
