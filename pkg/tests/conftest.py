import os
import re
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from medqual.corpus import read_corpus
from medqual.dictionary import load_dictionary
from medqual.text import default_resources

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA_DIR = Path(__file__).parent / "data"
PACKAGE_DATA = Path(__file__).resolve().parents[1] / "src" / "medqual" / "data"
MINI_CORPUS = PACKAGE_DATA / "mini_corpus.jsonl"
GOLDEN_CSV = DATA_DIR / "mini_corpus_features.csv"


@pytest.fixture(scope="session")
def resources():
    return default_resources()


@pytest.fixture(scope="session")
def dictionary():
    return load_dictionary()


@pytest.fixture(scope="session")
def mini_articles():
    articles, skipped = read_corpus(MINI_CORPUS)
    assert skipped == 0
    return articles


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Records one PASS/FAIL line per acceptance criterion.

    ``criterion(number, ok, detail)`` records and asserts; a test that dies
    before calling it is recorded as FAIL.
    """
    seen = []

    def record(number, ok, detail):
        seen.append(number)
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    yield record
    if not seen:
        number = int(re.search(r"criterion_(\d+)", request.node.name).group(1))
        ACCEPTANCE_LINES.append(f"criterion {number:>2}: FAIL  {request.node.name} raised before reporting")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
