import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from medqual.dictionary import (
    MAX_NGRAM,
    Dictionary,
    DictionaryError,
    MatchKind,
    SemanticGroup,
    build_approx_key,
    build_exact_key,
    count_mentions,
    load_dictionary,
    match_entities,
)
from medqual.text import lemmatize, tokenize


def spans(mentions):
    return [(m.sentence_index, m.token_start, m.token_end, m.match_kind) for m in mentions]


def test_load_examples(tmp_path):
    path = tmp_path / "d.tsv"
    path.write_text(
        "# header\n"
        "aneurysm of the vein of galen\tDisorder\n"
        "fever\tSignOrSymptom\n"
        "of the\tDisorder\n"
        "no tab here\n"
        "cough\tNotAGroup\n"
        "\n",
        encoding="utf-8",
    )
    d = load_dictionary(path)
    assert len(d) == 2
    assert d.entries[0].approx_key == ("aneurysm", "vein", "galen")
    assert d.entries[0].semantic_group is SemanticGroup.DISORDER
    assert d.entries[1].exact_key == d.entries[1].approx_key == ("fever",)
    assert d.skipped_empty == 1
    assert d.skipped_malformed == 2
    assert d.max_ngram == MAX_NGRAM == 10


def test_unreadable_dictionary(tmp_path):
    with pytest.raises(DictionaryError):
        load_dictionary(tmp_path / "missing.tsv")


def test_key_builders():
    assert build_approx_key("aneurysm of the vein of galen") == ("aneurysm", "vein", "galen")
    assert build_approx_key("Fever") == ("fever",)
    assert build_approx_key("history of head injuries") == ("history", "head", "injury")
    assert build_exact_key("Head Injuries") == ("head", "injuries")


def test_every_entry_reachable(dictionary):
    for i, e in enumerate(dictionary.entries):
        assert i in dictionary.exact_index[e.exact_key]
        assert i in dictionary.approx_index[e.approx_key]
        lemmas_of_exact = [lemmatize(w) for w in e.exact_key]
        it = iter(lemmas_of_exact)
        assert all(any(w == x for x in it) for w in e.approx_key)


def test_aneurysm_span():
    d = Dictionary.from_entries([("aneurysm of the vein of galen", "Disorder")])
    mentions = match_entities(tokenize("the aneurysm and vein of galen"), d)
    assert spans(mentions) == [(0, 1, 6, MatchKind.APPROXIMATE)]


def test_injury_matches_injuries():
    d = Dictionary.from_entries([("injury", "SignOrSymptom")])
    mentions = match_entities(tokenize("head injuries"), d)
    assert spans(mentions) == [(0, 1, 2, MatchKind.APPROXIMATE)]


def test_empty_text():
    assert match_entities(tokenize(""), Dictionary.from_entries([("fever", "SignOrSymptom")])) == []
    assert count_mentions([]) == 0


def test_longest_match_wins():
    d = Dictionary.from_entries([("alpha", "Disorder"), ("alpha beta", "Disorder")])
    mentions = match_entities(tokenize("alpha beta"), d)
    assert spans(mentions) == [(0, 0, 2, MatchKind.EXACT)]
    assert mentions[0].entry_id == 1


def test_exact_precedence_and_lowest_id():
    d = Dictionary.from_entries([("fevers", "SignOrSymptom"), ("fever", "SignOrSymptom"), ("Fever", "Disorder")])
    m = match_entities(tokenize("fever"), d)
    assert spans(m) == [(0, 0, 1, MatchKind.EXACT)]
    assert m[0].entry_id == 1


def test_window_is_capped_at_ten():
    words = "a1 b2 c3 d4 e5 f6 g7 h8 i9 j10 k11".split()
    d = Dictionary.from_entries([(" ".join(words), "Disorder"), (" ".join(words[:10]), "Disorder")])
    m = match_entities(tokenize(" ".join(words)), d)
    assert [(x.token_start, x.token_end, x.entry_id) for x in m] == [(0, 10, 1)]


def test_two_mention_fixture(mini_articles, dictionary):
    from medqual.wikitext import parse_article

    art = next(a for a in mini_articles if a.title == "two_mention_note")
    assert count_mentions(match_entities(tokenize(parse_article(art).plain_text), dictionary)) == 2


def test_repeating_a_sentence_doubles_the_count(dictionary):
    s = "Other risk factors include a history of head injuries, depression, or hypertension."
    once = count_mentions(match_entities(tokenize(s), dictionary))
    assert once == 3
    assert count_mentions(match_entities(tokenize(s + " " + s), dictionary)) == 2 * once


VOCAB = ["fever", "cough", "head", "injury", "vein", "heart", "failure", "of", "the", "and", "pain", ",", "acute"]
entries = st.lists(
    st.lists(st.sampled_from(VOCAB), min_size=1, max_size=12).map(" ".join), min_size=1, max_size=8
)
texts = st.lists(st.sampled_from(VOCAB + ["Fevers", "injuries", "."]), max_size=40).map(" ".join)


def _dictionary(surfaces):
    return Dictionary.from_entries([(s, "Disorder") for s in surfaces])


@given(entries, texts)
def test_mentions_are_disjoint_ordered_and_bounded(surfaces, text):
    d = _dictionary(surfaces)
    mentions = match_entities(tokenize(text), d)
    prev = (-1, 0)
    for m in mentions:
        assert 0 < m.token_end - m.token_start <= MAX_NGRAM
        assert (m.sentence_index, m.token_start) >= prev
        prev = (m.sentence_index, m.token_end)


@given(entries, texts)
def test_reported_kind_is_exact_whenever_surfaces_match(surfaces, text):
    d = _dictionary(surfaces)
    tokens = tokenize(text)
    for m in match_entities(tokens, d):
        window = tuple(t.surface.lower() for t in tokens.sentences[m.sentence_index][m.token_start : m.token_end])
        assert (m.match_kind is MatchKind.EXACT) == (window in d.exact_index)


@given(entries, texts)
def test_no_longer_window_was_missed(surfaces, text):
    d = _dictionary(surfaces)
    tokens = tokenize(text)
    for m in match_entities(tokens, d):
        sent = tokens.sentences[m.sentence_index]
        for end in range(m.token_end + 1, min(len(sent), m.token_start + MAX_NGRAM) + 1):
            window = sent[m.token_start : end]
            assert tuple(t.surface.lower() for t in window) not in d.exact_index
            if not window[0].is_function_word and not window[-1].is_function_word:
                key = tuple(t.lemma for t in window if not t.is_function_word)
                assert key not in d.approx_index


CONTENT = ["fever", "vein", "injury", "pain", "heart", "failure"]
PLURAL = {"fever": "fevers", "vein": "veins", "injury": "injuries", "pain": "pains", "heart": "hearts", "failure": "failures"}


@given(
    st.lists(st.sampled_from(CONTENT + ["of", "the"]), min_size=1, max_size=6).filter(
        lambda ws: ws[0] in CONTENT and ws[-1] in CONTENT
    ),
    st.data(),
)
def test_inflected_content_words_still_match(words, data):
    d = _dictionary([" ".join(words)])
    flips = [data.draw(st.booleans()) if w in PLURAL else False for w in words]
    assume(any(flips))
    inflected = [PLURAL[w] if f else w for w, f in zip(words, flips)]
    mentions = match_entities(tokenize(" ".join(inflected)), d)
    assert spans(mentions) == [(0, 0, len(words), MatchKind.APPROXIMATE)]
