"""
Dictionary entity matching
==========================

Exact and approximate (lemma based, function words skipped) matching of
dictionary terms against tokenized prose.
"""

from medqual import Dictionary, load_dictionary, match_entities, tokenize
from medqual.dictionary import count_mentions

toy = Dictionary.from_entries([("injury", "SignOrSymptom"), ("aneurysm of the vein of galen", "Disorder")])

for sentence in ["Head injuries are frequent.", "Imaging showed the aneurysm and vein of galen."]:
    tokens = tokenize(sentence)
    for m in match_entities(tokens, toy):
        words = [t.surface for t in tokens.sentences[m.sentence_index][m.token_start:m.token_end]]
        print(f"{' '.join(words)!r:40} -> {toy.entries[m.entry_id].surface} ({m.match_kind.value})")

# The bundled dictionary is a small synthetic stand-in for the real vocabularies.
bundled = load_dictionary()
risk = "Other risk factors include a history of head injuries, depression, or hypertension."
mentions = match_entities(tokenize(risk), bundled)
print()
print(len(bundled), "bundled entries")
print("mentions in the risk sentence:", count_mentions(mentions))
for m in mentions:
    e = bundled.entries[m.entry_id]
    print("  ", e.surface, "|", e.semantic_group.value, "|", m.match_kind.value)
