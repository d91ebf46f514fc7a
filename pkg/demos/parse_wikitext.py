"""
Parsing wikitext
================

Pull the structural counts out of a small article and look at the plain
text that the later stages see.
"""

from medqual import parse_wikitext
from medqual.wikitext import TitleIndex, count_wikilinks

text = """{{Infobox medical condition
| name = Influenza
| field = [[Infectious disease]]
}}
'''Influenza''' is an [[infection]] caused by a [[virus]].<ref>WHO. Fact sheet. 2018.</ref>

== Signs and symptoms ==
Fever and cough are common.<ref name="cdc">CDC. Flu. 2019.</ref> See [https://www.who.int WHO].
[[File:Virus.png|thumb|A virus]]

[[Category:Viral diseases]]
"""

elems = parse_wikitext(text)
print("links     ", elems.internal_links)
print("headings  ", elems.headings)
print("references", elems.references, " images", elems.images)
print("categories", elems.category_strings)
print("infobox   ", repr(elems.infobox_raw))
print()
print(elems.plain_text)

# Brokenness is relative to the corpus: only titles we hold count as valid.
corpus_titles = TitleIndex(["Infection", "Fever"])
total, broken = count_wikilinks(elems, corpus_titles)
print(f"\n{total} links, {broken} broken against {len(corpus_titles)} known titles")

# Unclosed markup does not swallow the rest of the page.
print(parse_wikitext("{{cite web [[Cough]] is still a link").internal_links)
