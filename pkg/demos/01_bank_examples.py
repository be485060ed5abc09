"""
Resolving the two "bank" pages
==============================

Two short pages use "bank" in different senses. We load the sample
knowledge base shipped with the package and let the resolver pick one
meaning per page.
"""

import pagesense as ps

kb = ps.load_kb(ps.bundled_kb_path())
print("headwords:", ", ".join(kb.entries))

###############################################################################
# A page is just text. Sentences are split on terminal punctuation and line
# breaks, and tokens are lower-cased runs of letters and digits.

john = ps.segment_and_tokenize("John is looking for a bank to open a savings account.", "john")
alex = ps.segment_and_tokenize("Alex is looking for a bank of the river for a get together.", "alex")

for doc in (john, alex):
    result = ps.resolve(doc, kb)
    print(f"{doc.page_id:>5}: {result.meaning}  votes={result.votes.votes()}")

###############################################################################
# Only sentences that mention the headword are searched for keywords, and a
# multi-word name such as "savings account" beats the bare "account" nested
# inside it.

for m in ps.resolve(john, kb).matches:
    print(f"  matched {m.name!r} at token {m.position} -> {m.meaning}")

###############################################################################
# One sentence, both senses. "Peter found a bank which located on the bank of
# the river" carries only a river keyword, so the page goes to the river
# sense even though "bank" appears twice.

peter = ps.segment_and_tokenize("Peter found a bank which located on the bank of the river.", "peter")
print(ps.resolve(peter, kb).to_record())

###############################################################################
# When both senses collect the same number of votes, the meaning whose first
# keyword appears earliest wins.

both = ps.segment_and_tokenize(
    "John is looking for a bank to open a savings account on the other hand "
    "Alex is looking for a bank of the river for a get together.",
    "both",
)
r = ps.resolve(both, kb)
print(r.votes.votes(), "->", r.meaning)

###############################################################################
# Pages without any known dual-meaning word are flagged and skipped.

plain = ps.segment_and_tokenize("The weather was pleasant all week.", "plain")
print(ps.resolve(plain, kb).to_record())
