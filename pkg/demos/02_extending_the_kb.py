"""
Adding a new dual-meaning word
==============================

Each word lives in its own XML file. Supporting a new word means writing
one more file; nothing already resolved changes.
"""

import tempfile
from pathlib import Path

import pagesense as ps

kb = ps.load_kb(ps.bundled_kb_path())

page = ps.segment_and_tokenize(
    "The jaguar rested in the rainforest. A jaguar has a spotted coat.", "jaguar-page"
)
print("before:", ps.resolve(page, kb).to_record())

###############################################################################
# Build the entry in code and write it out in the on-disk format.

jaguar = ps.DualWordEntry(
    dmw_id="6",
    headword="jaguar",
    senses=(
        ps.SenseGroup(("rainforest", "spotted coat", "big cat", "prey"), "Animal"),
        ps.SenseGroup(("sedan", "Coventry", "dealership", "horsepower"), "Car maker"),
    ),
)
xml = ps.serialize_entry(jaguar)
print(xml)

###############################################################################
# Reading it back gives the identical entry, and the structural checks run
# on every parse. A file missing its ``dmw_id`` is rejected by name.

assert ps.parse_entry(xml) == jaguar
try:
    ps.parse_entry(xml.replace(' dmw_id="6"', ""))
except ps.ValidationError as exc:
    print("rejected:", exc.constraint)

###############################################################################
# Merging returns a new knowledge base; the old one is untouched.

extended = ps.merge_entry(kb, jaguar)
print(len(kb), "->", len(extended), "entries")
print("after:", ps.resolve(page, extended).to_record())

###############################################################################
# Pages that never mention the new word resolve exactly as before.

bank_page = ps.segment_and_tokenize("The bank approved the loan.", "bank-page")
assert ps.resolve(bank_page, kb) == ps.resolve(bank_page, extended)

###############################################################################
# The same thing through files: copy the sample base, drop the new XML in,
# and reload.

with tempfile.TemporaryDirectory() as tmp:
    kb_dir = Path(tmp) / "kb"
    kb_dir.mkdir()
    for f in ps.bundled_kb_path().glob("*.xml"):
        (kb_dir / f.name).write_bytes(f.read_bytes())
    (kb_dir / "jaguar.xml").write_text(xml, encoding="utf-8")
    print(sorted(ps.load_kb(kb_dir).entries))
