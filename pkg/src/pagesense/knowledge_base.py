"""Dual-meaning-word knowledge base stored as one XML file per word.

File layout::

    <dualMeaningWord dmw_id="1">
      <dualMeaningWordName>bank</dualMeaningWordName>
      <keywords>
        <keyword>
          <names><name>State Bank of India</name> ...</names>
          <meaning>Financial Institutes</meaning>
        </keyword>
        ...
      </keywords>
    </dualMeaningWord>

Element order is significant. Unknown attributes (including ``xsi:*``) are
ignored. Validation is structural and does not use an XSD engine.
"""

from __future__ import annotations

import logging
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from .text import Document, tokenize

__all__ = [
    "KBError",
    "KBParseError",
    "ValidationError",
    "DuplicateEntryError",
    "SenseGroup",
    "DualWordEntry",
    "KnowledgeBase",
    "KeywordMatch",
    "parse_entry",
    "serialize_entry",
    "load_kb",
    "validate_kb_dir",
    "merge_entry",
    "match_names",
    "lint_entry",
    "normalize_phrase",
]

log = logging.getLogger(__name__)


class KBError(Exception):
    """Base class for knowledge-base failures."""


class KBParseError(KBError):
    """The file is not well-formed XML."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"malformed XML{where}: {message}")


class ValidationError(KBError):
    """Well-formed XML that breaks a structural constraint.

    ``constraint`` is a short machine-stable name such as ``"dmw_id required"``.
    """

    def __init__(self, constraint: str, detail: str = ""):
        self.constraint = constraint
        self.detail = detail
        super().__init__(f"{constraint}: {detail}" if detail else constraint)


class DuplicateEntryError(KBError):
    pass


def normalize_phrase(text: str) -> tuple[str, ...]:
    return tuple(tokenize(text))


@dataclass(frozen=True)
class SenseGroup:
    names: tuple[str, ...]
    meaning: str


@dataclass(frozen=True)
class DualWordEntry:
    dmw_id: str
    headword: str
    senses: tuple[SenseGroup, ...]

    @property
    def key(self) -> str:
        return " ".join(self.headword_tokens)

    @cached_property
    def headword_tokens(self) -> tuple[str, ...]:
        return normalize_phrase(self.headword)

    @property
    def meanings(self) -> tuple[str, ...]:
        return tuple(s.meaning for s in self.senses)

    @cached_property
    def name_index(self) -> dict[tuple[str, ...], tuple[str, str]]:
        """Normalized name tokens -> (first listed surface form, meaning).

        A name whose tokens equal the bare headword is left out: the
        headword belongs to every sense and never votes.
        """
        index: dict[tuple[str, ...], tuple[str, str]] = {}
        for sense in self.senses:
            for name in sense.names:
                toks = normalize_phrase(name)
                if toks and toks != self.headword_tokens:
                    index.setdefault(toks, (name, sense.meaning))
        return index


@dataclass(frozen=True)
class KeywordMatch:
    name: str
    meaning: str
    position: int
    sentence_index: int
    length: int = 1


@dataclass(frozen=True)
class KnowledgeBase:
    entries: Mapping[str, DualWordEntry] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", MappingProxyType(dict(sorted(self.entries.items()))))

    def __reduce__(self):
        return (type(self), (dict(self.entries),))

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, headword: object) -> bool:
        return isinstance(headword, str) and " ".join(normalize_phrase(headword)) in self.entries

    def __getitem__(self, headword: str) -> DualWordEntry:
        return self.entries[" ".join(normalize_phrase(headword))]

    def __iter__(self):
        return iter(self.entries.values())

    @cached_property
    def by_first_token(self) -> dict[str, tuple[DualWordEntry, ...]]:
        out: dict[str, list[DualWordEntry]] = {}
        for entry in self.entries.values():
            out.setdefault(entry.headword_tokens[0], []).append(entry)
        return {k: tuple(v) for k, v in out.items()}

    @classmethod
    def from_entries(cls, entries: Iterable[DualWordEntry]) -> "KnowledgeBase":
        kb = cls()
        for entry in entries:
            kb = merge_entry(kb, entry)
        return kb


def _text_of(elem: ET.Element | None) -> str:
    return "" if elem is None or elem.text is None else elem.text.strip()


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _children(elem: ET.Element) -> list[ET.Element]:
    return [c for c in elem if isinstance(c.tag, str)]


def _parse_sense(keyword: ET.Element, position: int) -> SenseGroup:
    kids = _children(keyword)
    tags = [_local(c.tag) for c in kids]
    if tags != ["names", "meaning"]:
        raise ValidationError(
            "keyword structure",
            f"keyword #{position} must contain <names> then <meaning>, found {tags}",
        )
    names_el, meaning_el = kids
    names = []
    for child in _children(names_el):
        if _local(child.tag) != "name":
            raise ValidationError("names structure", f"unexpected <{_local(child.tag)}> in keyword #{position}")
        name = _text_of(child)
        if not normalize_phrase(name):
            raise ValidationError("empty name", f"keyword #{position} has a name with no letters or digits")
        names.append(name)
    if not names:
        raise ValidationError("names required", f"keyword #{position} lists no names")
    meaning = _text_of(meaning_el)
    if not meaning:
        raise ValidationError("meaning required", f"keyword #{position} has an empty meaning")
    return SenseGroup(tuple(names), meaning)


def _check_entry(entry: DualWordEntry) -> None:
    if not entry.dmw_id.strip():
        raise ValidationError("dmw_id required")
    if not entry.headword_tokens:
        raise ValidationError("dualMeaningWordName required", "headword is empty")
    if len(entry.senses) < 2:
        raise ValidationError("at least 2 keyword groups required", f"found {len(entry.senses)}")
    seen_meanings: set[str] = set()
    for sense in entry.senses:
        if not sense.meaning.strip():
            raise ValidationError("meaning required")
        if not sense.names:
            raise ValidationError("names required", f"sense {sense.meaning!r} lists no names")
        if not all(normalize_phrase(n) for n in sense.names):
            raise ValidationError("empty name", f"sense {sense.meaning!r} has a name with no letters or digits")
        if sense.meaning in seen_meanings:
            raise ValidationError("distinct meanings required", f"meaning {sense.meaning!r} repeated")
        seen_meanings.add(sense.meaning)
    owner: dict[tuple[str, ...], str] = {}
    for sense in entry.senses:
        for name in sense.names:
            toks = normalize_phrase(name)
            prior = owner.setdefault(toks, sense.meaning)
            if prior != sense.meaning:
                raise ValidationError(
                    "duplicate name across senses",
                    f"{name!r} appears under both {prior!r} and {sense.meaning!r}",
                )


def parse_entry(xml_text: str | bytes) -> DualWordEntry:
    """Parse and validate one dual-meaning-word XML document.

    Raises :class:`KBParseError` for malformed XML (with line and column) and
    :class:`ValidationError` naming the violated constraint otherwise.
    """
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        line, column = exc.position
        raise KBParseError(str(exc), line, column) from None
    if _local(root.tag) != "dualMeaningWord":
        raise ValidationError("root element", f"expected <dualMeaningWord>, found <{_local(root.tag)}>")
    dmw_id = (root.get("dmw_id") or "").strip()
    if not dmw_id:
        raise ValidationError("dmw_id required")

    kids = _children(root)
    tags = [_local(c.tag) for c in kids]
    if "dualMeaningWordName" not in tags:
        raise ValidationError("dualMeaningWordName required")
    if tags != ["dualMeaningWordName", "keywords"]:
        raise ValidationError(
            "element order",
            f"expected <dualMeaningWordName> then <keywords>, found {tags}",
        )
    headword = _text_of(kids[0])
    if not normalize_phrase(headword):
        raise ValidationError("dualMeaningWordName required", "headword is empty")

    senses = []
    for i, child in enumerate(_children(kids[1]), 1):
        if _local(child.tag) != "keyword":
            raise ValidationError("keywords structure", f"unexpected <{_local(child.tag)}>")
        senses.append(_parse_sense(child, i))
    entry = DualWordEntry(dmw_id, headword, tuple(senses))
    _check_entry(entry)
    for warning in lint_entry(entry):
        log.warning("%s: %s", headword, warning)
    return entry


def lint_entry(entry: DualWordEntry) -> list[str]:
    """Non-fatal remarks about an otherwise valid entry."""
    notes = []
    if len(entry.senses) != 2:
        notes.append(f"{len(entry.senses)} senses (dual-meaning words normally have 2)")
    return notes


def serialize_entry(entry: DualWordEntry) -> str:
    root = ET.Element("dualMeaningWord", {"dmw_id": entry.dmw_id})
    ET.SubElement(root, "dualMeaningWordName").text = entry.headword
    keywords = ET.SubElement(root, "keywords")
    for sense in entry.senses:
        keyword = ET.SubElement(keywords, "keyword")
        names = ET.SubElement(keyword, "names")
        for name in sense.names:
            ET.SubElement(names, "name").text = name
        ET.SubElement(keyword, "meaning").text = sense.meaning
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def _kb_files(directory: Path) -> list[Path]:
    return sorted(directory.glob("*.xml"), key=lambda p: p.name)


def load_kb(directory_path: str | Path) -> KnowledgeBase:
    """Load every ``*.xml`` file in a directory, in file-name order.

    The first invalid file aborts the load with a :class:`KBError` whose
    message starts with the file name.
    """
    directory = Path(directory_path)
    if not directory.is_dir():
        raise FileNotFoundError(f"knowledge base directory not found: {directory}")
    kb = KnowledgeBase()
    for path in _kb_files(directory):
        try:
            entry = parse_entry(path.read_bytes())
            kb = merge_entry(kb, entry)
        except KBError as exc:
            raise type(exc)(*_with_filename(exc, path.name)) from exc
    return kb


def _with_filename(exc: KBError, filename: str) -> tuple:
    if isinstance(exc, ValidationError):
        return (exc.constraint, f"{filename}: {exc.detail}" if exc.detail else filename)
    if isinstance(exc, KBParseError):
        return (f"{filename}: {exc}", exc.line, exc.column)
    return (f"{filename}: {exc}",)


def validate_kb_dir(directory_path: str | Path) -> list[tuple[str, KBError | None]]:
    """Validate each file independently; returns ``(filename, error or None)``."""
    directory = Path(directory_path)
    if not directory.is_dir():
        raise FileNotFoundError(f"knowledge base directory not found: {directory}")
    outcomes: list[tuple[str, KBError | None]] = []
    kb = KnowledgeBase()
    for path in _kb_files(directory):
        try:
            kb = merge_entry(kb, parse_entry(path.read_bytes()))
        except KBError as exc:
            outcomes.append((path.name, exc))
        else:
            outcomes.append((path.name, None))
    return outcomes


def merge_entry(kb: KnowledgeBase, entry: DualWordEntry, replace: bool = False) -> KnowledgeBase:
    """Return a new base with ``entry`` added; ``kb`` is left untouched."""
    _check_entry(entry)
    entries = dict(kb.entries)
    existing = entries.get(entry.key)
    if existing is not None and not replace:
        raise DuplicateEntryError(f"duplicate entry for headword {entry.headword!r}")
    for other in entries.values():
        if other.dmw_id == entry.dmw_id and other.key != entry.key:
            raise DuplicateEntryError(
                f"dmw_id {entry.dmw_id!r} already used by {other.headword!r}"
            )
    entries[entry.key] = entry
    return KnowledgeBase(entries)


def headword_sentences(entry: DualWordEntry, doc: Document) -> list[int]:
    """Indices of sentences that contain the entry's headword."""
    hw = entry.headword_tokens
    n = len(hw)
    found = []
    for sentence in doc.sentences:
        start, end = sentence.token_span
        toks = [t.normalized for t in doc.tokens[start:end]]
        if any(tuple(toks[i:i + n]) == hw for i in range(len(toks) - n + 1)):
            found.append(sentence.index)
    return found


def match_names(entry: DualWordEntry, doc: Document) -> list[KeywordMatch]:
    """Find sense-name occurrences in the sentences that mention the headword.

    Names match as contiguous normalized token runs inside one sentence.
    Overlapping candidates are settled longest first, then leftmost; every
    surviving occurrence is reported, sorted by position.
    """
    index = entry.name_index
    if not index:
        return []
    by_first: dict[str, list[tuple[str, ...]]] = {}
    for toks in index:
        by_first.setdefault(toks[0], []).append(toks)

    matches: list[KeywordMatch] = []
    for s_idx in headword_sentences(entry, doc):
        start, end = doc.sentences[s_idx].token_span
        norm = [t.normalized for t in doc.tokens[start:end]]
        candidates = []
        for i, tok in enumerate(norm):
            for toks in by_first.get(tok, ()):
                if tuple(norm[i:i + len(toks)]) == toks:
                    candidates.append((i, len(toks), toks))
        candidates.sort(key=lambda c: (-c[1], c[0]))
        taken = [False] * len(norm)
        for i, length, toks in candidates:
            if any(taken[i:i + length]):
                continue
            taken[i:i + length] = [True] * length
            name, meaning = index[toks]
            matches.append(KeywordMatch(name, meaning, start + i, s_idx, length))
    matches.sort(key=lambda m: m.position)
    return matches
