"""Page-level meaning selection for documents containing dual-meaning words.

The procedure:

1. find every knowledge-base headword in the page;
2. no headword -> the page is not dual (flag false) and we stop;
3. one distinct headword -> that word is the target;
4. several -> the most frequent one is the target, earliest first occurrence
   breaking ties;
5. every sentence containing the target votes: each sense-name occurrence
   adds one vote to its meaning;
6. the meaning with most votes wins, the earliest-matched keyword breaking
   ties. No votes at all leaves the page unresolved.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .knowledge_base import DualWordEntry, KeywordMatch, KnowledgeBase, match_names
from .text import Document

__all__ = [
    "WordCount",
    "OccurrenceStats",
    "Tally",
    "VoteTable",
    "Status",
    "Resolution",
    "count_dual_words",
    "select_target_word",
    "build_vote_table",
    "choose_meaning",
    "resolve",
]


@dataclass(frozen=True)
class WordCount:
    count: int
    first_position: int


OccurrenceStats = Mapping[str, WordCount]


@dataclass(frozen=True)
class Tally:
    votes: int
    earliest_position: int


@dataclass(frozen=True)
class VoteTable:
    """Meaning -> Tally, plus the sense order used as a last-resort tie-break."""

    tallies: Mapping[str, Tally] = field(default_factory=dict)
    sense_order: tuple[str, ...] = ()

    def __len__(self):
        return len(self.tallies)

    def __getitem__(self, meaning: str) -> Tally:
        return self.tallies[meaning]

    def __contains__(self, meaning):
        return meaning in self.tallies

    def votes(self) -> dict[str, int]:
        return {m: t.votes for m, t in self.tallies.items()}

    @classmethod
    def from_matches(cls, matches: Sequence[KeywordMatch], sense_order: Sequence[str] = ()) -> "VoteTable":
        tallies: dict[str, Tally] = {}
        for m in matches:
            prev = tallies.get(m.meaning)
            if prev is None:
                tallies[m.meaning] = Tally(1, m.position)
            else:
                tallies[m.meaning] = Tally(prev.votes + 1, min(prev.earliest_position, m.position))
        return cls(tallies, tuple(sense_order))


class Status(str, enum.Enum):
    RESOLVED = "resolved"
    UNRESOLVED = "unresolved"
    NOT_DUAL = "not_dual"


@dataclass(frozen=True)
class Resolution:
    page_id: str
    is_dual_meaning_flag: bool
    selected_word: str | None
    meaning: str | None
    status: Status
    stats: Mapping[str, WordCount] = field(default_factory=dict)
    votes: VoteTable = field(default_factory=VoteTable)
    matches: tuple[KeywordMatch, ...] = ()

    def to_record(self) -> dict:
        return {
            "page_id": self.page_id,
            "is_dual_meaning_flag": self.is_dual_meaning_flag,
            "selected_word": self.selected_word,
            "meaning": self.meaning,
            "status": self.status.value,
            "votes": self.votes.votes(),
        }


def _headword_positions(doc: Document, kb: KnowledgeBase) -> dict[str, list[int]]:
    positions: dict[str, list[int]] = {}
    for sentence in doc.sentences:
        start, end = sentence.token_span
        norm = [t.normalized for t in doc.tokens[start:end]]
        for i, tok in enumerate(norm):
            for entry in kb.by_first_token.get(tok, ()):
                hw = entry.headword_tokens
                if tuple(norm[i:i + len(hw)]) == hw:
                    positions.setdefault(entry.key, []).append(start + i)
    return positions


def count_dual_words(doc: Document, kb: KnowledgeBase) -> dict[str, WordCount]:
    """Occurrence count and first position for each headword present in ``doc``."""
    return {
        key: WordCount(len(pos), min(pos))
        for key, pos in sorted(_headword_positions(doc, kb).items())
    }


def select_target_word(stats: OccurrenceStats) -> str:
    """Most frequent headword; earlier first occurrence wins a tie."""
    if not stats:
        raise ValueError("select_target_word needs at least one headword")
    return min(stats, key=lambda w: (-stats[w].count, stats[w].first_position, w))


def build_vote_table(doc: Document, entry: DualWordEntry) -> VoteTable:
    return VoteTable.from_matches(match_names(entry, doc), entry.meanings)


def choose_meaning(table: VoteTable) -> str | None:
    if not table.tallies:
        return None
    order = {m: i for i, m in enumerate(table.sense_order)}

    def rank(meaning):
        t = table.tallies[meaning]
        return (-t.votes, t.earliest_position, order.get(meaning, len(order)), meaning)

    return min(table.tallies, key=rank)


def _vote(doc: Document, entry: DualWordEntry, stats) -> Resolution:
    matches = match_names(entry, doc)
    table = VoteTable.from_matches(matches, entry.meanings)
    meaning = choose_meaning(table)
    return Resolution(
        page_id=doc.page_id,
        is_dual_meaning_flag=True,
        selected_word=entry.headword,
        meaning=meaning,
        status=Status.RESOLVED if meaning is not None else Status.UNRESOLVED,
        stats=stats,
        votes=table,
        matches=tuple(matches),
    )


def _resolve_single(doc: Document, kb: KnowledgeBase, stats) -> Resolution:
    (key,) = stats
    return _vote(doc, kb.entries[key], stats)


def _resolve_multi(doc: Document, kb: KnowledgeBase, stats) -> Resolution:
    return _vote(doc, kb.entries[select_target_word(stats)], stats)


def resolve(doc: Document, kb: KnowledgeBase) -> Resolution:
    """Assign one meaning to the whole page, or report why none was chosen."""
    stats = count_dual_words(doc, kb)
    if not stats:
        return Resolution(doc.page_id, False, None, None, Status.NOT_DUAL)
    if len(stats) == 1:
        return _resolve_single(doc, kb, stats)
    return _resolve_multi(doc, kb, stats)
