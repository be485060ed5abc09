"""Knowledge-based meaning identification for web pages with dual-meaning words."""

__version__ = "0.1.0"

from .disambiguator import (
    Resolution,
    Status,
    Tally,
    VoteTable,
    WordCount,
    build_vote_table,
    choose_meaning,
    count_dual_words,
    resolve,
    select_target_word,
)
from .harness import (
    GoldLabel,
    RunReport,
    emit_report,
    evaluate,
    generate_synthetic_corpus,
    run_batch,
)
from .knowledge_base import (
    DualWordEntry,
    DuplicateEntryError,
    KBError,
    KBParseError,
    KeywordMatch,
    KnowledgeBase,
    SenseGroup,
    ValidationError,
    load_kb,
    match_names,
    merge_entry,
    parse_entry,
    serialize_entry,
)
from .text import Document, Sentence, Token, html_to_text, read_page, segment_and_tokenize


def bundled_kb_path():
    """Directory of the sample knowledge base shipped with the package."""
    from pathlib import Path

    return Path(__file__).parent / "data" / "kb"
