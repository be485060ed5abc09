import random

import pytest
from hypothesis import given, settings, strategies as st

from pagesense import (
    KnowledgeBase,
    Status,
    Tally,
    VoteTable,
    WordCount,
    build_vote_table,
    choose_meaning,
    count_dual_words,
    merge_entry,
    resolve,
    segment_and_tokenize,
    select_target_word,
)
from pagesense.disambiguator import _resolve_multi, _resolve_single

from conftest import ALEX, JOHN, PETER, entry
from oracles import as_text, oracle_resolve, random_instance


def doc(text, page_id="p"):
    return segment_and_tokenize(text, page_id)


def kb_from_oracle(kb):
    return KnowledgeBase.from_entries(
        entry(
            hw[0],
            {m: [" ".join(n) for n, mm in names.items() if mm == m] for m in meanings},
        )
        for hw, (meanings, names) in kb.items()
    )


# -- counting ---------------------------------------------------------------


def test_count_john(bank_kb):
    assert count_dual_words(doc(JOHN), bank_kb) == {"bank": WordCount(1, 5)}


def test_count_none(bank_kb):
    assert count_dual_words(doc("Nothing to see here."), bank_kb) == {}


def test_count_peter(bank_kb):
    assert count_dual_words(doc(PETER), bank_kb) == {"bank": WordCount(2, 3)}


def test_count_multiword_headword():
    kb = KnowledgeBase.from_entries([entry("New York", {"City": ["subway"], "Other": ["cheesecake"]})])
    stats = count_dual_words(doc("I love new york. New. York is big. new york new york"), kb)
    assert stats == {"new york": WordCount(3, 2)}


# -- target selection ---------------------------------------------------------


@pytest.mark.parametrize(
    "stats, expected",
    [
        ({"bank": WordCount(3, 0), "bat": WordCount(1, 2)}, "bank"),
        ({"bank": WordCount(2, 10), "bat": WordCount(2, 4)}, "bat"),
        ({"bank": WordCount(1, 7)}, "bank"),
    ],
)
def test_select_target_word(stats, expected):
    assert select_target_word(stats) == expected


def test_select_target_word_empty():
    with pytest.raises(ValueError):
        select_target_word({})


# -- voting -----------------------------------------------------------------


def test_vote_john(bank_entry):
    table = build_vote_table(doc(JOHN), bank_entry)
    assert table.votes() == {"Financial Institutes": 1}


def test_vote_peter(bank_entry):
    table = build_vote_table(doc(PETER), bank_entry)
    assert table.votes() == {"River side": 1}
    assert table["River side"].earliest_position == 11


def test_vote_empty(bank_entry):
    assert len(build_vote_table(doc("The bank was shut."), bank_entry)) == 0


def test_vote_accumulates_across_sentences(bank_entry):
    text = f"{JOHN}. {ALEX}. The bank account and another account."
    table = build_vote_table(doc(text), bank_entry)
    assert table.votes() == {"Financial Institutes": 3, "River side": 1}
    assert table["Financial Institutes"].earliest_position == 10


@pytest.mark.parametrize(
    "tallies, expected",
    [
        ({"Financial Institutes": Tally(3, 50), "River side": Tally(1, 0)}, "Financial Institutes"),
        ({"Financial Institutes": Tally(1, 20), "River side": Tally(1, 7)}, "River side"),
        ({}, None),
    ],
)
def test_choose_meaning(tallies, expected):
    assert choose_meaning(VoteTable(tallies)) == expected


def test_choose_meaning_residual_tie_uses_sense_order():
    table = VoteTable({"B": Tally(1, 4), "A": Tally(1, 4)}, sense_order=("B", "A"))
    assert choose_meaning(table) == "B"


# -- full resolution ----------------------------------------------------------


def test_resolve_john(bank_kb):
    r = resolve(doc(JOHN), bank_kb)
    assert (r.status, r.is_dual_meaning_flag, r.selected_word, r.meaning) == (
        Status.RESOLVED, True, "bank", "Financial Institutes"
    )


def test_resolve_empty(bank_kb):
    r = resolve(doc("", "e"), bank_kb)
    assert r.status is Status.NOT_DUAL and r.is_dual_meaning_flag is False
    assert r.selected_word is None and r.meaning is None


def test_resolve_peter(bank_kb):
    assert resolve(doc(PETER), bank_kb).meaning == "River side"


def test_resolve_bat_page(bank_kb, bat_entry):
    kb = merge_entry(bank_kb, bat_entry)
    r = resolve(doc("bat bat bank. the bat lives in a cave."), kb)
    assert r.selected_word == "bat"
    assert r.meaning == "Animal"
    assert r.stats == {"bank": WordCount(1, 2), "bat": WordCount(3, 0)}


def test_resolve_unresolved(bank_kb):
    r = resolve(doc("The bank is closed on Sunday."), bank_kb)
    assert r.status is Status.UNRESOLVED and r.is_dual_meaning_flag
    assert r.selected_word == "bank" and r.meaning is None


def test_equal_count_selects_earlier_word(bank_kb, bat_entry):
    kb = merge_entry(bank_kb, bat_entry)
    r = resolve(doc("The bank near the river. A bat in a cave."), kb)
    assert r.selected_word == "bank" and r.meaning == "River side"
    r = resolve(doc("A bat in a cave. The bank near the river."), kb)
    assert r.selected_word == "bat" and r.meaning == "Animal"


def test_example_one_combined_sentence_tie(bank_kb):
    # both senses get one vote; the earlier keyword ("account") wins
    r = resolve(doc(f"{JOHN} on the other hand {ALEX}"), bank_kb)
    assert r.votes.votes() == {"Financial Institutes": 1, "River side": 1}
    assert r.meaning == "Financial Institutes"


def test_record_shape(bank_kb):
    rec = resolve(doc(JOHN, "john"), bank_kb).to_record()
    assert rec == {
        "page_id": "john",
        "is_dual_meaning_flag": True,
        "selected_word": "bank",
        "meaning": "Financial Institutes",
        "status": "resolved",
        "votes": {"Financial Institutes": 1},
    }


def _check_invariants(r, kb):
    if r.status is Status.NOT_DUAL:
        assert not r.is_dual_meaning_flag and r.selected_word is None and r.meaning is None
    else:
        assert r.is_dual_meaning_flag and r.selected_word is not None
    if r.status is Status.RESOLVED:
        assert r.meaning in kb[r.selected_word].meanings
    if r.status is Status.UNRESOLVED:
        assert r.meaning is None


def test_random_against_oracle_and_invariants():
    rng = random.Random(20240601)
    for _ in range(300):
        sentences, okb = random_instance(rng)
        kb = kb_from_oracle(okb)
        d = doc(as_text(sentences))
        r = resolve(d, kb)
        hw, meaning = oracle_resolve(sentences, okb)
        assert (r.selected_word, r.meaning) == (hw[0] if hw else None, meaning)
        _check_invariants(r, kb)
        assert resolve(d, kb) == r
        if len(r.stats) == 1:
            assert _resolve_multi(d, kb, r.stats) == _resolve_single(d, kb, r.stats) == r


@settings(max_examples=100)
@given(st.lists(st.sampled_from(["bank", "river", "loan", "the", "cave", "bat", "."]), max_size=30))
def test_kb_monotonicity(words):
    kb = KnowledgeBase.from_entries([
        entry("bank", {"F": ["loan"], "R": ["river"]}),
        entry("bat", {"A": ["cave"], "S": ["cricket"]}),
    ])
    d = doc(" ".join(words))
    extra = entry("crane", {"Bird": ["heron"], "Machine": ["hoist"]})
    assert resolve(d, merge_entry(kb, extra)) == resolve(d, kb)
