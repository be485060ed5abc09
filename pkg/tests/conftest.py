from __future__ import annotations

from pathlib import Path

import pytest

from pagesense import DualWordEntry, KnowledgeBase, SenseGroup, bundled_kb_path, load_kb, parse_entry

# the two senses of "bank" as listed in the figure, river sense completed
BANK_XML = """<?xml version="1.0" encoding="UTF-8"?>
<dualMeaningWord xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance"
                 dmw_id="1" xsi:noNamespaceSchemaLocation="dualMeaningWord.xsd">
  <dualMeaningWordName>bank</dualMeaningWordName>
  <keywords>
    <keyword>
      <names>
        <name>Reserve Bank of India</name>
        <name>State Bank of India</name>
        <name>State Bank of Mauritius</name>
        <name>UBS</name>
        <name>VTB</name>
        <name>account</name>
      </names>
      <meaning>Financial Institutes</meaning>
    </keyword>
    <keyword>
      <names>
        <name>River</name>
        <name>Adyar River</name>
        <name>Ahar River</name>
      </names>
      <meaning>River side</meaning>
    </keyword>
  </keywords>
</dualMeaningWord>
"""

BAT_XML = """<dualMeaningWord dmw_id="2">
  <dualMeaningWordName>bat</dualMeaningWordName>
  <keywords>
    <keyword><names><name>cricket</name></names><meaning>Sport</meaning></keyword>
    <keyword><names><name>cave</name></names><meaning>Animal</meaning></keyword>
  </keywords>
</dualMeaningWord>
"""

JOHN = "John is looking for a bank to open a savings account"
ALEX = "Alex is looking for a bank of the river for a get together"
PETER = "Peter found a bank which located on the bank of the river."


def entry(headword, senses, dmw_id=None):
    """Build an entry from ``{meaning: [names]}``."""
    return DualWordEntry(
        dmw_id or headword,
        headword,
        tuple(SenseGroup(tuple(names), meaning) for meaning, names in senses.items()),
    )


@pytest.fixture
def bank_entry():
    return parse_entry(BANK_XML)


@pytest.fixture
def bat_entry():
    return parse_entry(BAT_XML)


@pytest.fixture
def bank_kb(bank_entry):
    return KnowledgeBase({bank_entry.key: bank_entry})


@pytest.fixture
def bank_bat_kb(bank_entry, bat_entry):
    return KnowledgeBase.from_entries([bank_entry, bat_entry])


@pytest.fixture(scope="session")
def sample_kb_dir() -> Path:
    return bundled_kb_path()


@pytest.fixture(scope="session")
def sample_kb(sample_kb_dir):
    return load_kb(sample_kb_dir)


@pytest.fixture
def kb_dir(tmp_path):
    d = tmp_path / "kb"
    d.mkdir()
    (d / "bank.xml").write_text(BANK_XML, encoding="utf-8")
    return d


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
