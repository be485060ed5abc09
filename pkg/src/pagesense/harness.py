"""Batch runs over a page repository, gold-label scoring and report output."""

from __future__ import annotations

import csv
import html
import json
import logging
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, field
from pathlib import Path
from typing import Iterable

from .disambiguator import Resolution, resolve
from .knowledge_base import KnowledgeBase, normalize_phrase
from .text import PAGE_SUFFIXES, read_page

__all__ = [
    "GoldLabel",
    "RunReport",
    "ErrorRecord",
    "GoldFormatError",
    "REPORT_HEADER",
    "list_pages",
    "run_batch",
    "read_results",
    "read_gold",
    "evaluate",
    "emit_report",
    "generate_synthetic_corpus",
]

log = logging.getLogger(__name__)

REPORT_HEADER = (
    "repository_size",
    "pages_with_dual_words",
    "correct_first_run",
    "unresolved",
    "incorrect",
    "flag_errors",
)
ABSENT = "-"


class GoldFormatError(ValueError):
    def __init__(self, path, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: {message}")


@dataclass(frozen=True)
class GoldLabel:
    page_id: str
    expected_word: str | None
    expected_meaning: str | None

    def __post_init__(self):
        if (self.expected_word is None) != (self.expected_meaning is None):
            raise ValueError(f"{self.page_id}: expected_word and expected_meaning must both be present or absent")


@dataclass(frozen=True)
class ErrorRecord:
    page_id: str
    error: str

    def to_record(self) -> dict:
        return {
            "page_id": self.page_id,
            "is_dual_meaning_flag": False,
            "selected_word": None,
            "meaning": None,
            "status": "error",
            "votes": {},
            "error": self.error,
        }


@dataclass(frozen=True)
class RunReport:
    pages_total: int = 0
    pages_with_dual_words: int = 0
    resolved_correct: int = 0
    resolved_incorrect: int = 0
    unresolved: int = 0
    flag_errors: int = 0
    missing_gold: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        counts = astuple(self)[:6]
        if any(c < 0 for c in counts):
            raise ValueError("report counts must be non-negative")
        if self.resolved_correct + self.resolved_incorrect + self.unresolved != self.pages_with_dual_words:
            raise ValueError("correct + incorrect + unresolved must equal pages_with_dual_words")

    def row(self) -> tuple[int, ...]:
        return (
            self.pages_total,
            self.pages_with_dual_words,
            self.resolved_correct,
            self.unresolved,
            self.resolved_incorrect,
            self.flag_errors,
        )


def list_pages(corpus_dir: str | Path) -> list[tuple[str, Path]]:
    """``(page_id, path)`` for every page file, sorted by page id.

    The page id is the path relative to ``corpus_dir`` without its suffix,
    using ``/`` separators.
    """
    root = Path(corpus_dir)
    pages = []
    for dirpath, _dirnames, filenames in os.walk(root):
        for fn in filenames:
            path = Path(dirpath, fn)
            if path.suffix.lower() in PAGE_SUFFIXES:
                pages.append((path.relative_to(root).with_suffix("").as_posix(), path))
    pages.sort()
    ids = [p for p, _ in pages]
    if len(set(ids)) != len(ids):
        dupes = sorted({p for p in ids if ids.count(p) > 1})
        raise ValueError(f"several files map to the same page id: {dupes}")
    return pages


def _process(args) -> Resolution | ErrorRecord:
    page_id, path, kb, include_title = args
    try:
        doc = read_page(path, page_id, include_title=include_title)
    except OSError as exc:
        return ErrorRecord(page_id, f"{type(exc).__name__}: {exc.strerror or exc}")
    return resolve(doc, kb)


def _dump(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False, sort_keys=True)


def run_batch(
    corpus_dir: str | Path,
    kb: KnowledgeBase,
    out_path: str | Path,
    include_title: bool = False,
    jobs: int = 1,
) -> list[Resolution | ErrorRecord]:
    """Resolve every page in ``corpus_dir`` and write one JSON line per page.

    Unreadable pages produce an :class:`ErrorRecord` instead of stopping the
    run. Output is sorted by page id, so ``jobs`` never changes the bytes
    written.
    """
    out_path = Path(out_path)
    # fail before doing any work if the destination is unusable
    with open(out_path, "w", encoding="utf-8"):
        pass
    work = [(pid, path, kb, include_title) for pid, path in list_pages(corpus_dir)]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_process, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        results = [_process(w) for w in work]
    results.sort(key=lambda r: r.page_id)
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        for r in results:
            fh.write(_dump(r.to_record()) + "\n")
    errors = sum(isinstance(r, ErrorRecord) for r in results)
    log.info("processed %d pages (%d errors) -> %s", len(results), errors, out_path)
    return results


def read_results(results_path: str | Path) -> list[dict]:
    records = []
    with open(results_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValueError(f"{results_path}:{lineno}: bad result record: {exc}") from None
    return records


def read_gold(gold_path: str | Path) -> dict[str, GoldLabel]:
    """Parse a tab-separated ``page_id, expected_word, expected_meaning`` file.

    ``-`` marks an absent value and ``#`` starts a comment line.
    """
    gold: dict[str, GoldLabel] = {}
    with open(gold_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 3:
                raise GoldFormatError(gold_path, lineno, f"expected 3 tab-separated columns, got {len(cols)}")
            page_id, word, meaning = (c.strip() for c in cols)
            if not page_id:
                raise GoldFormatError(gold_path, lineno, "empty page_id")
            word = None if word == ABSENT else word
            meaning = None if meaning == ABSENT else meaning
            if (word is None) != (meaning is None):
                raise GoldFormatError(gold_path, lineno, "expected_word and expected_meaning must both be '-' or both set")
            if page_id in gold:
                raise GoldFormatError(gold_path, lineno, f"duplicate page_id {page_id!r}")
            gold[page_id] = GoldLabel(page_id, word, meaning)
    return gold


def _same_word(a: str | None, b: str | None) -> bool:
    return a is not None and b is not None and normalize_phrase(a) == normalize_phrase(b)


def score(records: Iterable[dict], gold: dict[str, GoldLabel]) -> RunReport:
    total = dual = correct = incorrect = unresolved = flag_errors = 0
    missing = []
    for rec in records:
        total += 1
        page_id = rec["page_id"]
        flagged = bool(rec.get("is_dual_meaning_flag"))
        label = gold.get(page_id)
        if label is None:
            missing.append(page_id)
            flag_errors += 1
        elif flagged != (label.expected_word is not None):
            flag_errors += 1
        if not flagged:
            continue
        dual += 1
        if rec.get("status") == "unresolved" or rec.get("meaning") is None:
            unresolved += 1
        elif (
            label is not None
            and _same_word(rec.get("selected_word"), label.expected_word)
            and rec.get("meaning") == label.expected_meaning
        ):
            correct += 1
        else:
            incorrect += 1
    return RunReport(
        pages_total=total,
        pages_with_dual_words=dual,
        resolved_correct=correct,
        resolved_incorrect=incorrect,
        unresolved=unresolved,
        flag_errors=flag_errors,
        missing_gold=tuple(sorted(missing)),
    )


def evaluate(results_path: str | Path, gold_path: str | Path) -> RunReport:
    """Score a results file against gold labels by exact (word, meaning) match.

    A flag disagreement (dual predicted but gold says ``-``, or the reverse)
    counts under ``flag_errors``, as does a result with no gold row. Those
    page ids are listed in ``missing_gold``.
    """
    report = score(read_results(results_path), read_gold(gold_path))
    if report.missing_gold:
        log.warning("%d result pages missing from gold: %s", len(report.missing_gold), ", ".join(report.missing_gold))
    return report


def emit_report(report: RunReport, out_path: str | Path, append: bool = False) -> None:
    """Write the CSV header and one row for ``report``.

    With ``append`` the row is added under an existing header, which is how
    runs before and after a knowledge-base edit end up in one table.
    """
    out_path = Path(out_path)
    write_header = not (append and out_path.exists() and out_path.stat().st_size > 0)
    with open(out_path, "a" if append else "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if write_header:
            writer.writerow(REPORT_HEADER)
        writer.writerow(report.row())


# -- synthetic corpora -------------------------------------------------------

_FILLER_WORDS = """
afternoon album apple autumn bicycle blanket breakfast bridge camera candle
carpet castle ceiling chair chocolate cinema city coffee concert cottage
desert dinner doctor dragon engine festival forest garden guitar hammer
harvest helmet hospital island jacket kettle kitchen ladder lantern library
lunch market meadow mirror morning mountain museum music neighbour notebook
orchard painting palace parade pencil piano picnic pillow planet pocket
puzzle rainbow recipe saddle sandwich scarf school season shadow shelf
stadium station street sunset table teacher theatre ticket tower tractor
train trumpet tunnel umbrella valley village violin wagon window winter
""".split()

_FILLER_TEMPLATES = (
    "Our {a} stood close to the old {b}.",
    "Everyone talked about a {a} and a {b} during the week.",
    "My friend bought a new {a} after visiting the {b}.",
    "The {a} looked brighter than any {b} this year.",
    "We walked past the {a} on our way to the {b}.",
    "Nobody expected the {a} to appear beside that {b}.",
)

# slots are always separated by fixed words so a name can never run into
# the headword or into another name
_EVIDENCE_TEMPLATES = (
    "The {hw} was mentioned together with {name} in the notes.",
    "People at the {hw} kept talking about {name} all day.",
    "Reports about the {hw} often include {name} as well.",
    "She described the {hw} and then pointed to {name} again.",
)
_BARE_TEMPLATES = (
    "The {hw} was mentioned once more in the notes.",
    "People kept talking about the {hw} all day.",
)


def _page_html(title: str, sentences: list[str]) -> str:
    body = "\n".join(f"<p>{html.escape(s)}</p>" for s in sentences)
    return (
        "<!DOCTYPE html>\n<html>\n<head><title>"
        + html.escape(title)
        + "</title></head>\n<body>\n"
        + body
        + "\n</body>\n</html>\n"
    )


def _kb_vocabulary(kb: KnowledgeBase) -> set[str]:
    vocab: set[str] = set()
    for entry in kb:
        vocab.update(entry.headword_tokens)
        for sense in entry.senses:
            for name in sense.names:
                vocab.update(normalize_phrase(name))
    return vocab


def _clean_templates(templates, banned: set[str]) -> list[str]:
    kept = [t for t in templates if not set(normalize_phrase(t.format(a="", b="", hw="", name=""))) & banned]
    if not kept:
        raise ValueError("every sentence template clashes with the knowledge-base vocabulary")
    return kept


def generate_synthetic_corpus(
    kb: KnowledgeBase,
    out_dir: str | Path,
    n_pages: int,
    dual_fraction: float = 0.09,
    seed: int = 0,
    no_evidence_fraction: float = 0.0,
) -> tuple[Path, Path]:
    """Write a labelled corpus of HTML pages and a gold file.

    ``round(n_pages * dual_fraction)`` pages mention one headword, each in
    sentences that also carry one to three names of a single chosen sense.
    A further ``round(n_dual * no_evidence_fraction)`` of those dual pages
    mention the headword with no sense names at all; their ids are listed in
    ``manifest.json``. The rest contain no knowledge-base vocabulary.
    Returns ``(pages_dir, gold_path)``; the same seed always yields
    identical files.
    """
    if not 0.0 <= dual_fraction <= 1.0:
        raise ValueError(f"dual_fraction must be within [0, 1], got {dual_fraction}")
    if not 0.0 <= no_evidence_fraction <= 1.0:
        raise ValueError(f"no_evidence_fraction must be within [0, 1], got {no_evidence_fraction}")
    if n_pages < 0:
        raise ValueError("n_pages must be non-negative")
    n_dual = round(n_pages * dual_fraction)
    if n_dual and not len(kb):
        raise ValueError("cannot generate dual pages from an empty knowledge base")

    rng = random.Random(seed)
    banned = _kb_vocabulary(kb)
    filler_words = [w for w in _FILLER_WORDS if w not in banned]
    if len(filler_words) < 2:
        raise ValueError("too few filler words survive the knowledge-base vocabulary filter")
    filler_templates = _clean_templates(_FILLER_TEMPLATES, banned)
    evidence_templates = _clean_templates(_EVIDENCE_TEMPLATES, banned)
    bare_templates = _clean_templates(_BARE_TEMPLATES, banned)

    entries = list(kb)
    headword_sets = {e.key: set(e.headword_tokens) for e in entries}

    def usable_names(entry, sense):
        # a name containing another headword would change target selection
        others = set().union(*(v for k, v in headword_sets.items() if k != entry.key))
        names = [
            n for n in sense.names
            if normalize_phrase(n) != entry.headword_tokens and not set(normalize_phrase(n)) & others
        ]
        return names

    out_dir = Path(out_dir)
    pages_dir = out_dir / "pages"
    pages_dir.mkdir(parents=True, exist_ok=True)
    width = max(4, len(str(max(n_pages - 1, 0))))
    dual_ids = set(rng.sample(range(n_pages), n_dual))
    bare_ids = set(rng.sample(sorted(dual_ids), round(n_dual * no_evidence_fraction)))

    def filler(k):
        out = []
        for _ in range(k):
            a, b = rng.sample(filler_words, 2)
            out.append(rng.choice(filler_templates).format(a=a, b=b))
        return out

    gold_lines = ["# page_id\texpected_word\texpected_meaning"]
    for i in range(n_pages):
        page_id = f"page_{i:0{width}d}"
        sentences = filler(rng.randint(2, 5))
        if i in dual_ids:
            entry = rng.choice(entries)
            candidates = [s for s in entry.senses if usable_names(entry, s)]
            if not candidates:
                raise ValueError(f"entry {entry.headword!r} has no names usable as evidence")
            sense = rng.choice(candidates)
            if i in bare_ids:
                evidence = [rng.choice(bare_templates).format(hw=entry.headword)]
            else:
                names = usable_names(entry, sense)
                picked = rng.sample(names, rng.randint(1, min(3, len(names))))
                evidence = [rng.choice(evidence_templates).format(hw=entry.headword, name=n) for n in picked]
            for sentence in evidence:
                sentences.insert(rng.randint(0, len(sentences)), sentence)
            gold_lines.append(f"{page_id}\t{entry.headword}\t{sense.meaning}")
        else:
            gold_lines.append(f"{page_id}\t{ABSENT}\t{ABSENT}")
        title = " ".join(w.capitalize() for w in rng.sample(filler_words, 2))
        (pages_dir / f"{page_id}.html").write_text(_page_html(title, sentences), encoding="utf-8")

    gold_path = out_dir / "gold.tsv"
    gold_path.write_text("\n".join(gold_lines) + "\n", encoding="utf-8")
    manifest = {
        "n_pages": n_pages,
        "dual_fraction": dual_fraction,
        "no_evidence_fraction": no_evidence_fraction,
        "seed": seed,
        "no_evidence_pages": [f"page_{i:0{width}d}" for i in sorted(bare_ids)],
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return pages_dir, gold_path
