"""Command-line entry point.

Exit codes: 0 success, 1 domain failure (validation, evaluation, bad
arguments), 2 I/O failure. Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import shutil
import sys
from pathlib import Path

from . import __version__
from .disambiguator import resolve
from .harness import REPORT_HEADER, ErrorRecord, GoldFormatError, emit_report, evaluate, generate_synthetic_corpus, run_batch
from .knowledge_base import KBError, load_kb, merge_entry, parse_entry, validate_kb_dir
from .text import read_page

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_kb_validate(args) -> int:
    try:
        outcomes = validate_kb_dir(args.kb)
    except OSError as exc:
        _err(f"error: {exc}")
        return EXIT_IO
    bad = 0
    for filename, error in outcomes:
        if error is None:
            print(f"{filename}: OK")
        else:
            bad += 1
            print(f"{filename}: INVALID: {error}")
    good = len(outcomes) - bad
    if bad:
        _err(f"{good} entries OK, {bad} invalid")
        return EXIT_DOMAIN
    print(f"{good} {'entry' if good == 1 else 'entries'} OK")
    return EXIT_OK


def cmd_kb_add(args) -> int:
    try:
        kb = load_kb(args.kb)
        raw = Path(args.file).read_bytes()
    except OSError as exc:
        _err(f"error: {exc}")
        return EXIT_IO
    except KBError as exc:
        _err(f"error: {exc}")
        return EXIT_DOMAIN
    try:
        entry = parse_entry(raw)
        merge_entry(kb, entry, replace=args.replace)
    except KBError as exc:
        _err(f"error: {exc}")
        return EXIT_DOMAIN
    target = Path(args.kb) / f"{entry.key.replace(' ', '_')}.xml"
    if args.replace:
        # drop any other file that declared the same headword
        for path in sorted(Path(args.kb).glob("*.xml")):
            if path != target:
                try:
                    other = parse_entry(path.read_bytes())
                except KBError:
                    continue
                if other.key == entry.key:
                    path.unlink()
    try:
        shutil.copyfile(args.file, target)
    except OSError as exc:
        _err(f"error: {exc}")
        return EXIT_IO
    print(f"added {entry.headword!r} -> {target}")
    return EXIT_OK


def _load(kb_dir):
    try:
        return load_kb(kb_dir), None
    except OSError as exc:
        _err(f"error: {exc}")
        return None, EXIT_IO
    except KBError as exc:
        _err(f"error: {exc}")
        return None, EXIT_DOMAIN


def cmd_tag(args) -> int:
    kb, code = _load(args.kb)
    if kb is None:
        return code
    try:
        doc = read_page(args.input, include_title=args.include_title)
    except OSError as exc:
        _err(f"error: {exc}")
        return EXIT_IO
    result = resolve(doc, kb)
    print(json.dumps(result.to_record(), ensure_ascii=False, sort_keys=True))
    if args.explain:
        for m in result.matches:
            _err(f"  {m.position:>5}  {m.name!r} -> {m.meaning}")
    return EXIT_OK


def cmd_batch(args) -> int:
    kb, code = _load(args.kb)
    if kb is None:
        return code
    if not Path(args.corpus).is_dir():
        _err(f"error: corpus directory not found: {args.corpus}")
        return EXIT_IO
    try:
        results = run_batch(args.corpus, kb, args.out, include_title=args.include_title, jobs=args.jobs)
    except OSError as exc:
        _err(f"error: {exc}")
        return EXIT_IO
    except ValueError as exc:
        _err(f"error: {exc}")
        return EXIT_DOMAIN
    errors = sum(isinstance(r, ErrorRecord) for r in results)
    _err(f"{len(results)} pages processed, {errors} unreadable")
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        report = evaluate(args.results, args.gold)
    except OSError as exc:
        _err(f"error: {exc}")
        return EXIT_IO
    except (GoldFormatError, ValueError) as exc:
        _err(f"error: {exc}")
        return EXIT_DOMAIN
    if report.missing_gold:
        _err(f"warning: {len(report.missing_gold)} result pages have no gold label: {', '.join(report.missing_gold)}")
    if args.out:
        try:
            emit_report(report, args.out, append=args.append)
        except OSError as exc:
            _err(f"error: {exc}")
            return EXIT_IO
    else:
        print(",".join(REPORT_HEADER))
        print(",".join(map(str, report.row())))
    return EXIT_OK


def cmd_generate(args) -> int:
    if not 0.0 <= args.fraction <= 1.0:
        _err(f"error: --fraction must be within [0, 1], got {args.fraction}")
        return EXIT_DOMAIN
    kb, code = _load(args.kb)
    if kb is None:
        return code
    try:
        pages, gold = generate_synthetic_corpus(
            kb, args.out, args.n, args.fraction, args.seed, no_evidence_fraction=args.no_evidence_fraction
        )
    except OSError as exc:
        _err(f"error: {exc}")
        return EXIT_IO
    except ValueError as exc:
        _err(f"error: {exc}")
        return EXIT_DOMAIN
    print(pages)
    print(gold)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pagesense",
        description="Identify the meaning of web pages that contain dual-meaning words.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    kb_dir = argparse.ArgumentParser(add_help=False)
    kb_dir.add_argument("--kb", required=True, metavar="DIR", help="knowledge-base directory of per-word XML files")
    title = argparse.ArgumentParser(add_help=False)
    title.add_argument("--include-title", action="store_true", help="treat <title> and meta descriptions as content")

    kb = sub.add_parser("kb", help="knowledge-base management")
    kb_sub = kb.add_subparsers(dest="kb_command", required=True)
    p = kb_sub.add_parser("validate", parents=[kb_dir], help="check every XML entry")
    p.set_defaults(func=cmd_kb_validate)
    p = kb_sub.add_parser("add", parents=[kb_dir], help="validate a new entry and copy it into the base")
    p.add_argument("file", help="entry XML file")
    p.add_argument("--replace", action="store_true", help="replace an existing entry with the same headword")
    p.set_defaults(func=cmd_kb_add)

    p = sub.add_parser("tag", parents=[kb_dir, title], help="resolve a single page and print its record")
    p.add_argument("input", help=".html/.htm page or .txt file")
    p.add_argument("--explain", action="store_true", help="list keyword matches on stderr")
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("batch", parents=[kb_dir, title], help="resolve every page of a corpus directory")
    p.add_argument("corpus", help="directory of page files")
    p.add_argument("--out", required=True, metavar="PATH", help="results file (one JSON record per line)")
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes (default 1)")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("report", help="score results against gold labels and emit a CSV row")
    p.add_argument("results", help="results file written by 'batch'")
    p.add_argument("gold", help="tab-separated gold file")
    p.add_argument("--out", metavar="PATH", help="CSV destination (default stdout)")
    p.add_argument("--append", action="store_true", help="append a row to an existing report")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("generate", parents=[kb_dir], help="write a seeded synthetic labelled corpus")
    p.add_argument("--n", type=int, default=1000, help="number of pages (default 1000)")
    p.add_argument("--fraction", type=float, default=0.09, help="share of dual-meaning pages (default 0.09)")
    p.add_argument("--no-evidence-fraction", type=float, default=0.0,
                   help="share of dual pages written without any sense name")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--out", required=True, metavar="DIR", help="output directory")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
