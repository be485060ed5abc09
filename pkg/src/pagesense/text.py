"""Plain-text extraction, sentence segmentation and tokenization for web pages."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from html.parser import HTMLParser
from pathlib import Path

__all__ = [
    "Token",
    "Sentence",
    "Document",
    "normalize",
    "tokenize",
    "html_to_text",
    "segment_and_tokenize",
    "read_page",
    "PAGE_SUFFIXES",
]

# letters and digits only; "_" is a word char for \w so exclude it explicitly
_TOKEN_RE = re.compile(r"[^\W_]+")
_SENTENCE_END_RE = re.compile(r"(?<=[.!?])\s+")
_SPACE_RE = re.compile(r"\s+")

PAGE_SUFFIXES = (".html", ".htm", ".txt")

BLOCK_ELEMENTS = frozenset(
    """address article aside blockquote body br dd details dialog div dl dt
    fieldset figcaption figure footer form h1 h2 h3 h4 h5 h6 header hr html
    li main nav ol p pre section summary table tbody td tfoot th thead tr ul""".split()
)
_SKIPPED_ELEMENTS = frozenset({"script", "style", "noscript", "template"})
_META_CONTENT_NAMES = frozenset({"description", "keywords", "title"})


def normalize(text: str) -> str:
    return unicodedata.normalize("NFC", text).lower()


def tokenize(text: str) -> list[str]:
    """Return normalized tokens: maximal runs of letters and digits.

    Hyphens, apostrophes and all other punctuation separate tokens, so
    ``"River-side's"`` yields ``["river", "side", "s"]``.
    """
    return _TOKEN_RE.findall(normalize(text))


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    position: int
    sentence_index: int


@dataclass(frozen=True)
class Sentence:
    index: int
    raw_text: str
    token_span: tuple[int, int]


@dataclass(frozen=True)
class Document:
    page_id: str
    sentences: tuple[Sentence, ...]
    tokens: tuple[Token, ...]

    @property
    def normalized(self) -> tuple[str, ...]:
        return tuple(t.normalized for t in self.tokens)

    def sentence_tokens(self, index: int) -> tuple[Token, ...]:
        start, end = self.sentences[index].token_span
        return self.tokens[start:end]


class _TextCollector(HTMLParser):
    def __init__(self, include_title: bool) -> None:
        super().__init__(convert_charrefs=True)
        self.include_title = include_title
        self.lines: list[str] = []
        self._current: list[str] = []
        self._skip_depth = 0
        self._in_title = False

    def _break(self) -> None:
        line = _SPACE_RE.sub(" ", "".join(self._current)).strip()
        if line:
            self.lines.append(line)
        self._current = []

    def handle_starttag(self, tag, attrs):
        if tag in _SKIPPED_ELEMENTS:
            self._skip_depth += 1
        elif tag == "title":
            self._break()
            self._in_title = True
        elif tag == "meta":
            if self.include_title:
                attrs = dict(attrs)
                if (attrs.get("name") or "").lower() in _META_CONTENT_NAMES and attrs.get("content"):
                    self._break()
                    self._current.append(attrs["content"])
                    self._break()
        elif tag in BLOCK_ELEMENTS:
            self._break()

    def handle_startendtag(self, tag, attrs):
        # <br/>, <meta/> and friends; never push skip depth for void tags
        if tag in _SKIPPED_ELEMENTS:
            return
        self.handle_starttag(tag, attrs)

    def handle_endtag(self, tag):
        if tag in _SKIPPED_ELEMENTS:
            self._skip_depth = max(0, self._skip_depth - 1)
        elif tag == "title":
            if self._in_title:
                if self.include_title:
                    self._break()
                else:
                    self._current = []
            self._in_title = False
        elif tag in BLOCK_ELEMENTS:
            self._break()

    def handle_data(self, data):
        if self._skip_depth:
            return
        if self._in_title and not self.include_title:
            return
        self._current.append(data)

    def close(self):
        super().close()
        self._break()


def html_to_text(html: str, include_title: bool = False) -> str:
    """Strip markup from ``html`` and return the visible body text.

    Script, style and comment content is dropped. Every block-level element
    boundary becomes a newline, which later acts as a sentence break. Title
    text and ``<meta>`` descriptions are excluded unless ``include_title``.
    Malformed markup is handled on a best-effort basis and never raises.
    """
    parser = _TextCollector(include_title)
    parser.feed(html)
    parser.close()
    return "\n".join(parser.lines)


def _split_sentences(text: str) -> list[str]:
    pieces = []
    for line in text.splitlines():
        line = _SPACE_RE.sub(" ", line).strip()
        if line:
            pieces.extend(p for p in _SENTENCE_END_RE.split(line) if p)
    return pieces


def segment_and_tokenize(text: str, page_id: str = "") -> Document:
    """Split ``text`` into sentences and tokens.

    Sentences end at ``.``, ``!`` or ``?`` followed by whitespace or the end
    of input, and at every line break. There is no abbreviation handling.
    Sentences that produce no tokens are dropped.
    """
    sentences: list[Sentence] = []
    tokens: list[Token] = []
    for raw in _split_sentences(text):
        index = len(sentences)
        start = len(tokens)
        for match in _TOKEN_RE.finditer(raw):
            surface = match.group()
            tokens.append(Token(surface, normalize(surface), len(tokens), index))
        if len(tokens) > start:
            sentences.append(Sentence(index, raw, (start, len(tokens))))
    return Document(page_id, tuple(sentences), tuple(tokens))


def read_page(path: str | Path, page_id: str | None = None, include_title: bool = False) -> Document:
    """Load a page file into a Document.

    ``.html``/``.htm`` files go through :func:`html_to_text`; anything else
    is taken verbatim. Invalid UTF-8 is replaced rather than rejected.
    """
    path = Path(path)
    raw = path.read_bytes().decode("utf-8", errors="replace")
    if path.suffix.lower() in (".html", ".htm"):
        raw = html_to_text(raw, include_title=include_title)
    return segment_and_tokenize(raw, page_id if page_id is not None else path.stem)
