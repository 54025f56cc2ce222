"""Corpus segmentation, sentence splitting, tokenization and filtering.

Documents are the unit of work: each one is split, tokenized and filtered
independently, and outputs are merged in (doc_id, sentence index) order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Iterator, Optional, Sequence


@dataclass(frozen=True)
class Document:
    id: str
    text: str


@dataclass(frozen=True)
class Sentence:
    doc_id: str
    index: int
    tokens: tuple[str, ...]
    lower: tuple[str, ...] = field(default=())

    @classmethod
    def build(cls, doc_id: str, index: int, tokens: Sequence[str]) -> "Sentence":
        tokens = tuple(tokens)
        return cls(doc_id, index, tokens, tuple(t.lower() for t in tokens))


@lru_cache(maxsize=None)
def abbreviations() -> frozenset[str]:
    path = resources.files("nomsupport").joinpath("data", "abbreviations.txt")
    abbrevs = set()
    with path.open(encoding="utf-8") as fh:
        for line in fh:
            entry = line.split("#", 1)[0].strip().lower()
            if entry:
                abbrevs.add(entry)
    return frozenset(abbrevs)


_MARKUP_RE = re.compile(r"<[^<>]*>")


def strip_markup(text: str) -> str:
    """Trivial tag removal; anything fancier is out of scope."""
    return _MARKUP_RE.sub(" ", text)


def _iter_files(path: Path) -> Iterator[Path]:
    if path.is_dir():
        yield from sorted(p for p in path.rglob("*") if p.is_file())
    else:
        yield path


def segment(
    paths: Sequence[str | Path] | str | Path,
    doc_delim: Optional[str] = None,
    errors: Optional[list[tuple[str, str]]] = None,
    markup: bool = True,
) -> Iterator[Document]:
    """Yield one Document per file, or per delimiter-separated block.

    Undecodable files are reported through `errors` and skipped; the rest
    of the corpus is still processed.
    """
    if isinstance(paths, (str, Path)):
        paths = [paths]
    for root in paths:
        root = Path(root)
        for file_path in _iter_files(root):
            if root.is_dir():
                doc_id = file_path.relative_to(root).as_posix()
            else:
                doc_id = file_path.name
            try:
                text = file_path.read_bytes().decode("utf-8")
            except UnicodeDecodeError as exc:
                if errors is not None:
                    errors.append((doc_id, str(exc)))
                continue
            if markup:
                text = strip_markup(text)
            if doc_delim is None:
                if text.strip():
                    yield Document(doc_id, text)
                continue
            part_lines: list[str] = []
            part_num = 0
            for line in text.splitlines(keepends=True):
                if line.strip() == doc_delim:
                    part = "".join(part_lines)
                    if part.strip():
                        yield Document(f"{doc_id}#{part_num:04d}", part)
                        part_num += 1
                    part_lines = []
                else:
                    part_lines.append(line)
            part = "".join(part_lines)
            if part.strip():
                yield Document(f"{doc_id}#{part_num:04d}", part)


# A sentence ends at .!? (plus closing quotes/brackets) followed by
# whitespace and either an opening quote or a capital/digit.
_BOUNDARY_RE = re.compile(r"[.!?]+[\"')\]”’]*\s+(?=[\"'(\[“‘]|[A-Z0-9])")
_SINGLE_INITIAL_RE = re.compile(r"^[A-Za-z]\.$")


def split_sentences(doc: Document | str) -> list[str]:
    """Rule-based splitting; the abbreviation list suppresses false stops."""
    text = doc.text if isinstance(doc, Document) else doc
    abbrevs = abbreviations()
    starts = [0]
    for match in _BOUNDARY_RE.finditer(text):
        boundary = match.group(0)
        if "!" not in boundary and "?" not in boundary:
            # Period-only stop: hold the split after abbreviations/initials.
            punct_end = match.start() + len(boundary.rstrip())
            word_start = punct_end
            while word_start > 0 and not text[word_start - 1].isspace():
                word_start -= 1
            word = text[word_start:punct_end].rstrip("\"')]")
            if word.lower() in abbrevs or _SINGLE_INITIAL_RE.match(word):
                continue
        starts.append(match.end())
    sentences = []
    for i, start in enumerate(starts):
        end = starts[i + 1] if i + 1 < len(starts) else len(text)
        sentence = text[start:end].strip()
        if sentence:
            sentences.append(sentence)
    return sentences


# Punctuation detached from word edges.  Apostrophes are peeled only on the
# left so that possessive forms like "appeals'" survive as single tokens.
_LEAD_PUNCT = set("\"'`([{.,;:!?“‘…")
_TRAIL_PUNCT = set("\"`)]}.,;:!?”’…")


def _split_chunk(chunk: str, abbrevs: frozenset[str]) -> list[str]:
    lead: list[str] = []
    while chunk and chunk[0] in _LEAD_PUNCT:
        lead.append(chunk[0])
        chunk = chunk[1:]
    trail: list[str] = []
    while chunk:
        last = chunk[-1]
        if last not in _TRAIL_PUNCT:
            break
        if last == "." and (
            chunk.lower() in abbrevs
            or ("." in chunk[:-1] and len(chunk) > 1 and chunk[-2].isalnum())
        ):
            break
        trail.append(last)
        chunk = chunk[:-1]
    tokens = lead
    if chunk:
        tokens.append(chunk)
    tokens.extend(reversed(trail))
    return tokens


def tokenize(sentence: str) -> list[str]:
    """Whitespace split, then peel edge punctuation into separate tokens.

    Clitic possessives stay attached ("appeal's", "appeals'"), hyphens stay
    internal, and abbreviation-like tokens keep their final period.
    """
    abbrevs = abbreviations()
    tokens: list[str] = []
    for chunk in sentence.split():
        tokens.extend(_split_chunk(chunk, abbrevs))
    return tokens


_ATTACH_LEFT = set(".,;:!?)]}”’…")
_ATTACH_RIGHT = set("([{“‘")


def detokenize(tokens: Sequence[str]) -> str:
    """Best-effort inverse of tokenize, used to check losslessness."""
    parts: list[str] = []
    glue_next = False
    for token in tokens:
        if parts and not glue_next and token not in _ATTACH_LEFT and not (
            len(token) == 1 and token in _TRAIL_PUNCT
        ):
            parts.append(" ")
        parts.append(token)
        glue_next = len(token) == 1 and token in _ATTACH_RIGHT
    return "".join(parts)


def filter_sentences(
    sentences: Iterable[Sentence], forms: frozenset[str] | set[str]
) -> list[Sentence]:
    """Keep sentences with at least one token exactly matching a filter form."""
    if not forms:
        raise ValueError("empty filter form set")
    return [s for s in sentences if any(t in forms for t in s.lower)]


def iter_document_sentences(doc: Document) -> Iterator[Sentence]:
    for index, raw in enumerate(split_sentences(doc)):
        tokens = tokenize(raw)
        if tokens:
            yield Sentence.build(doc.id, index, tokens)


def iter_filtered(
    docs: Iterable[Document], forms: frozenset[str] | set[str]
) -> Iterator[Sentence]:
    """Split, tokenize and filter a corpus stream.

    A cheap substring scan rejects most sentences before tokenization; a
    token can only equal a filter form if the form appears as a substring.
    """
    if not forms:
        raise ValueError("empty filter form set")
    form_list = sorted(forms)
    for doc in docs:
        for index, raw in enumerate(split_sentences(doc)):
            lowered = raw.lower()
            if not any(f in lowered for f in form_list):
                continue
            tokens = tokenize(raw)
            if not tokens:
                continue
            sentence = Sentence.build(doc.id, index, tokens)
            if any(t in forms for t in sentence.lower):
                yield sentence


FILTERED_HEADER = "doc_id\tindex\ttokens"


def write_filtered(sentences: Iterable[Sentence], fh: IO[str]) -> int:
    fh.write(FILTERED_HEADER + "\n")
    count = 0
    for s in sentences:
        fh.write(f"{s.doc_id}\t{s.index}\t{' '.join(s.tokens)}\n")
        count += 1
    return count


def read_filtered(fh: IO[str]) -> Iterator[Sentence]:
    header = fh.readline()
    if header.strip() and header.strip() != FILTERED_HEADER:
        raise ValueError("not a filtered-sentence file")
    for line in fh:
        line = line.rstrip("\n")
        if not line:
            continue
        doc_id, index, tokens = line.split("\t", 2)
        yield Sentence.build(doc_id, int(index), tokens.split(" "))
