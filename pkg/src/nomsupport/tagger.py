"""Deterministic part-of-speech tagging.

A lexicon of tag priorities plus a handful of local context rules covers
the one distinction the method lives on: noun versus verb readings of the
target word and its neighbours.  A pre-tagged input path is provided for
users with a stronger tagger.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import IO, Iterable, Optional

from . import morphology
from .errors import MalformedInputError
from .textprep import Sentence


class Tag(str, Enum):
    NOUN = "NOUN"
    PROPN = "PROPN"
    VERB_ACT = "VERB_ACT"
    VERB_PROG = "VERB_PROG"
    VERB_PASTPART = "VERB_PASTPART"
    AUX = "AUX"
    MODAL = "MODAL"
    DET = "DET"
    POSS = "POSS"
    PREP = "PREP"
    ADJ = "ADJ"
    ADV = "ADV"
    PRON = "PRON"
    CONJ = "CONJ"
    NUM = "NUM"
    PUNCT = "PUNCT"
    OTHER = "OTHER"


VERB_TAGS = frozenset({Tag.VERB_ACT, Tag.VERB_PROG, Tag.VERB_PASTPART})

SUBJECT_PRONOUNS = frozenset({"i", "you", "he", "she", "it", "we", "they", "who"})
BE_FORMS = frozenset({"be", "is", "am", "are", "was", "were", "been", "being"})


@dataclass(frozen=True)
class TaggedSentence:
    doc_id: str
    index: int
    entries: tuple[tuple[str, str, Tag], ...]

    @property
    def surfaces(self) -> tuple[str, ...]:
        return tuple(e[0] for e in self.entries)

    @property
    def lower(self) -> tuple[str, ...]:
        return tuple(e[1] for e in self.entries)

    @property
    def tags(self) -> tuple[Tag, ...]:
        return tuple(e[2] for e in self.entries)


class TagLexicon:
    """Word -> ordered possible tags, plus suffix rules for unknowns."""

    def __init__(
        self,
        words: dict[str, tuple[Tag, ...]],
        suffix_rules: list[tuple[str, Tag]] | None = None,
    ):
        if any(not tags for tags in words.values()):
            raise MalformedInputError("lexicon entries need at least one tag")
        self.words = words
        self.suffix_rules = list(suffix_rules or [])

    @classmethod
    def from_lines(
        cls,
        lines: Iterable[str],
        irregulars: Optional[morphology.IrregularTable] = None,
    ) -> "TagLexicon":
        irregulars = irregulars or morphology.default_irregulars()
        explicit: dict[str, tuple[Tag, ...]] = {}
        expandable: list[str] = []
        suffix_rules: list[tuple[str, Tag]] = []
        for num, raw in enumerate(lines, start=1):
            line = raw.split("#", 1)[0].rstrip()
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) not in (2, 3):
                raise MalformedInputError(f"lexicon line {num}: expected 2 or 3 fields")
            word, tag_field = fields[0].strip().lower(), fields[1].strip()
            try:
                if word.startswith("suffix:"):
                    suffix_rules.append((word[len("suffix:"):], Tag(tag_field)))
                    continue
                tags = tuple(Tag(t) for t in tag_field.split(","))
            except ValueError as exc:
                raise MalformedInputError(f"lexicon line {num}: {exc}") from exc
            explicit[word] = tags
            if len(fields) == 3 and fields[2].strip() == "x":
                expandable.append(word)
        words = dict(explicit)
        for word in expandable:
            for form, tags in _inflected_entries(word, explicit[word], irregulars):
                if form not in explicit:
                    words.setdefault(form, tags)
        return cls(words, suffix_rules)

    @classmethod
    def from_file(cls, path) -> "TagLexicon":
        with open(path, encoding="utf-8") as fh:
            return cls.from_lines(fh)


def _inflected_entries(
    word: str, tags: tuple[Tag, ...], irregulars: morphology.IrregularTable
) -> list[tuple[str, tuple[Tag, ...]]]:
    is_verb = Tag.VERB_ACT in tags
    is_noun = Tag.NOUN in tags
    entries: list[tuple[str, tuple[Tag, ...]]] = []
    s_tags = tuple(t for t in tags if t in (Tag.NOUN, Tag.VERB_ACT))
    s_forms = set()
    if is_noun:
        s_forms.add(morphology.plural_form(word, irregulars))
    if is_verb:
        s_forms.add(morphology.third_person(word, irregulars))
    for form in s_forms:
        entries.append((form, s_tags))
    if is_verb:
        past = morphology.past_form(word, irregulars)
        participle = morphology.past_participle_form(word, irregulars)
        if past == participle:
            entries.append((past, (Tag.VERB_ACT, Tag.VERB_PASTPART)))
        else:
            entries.append((past, (Tag.VERB_ACT,)))
            entries.append((participle, (Tag.VERB_PASTPART,)))
        entries.append((morphology.progressive_form(word, irregulars), (Tag.VERB_PROG,)))
    return [(f, t) for f, t in entries if f != word]


@lru_cache(maxsize=None)
def default_lexicon() -> TagLexicon:
    path = resources.files("nomsupport").joinpath("data", "lexicon.txt")
    with path.open(encoding="utf-8") as fh:
        return TagLexicon.from_lines(fh)


def _structural_tag(surface: str, lower: str) -> Optional[Tag]:
    if not any(c.isalnum() for c in surface):
        return Tag.PUNCT
    if any(c.isdigit() for c in surface) and not any(c.isalpha() for c in surface):
        return Tag.NUM
    if lower.endswith("'s") or (len(lower) > 1 and lower.endswith("s'")):
        return Tag.POSS
    return None


def _unknown_tag(
    surface: str,
    lower: str,
    position: int,
    prev_tag: Optional[Tag],
    prev_lower: Optional[str],
    lexicon: TagLexicon,
) -> Tag:
    if lower.endswith("ing") and len(lower) > 4:
        if prev_tag is Tag.AUX and prev_lower in BE_FORMS:
            return Tag.VERB_PROG
        if prev_tag in (Tag.DET, Tag.POSS, Tag.ADJ):
            return Tag.NOUN
        return Tag.VERB_PROG
    if lower.endswith("ed") and len(lower) > 3:
        return Tag.VERB_PASTPART if prev_tag is Tag.AUX else Tag.VERB_ACT
    if lower.endswith(("tion", "ment", "ance", "al")):
        return Tag.NOUN
    for suffix, tag in lexicon.suffix_rules:
        if lower.endswith(suffix):
            return tag
    if surface[:1].isupper() and position > 0:
        return Tag.PROPN
    return Tag.NOUN


def _context_free_tag(surface: str, lower: str, lexicon: TagLexicon) -> Tag:
    structural = _structural_tag(surface, lower)
    if structural is not None:
        return structural
    tags = lexicon.words.get(lower)
    if tags:
        return tags[0]
    return _unknown_tag(surface, lower, 1, None, None, lexicon)


def _disambiguate(
    position: int,
    lower: str,
    candidates: tuple[Tag, ...],
    prev_tag: Optional[Tag],
    prev_lower: Optional[str],
    next_hint: Optional[Tag],
) -> Tag:
    if prev_tag in (Tag.DET, Tag.POSS, Tag.ADJ) and Tag.NOUN in candidates:
        return Tag.NOUN
    if Tag.VERB_ACT in candidates and (
        prev_lower in SUBJECT_PRONOUNS
        or (position == 0 and next_hint in (Tag.DET, Tag.NOUN, Tag.PROPN, Tag.POSS))
    ):
        return Tag.VERB_ACT
    if prev_tag is Tag.AUX and prev_lower in BE_FORMS:
        if lower.endswith("ing") and Tag.VERB_PROG in candidates:
            return Tag.VERB_PROG
        if Tag.VERB_PASTPART in candidates:
            return Tag.VERB_PASTPART
    if prev_lower == "to" and Tag.VERB_ACT in candidates:
        return Tag.VERB_ACT
    return candidates[0]


def tag_sentence(sentence: Sentence, lexicon: Optional[TagLexicon] = None) -> TaggedSentence:
    """Assign exactly one tag per token (lexicon, context rules, suffixes)."""
    lexicon = lexicon or default_lexicon()
    entries: list[tuple[str, str, Tag]] = []
    prev_tag: Optional[Tag] = None
    prev_lower: Optional[str] = None
    n = len(sentence.tokens)
    for i, (surface, lower) in enumerate(zip(sentence.tokens, sentence.lower)):
        tag = _structural_tag(surface, lower)
        if tag is None:
            candidates = lexicon.words.get(lower)
            if candidates is None:
                tag = _unknown_tag(surface, lower, i, prev_tag, prev_lower, lexicon)
            elif len(candidates) == 1:
                tag = candidates[0]
            else:
                next_hint = None
                if i + 1 < n:
                    next_hint = _context_free_tag(
                        sentence.tokens[i + 1], sentence.lower[i + 1], lexicon
                    )
                tag = _disambiguate(i, lower, candidates, prev_tag, prev_lower, next_hint)
        entries.append((surface, lower, tag))
        prev_tag, prev_lower = tag, lower
    return TaggedSentence(sentence.doc_id, sentence.index, tuple(entries))


def tag_sentences(
    sentences: Iterable[Sentence], lexicon: Optional[TagLexicon] = None
) -> list[TaggedSentence]:
    lexicon = lexicon or default_lexicon()
    return [tag_sentence(s, lexicon) for s in sentences]


@lru_cache(maxsize=None)
def default_tagmap() -> dict[str, Tag]:
    path = resources.files("nomsupport").joinpath("data", "tagmap.txt")
    with path.open(encoding="utf-8") as fh:
        return load_tagmap(fh)


def load_tagmap(fh: IO[str]) -> dict[str, Tag]:
    mapping: dict[str, Tag] = {}
    for num, raw in enumerate(fh, start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise MalformedInputError(f"tag map line {num}: expected 2 fields")
        try:
            mapping[fields[0]] = Tag(fields[1])
        except ValueError as exc:
            raise MalformedInputError(f"tag map line {num}: {exc}") from exc
    return mapping


VERTICAL_HEADER = "# nomsupport tagged text: surface<TAB>tag, blank line between sentences"


def write_vertical(sentences: Iterable[TaggedSentence], fh: IO[str]) -> int:
    """Serialize tagged sentences in the vertical one-token-per-line format."""
    fh.write(VERTICAL_HEADER + "\n")
    count = 0
    for s in sentences:
        fh.write(f"#doc\t{s.doc_id}\t{s.index}\n")
        for surface, _, tag in s.entries:
            fh.write(f"{surface}\t{tag.value}\n")
        fh.write("\n")
        count += 1
    return count


def read_pretagged(
    fh: IO[str], tagmap: Optional[dict[str, Tag]] = None
) -> tuple[list[TaggedSentence], int]:
    """Parse vertical tagged text; returns (sentences, skipped-sentence count).

    Internal tag names always map to themselves; other tags go through the
    external mapping and unknown ones become OTHER.  A malformed line makes
    the whole enclosing sentence invalid.
    """
    tagmap = tagmap if tagmap is not None else default_tagmap()
    sentences: list[TaggedSentence] = []
    errors = 0
    doc_id, index = "pretagged", None
    rows: list[tuple[str, str, Tag]] = []
    bad = False
    auto_index = 0

    def flush():
        nonlocal rows, bad, errors, index, auto_index
        if bad:
            errors += 1
        elif rows:
            sent_index = index if index is not None else auto_index
            sentences.append(TaggedSentence(doc_id, sent_index, tuple(rows)))
            auto_index = sent_index + 1
        rows, bad, index = [], False, None

    for raw in fh:
        line = raw.rstrip("\n")
        if not line.strip():
            flush()
            continue
        if line.startswith("#doc\t"):
            fields = line.split("\t")
            if len(fields) >= 3:
                doc_id = fields[1]
                try:
                    index = int(fields[2])
                except ValueError:
                    index = None
            continue
        if line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2 or not fields[0]:
            bad = True
            continue
        surface, ext = fields
        try:
            tag = Tag(ext)
        except ValueError:
            tag = tagmap.get(ext, Tag.OTHER)
        rows.append((surface, surface.lower(), tag))
    flush()
    return sentences, errors


def tag_distribution(
    sentences: Iterable[TaggedSentence], forms: frozenset[str] | set[str]
) -> dict[Tag, int]:
    """Count how often the target surface forms received each tag."""
    counts: dict[Tag, int] = {}
    for sentence in sentences:
        for _, lower, tag in sentence.entries:
            if lower in forms:
                counts[tag] = counts.get(tag, 0) + 1
    return counts


def compare_taggings(
    baseline: Iterable[TaggedSentence], reference: Iterable[TaggedSentence]
) -> tuple[int, int]:
    """Token-level disagreement diagnostic: (tokens compared, disagreements)."""
    compared = disagreements = 0
    for a, b in zip(baseline, reference):
        for (_, _, tag_a), (_, _, tag_b) in zip(a.entries, b.entries):
            compared += 1
            if tag_a is not tag_b:
                disagreements += 1
    return compared, disagreements
