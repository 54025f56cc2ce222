"""English inflection generation, lemmatization and verb/noun relatedness.

The rules here are deliberately small: suffix rules for the regular
paradigms plus a shipped table of irregular forms.  They only need to be
good enough to expand a target word pair into a corpus filter and to map
corpus tokens back to citation forms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable, NamedTuple, Optional

from .errors import MalformedInputError

VERB = "verb"
NOUN = "noun"

VOWELS = "aeiou"

_LEMMA_RE = re.compile(r"[a-z'-]+")


def _data_path(name: str):
    return resources.files("nomsupport").joinpath("data", name)


def _read_wordlist(name: str) -> frozenset[str]:
    words = set()
    with _data_path(name).open(encoding="utf-8") as fh:
        for line in fh:
            word = line.split("#", 1)[0].strip()
            if word:
                words.add(word)
    return frozenset(words)


@lru_cache(maxsize=None)
def verb_lemma_list() -> frozenset[str]:
    return _read_wordlist("verb_lemmas.txt")


@lru_cache(maxsize=None)
def noun_lemma_list() -> frozenset[str]:
    return _read_wordlist("noun_lemmas.txt")


@lru_cache(maxsize=None)
def doubling_list() -> frozenset[str]:
    return _read_wordlist("doubling.txt")


@dataclass(frozen=True)
class Lemma:
    """A citation form with its part of speech (verb or noun)."""

    text: str
    pos: str

    def __post_init__(self):
        if self.pos not in (VERB, NOUN):
            raise MalformedInputError(f"unknown part of speech: {self.pos!r}")
        text = self.text.lower()
        if not text or not _LEMMA_RE.fullmatch(text) or not any(c.isalpha() for c in text):
            raise MalformedInputError(f"malformed lemma: {self.text!r}")
        object.__setattr__(self, "text", text)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class WordFormSet:
    """The surface forms of a lemma, used as a corpus filter."""

    lemma: Lemma
    forms: frozenset[str]

    def __post_init__(self):
        if not self.forms:
            raise MalformedInputError("empty form set")
        if self.lemma.text not in self.forms:
            raise MalformedInputError("form set must contain the citation form")
        if any(f != f.lower() for f in self.forms):
            raise MalformedInputError("forms must be lowercase")

    def __contains__(self, form: str) -> bool:
        return form in self.forms


class VerbOverride(NamedTuple):
    past: tuple[str, ...]
    past_participle: tuple[str, ...]
    third_person: tuple[str, ...]
    progressive: tuple[str, ...]


class IrregularTable:
    """Irregular inflections keyed by lemma, with a reverse form index."""

    def __init__(self, verbs: dict[str, VerbOverride], nouns: dict[str, tuple[str, ...]]):
        self.verbs = verbs
        self.nouns = nouns
        self._verb_reverse: dict[str, str] = {}
        for lemma, override in verbs.items():
            for slot in override:
                for form in slot:
                    self._verb_reverse.setdefault(form, lemma)
        self._noun_reverse: dict[str, str] = {}
        for lemma, plurals in nouns.items():
            for form in plurals:
                self._noun_reverse.setdefault(form, lemma)

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "IrregularTable":
        verbs: dict[str, VerbOverride] = {}
        nouns: dict[str, tuple[str, ...]] = {}
        for num, raw in enumerate(lines, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise MalformedInputError(f"irregular table line {num}: expected 3 fields")
            lemma, pos, spec = fields
            slots = [
                tuple(alt for alt in slot.split("/") if alt) if slot != "-" else ()
                for slot in spec.split(",")
            ]
            if any(not alt for slot in slots for alt in slot):
                raise MalformedInputError(f"irregular table line {num}: empty form")
            if pos == VERB:
                if len(slots) != 4:
                    raise MalformedInputError(
                        f"irregular table line {num}: verbs need 4 slots"
                    )
                verbs[lemma] = VerbOverride(*slots)
            elif pos == NOUN:
                if len(slots) != 1:
                    raise MalformedInputError(
                        f"irregular table line {num}: nouns need 1 slot"
                    )
                nouns[lemma] = slots[0]
            else:
                raise MalformedInputError(f"irregular table line {num}: bad pos {pos!r}")
        return cls(verbs, nouns)

    @classmethod
    def from_file(cls, path) -> "IrregularTable":
        with open(path, encoding="utf-8") as fh:
            return cls.from_lines(fh)

    def verb_override(self, lemma: str) -> VerbOverride:
        return self.verbs.get(lemma, VerbOverride((), (), (), ()))

    def noun_plural(self, lemma: str) -> tuple[str, ...]:
        return self.nouns.get(lemma, ())

    def lemma_of(self, form: str, pos: str) -> Optional[str]:
        if pos == VERB:
            return self._verb_reverse.get(form)
        return self._noun_reverse.get(form)

    def known_lemmas(self, pos: str) -> frozenset[str]:
        return frozenset(self.verbs if pos == VERB else self.nouns)


@lru_cache(maxsize=None)
def default_irregulars() -> IrregularTable:
    with _data_path("irregulars.txt").open(encoding="utf-8") as fh:
        return IrregularTable.from_lines(fh)


def _vowel_groups(word: str) -> int:
    groups = 0
    in_group = False
    for ch in word:
        if ch in VOWELS:
            if not in_group:
                groups += 1
            in_group = True
        else:
            in_group = False
    return groups


def _doubles_final(base: str) -> bool:
    # One-syllable consonant-vowel-consonant spellings double automatically
    # (stop -> stopped); longer stressed-final verbs come from the data file.
    if base in doubling_list():
        return True
    if len(base) < 3 or _vowel_groups(base) != 1:
        return False
    return (
        base[-1].isalpha()
        and base[-1] not in VOWELS + "wxy"
        and base[-2] in VOWELS
        and base[-3] not in VOWELS
    )


def third_person(base: str, irregulars: Optional[IrregularTable] = None) -> str:
    irregulars = irregulars or default_irregulars()
    override = irregulars.verb_override(base).third_person
    if override:
        return override[0]
    return _plural_like(base)


def _plural_like(base: str) -> str:
    if base.endswith("y") and len(base) > 1 and base[-2] not in VOWELS:
        return base[:-1] + "ies"
    if base.endswith(("s", "x", "z", "ch", "sh", "o")):
        return base + "es"
    return base + "s"


def past_form(base: str, irregulars: Optional[IrregularTable] = None) -> str:
    irregulars = irregulars or default_irregulars()
    override = irregulars.verb_override(base).past
    if override:
        return override[0]
    return _regular_past(base)


def _regular_past(base: str) -> str:
    if base.endswith("e"):
        return base + "d"
    if base.endswith("y") and len(base) > 1 and base[-2] not in VOWELS:
        return base[:-1] + "ied"
    if _doubles_final(base):
        return base + base[-1] + "ed"
    return base + "ed"


def past_participle_form(base: str, irregulars: Optional[IrregularTable] = None) -> str:
    irregulars = irregulars or default_irregulars()
    override = irregulars.verb_override(base).past_participle
    if override:
        return override[0]
    return _regular_past(base)


def progressive_form(base: str, irregulars: Optional[IrregularTable] = None) -> str:
    irregulars = irregulars or default_irregulars()
    override = irregulars.verb_override(base).progressive
    if override:
        return override[0]
    return _regular_progressive(base)


def _regular_progressive(base: str) -> str:
    if base.endswith("ie"):
        return base[:-2] + "ying"
    if base.endswith("e") and not base.endswith("ee"):
        return base[:-1] + "ing"
    if _doubles_final(base):
        return base + base[-1] + "ing"
    return base + "ing"


def plural_form(base: str, irregulars: Optional[IrregularTable] = None) -> str:
    irregulars = irregulars or default_irregulars()
    override = irregulars.noun_plural(base)
    if override:
        return override[0]
    return _plural_like(base)


def _possessive(form: str) -> str:
    return form + "'" if form.endswith("s") else form + "'s"


def expand_verb(lemma: Lemma, irregulars: Optional[IrregularTable] = None) -> WordFormSet:
    """All inflected forms of a verb lemma: base, -s, -ed, participle, -ing."""
    if lemma.pos != VERB:
        raise MalformedInputError(f"expand_verb needs a verb lemma, got {lemma.pos}")
    irregulars = irregulars or default_irregulars()
    override = irregulars.verb_override(lemma.text)
    forms = {lemma.text}
    forms.update(override.third_person or (_plural_like(lemma.text),))
    forms.update(override.past or (_regular_past(lemma.text),))
    forms.update(override.past_participle or (_regular_past(lemma.text),))
    forms.update(override.progressive or (_regular_progressive(lemma.text),))
    return WordFormSet(lemma, frozenset(forms))


def expand_noun(lemma: Lemma, irregulars: Optional[IrregularTable] = None) -> WordFormSet:
    """Singular, plural and the two possessive variants of a noun lemma."""
    if lemma.pos != NOUN:
        raise MalformedInputError(f"expand_noun needs a noun lemma, got {lemma.pos}")
    irregulars = irregulars or default_irregulars()
    plurals = irregulars.noun_plural(lemma.text) or (_plural_like(lemma.text),)
    forms = {lemma.text, _possessive(lemma.text)}
    for plural in plurals:
        forms.add(plural)
        forms.add(_possessive(plural))
    return WordFormSet(lemma, frozenset(forms))


def _verb_candidates(form: str) -> list[str]:
    candidates = [form]
    if form.endswith("ying") and len(form) > 4:
        candidates.append(form[:-4] + "ie")
    if form.endswith("ing") and len(form) > 4:
        stem = form[:-3]
        candidates.extend([stem, stem + "e"])
        if len(stem) > 2 and stem[-1] == stem[-2]:
            candidates.append(stem[:-1])
    if form.endswith("ied") and len(form) > 3:
        candidates.append(form[:-3] + "y")
    if form.endswith("ed") and len(form) > 3:
        stem = form[:-2]
        candidates.extend([stem, stem + "e"])
        if len(stem) > 2 and stem[-1] == stem[-2]:
            candidates.append(stem[:-1])
    if form.endswith("ies") and len(form) > 3:
        candidates.append(form[:-3] + "y")
    if form.endswith("es") and len(form) > 2:
        candidates.append(form[:-2])
    if form.endswith("s") and not form.endswith("ss") and len(form) > 1:
        candidates.append(form[:-1])
    return candidates


def _noun_candidates(form: str) -> list[str]:
    base = form
    if base.endswith("'s"):
        base = base[:-2]
    elif base.endswith("'"):
        base = base[:-1]
    candidates = [base]
    if base.endswith("ies") and len(base) > 3:
        candidates.append(base[:-3] + "y")
    if base.endswith("ves") and len(base) > 3:
        candidates.extend([base[:-3] + "f", base[:-3] + "fe"])
    if base.endswith("es") and len(base) > 2:
        candidates.append(base[:-2])
    if base.endswith("s") and not base.endswith("ss") and len(base) > 1:
        candidates.append(base[:-1])
    return candidates


def lemmatize(
    form: str,
    pos: str,
    irregulars: Optional[IrregularTable] = None,
    known: Optional[frozenset[str]] = None,
) -> Optional[Lemma]:
    """Invert the expansion rules; None when no rule yields a valid lemma.

    Candidate un-suffixations are validated by re-expansion.  Candidates
    found in the shipped lemma wordlists win over made-up stems so that
    e-deletion and consonant doubling are undone only when they lead to a
    real citation form ("proposing" -> "propose", not "propos").
    """
    form = form.lower()
    if pos not in (VERB, NOUN):
        raise MalformedInputError(f"unknown part of speech: {pos!r}")
    if not _LEMMA_RE.fullmatch(form or ""):
        return None
    irregulars = irregulars or default_irregulars()
    if known is None:
        known = verb_lemma_list() if pos == VERB else noun_lemma_list()
    known = known | irregulars.known_lemmas(pos)

    if form in known:
        return Lemma(form, pos)
    irregular = irregulars.lemma_of(form, pos)
    if irregular is not None:
        return Lemma(irregular, pos)
    if pos == NOUN and (form.endswith("'s") or form.endswith("'")):
        stripped = form[:-2] if form.endswith("'s") else form[:-1]
        irregular = irregulars.lemma_of(stripped, pos)
        if irregular is not None:
            return Lemma(irregular, pos)

    raw = _verb_candidates(form) if pos == VERB else _noun_candidates(form)
    expand = expand_verb if pos == VERB else expand_noun
    valid = []
    seen = set()
    for cand in raw:
        if cand in seen or not cand or not any(c.isalpha() for c in cand):
            continue
        seen.add(cand)
        try:
            lemma = Lemma(cand, pos)
        except MalformedInputError:
            continue
        if form in expand(lemma, irregulars).forms:
            valid.append(lemma)
    if not valid:
        return None
    in_list = [l for l in valid if l.text in known]
    pool = in_list or valid
    return min(pool, key=lambda l: (len(l.text), l.text))


def _strip_final_e(s: str) -> str:
    return s[:-1] if s.endswith("e") else s


def prefix_similarity(a: str, b: str) -> float:
    """Shared-prefix ratio of two stems (final -e stripped before comparing)."""
    a = _strip_final_e(a.lower())
    b = _strip_final_e(b.lower())
    if not a or not b:
        raise MalformedInputError("similarity needs two non-empty strings")
    common = 0
    for x, y in zip(a, b):
        if x != y:
            break
        common += 1
    return common / max(len(a), len(b))


def morph_similarity(verb: Lemma, noun: str) -> float:
    """Score in [0,1] for how plausibly `noun` is a nominalization of `verb`."""
    if verb.pos != VERB:
        raise MalformedInputError("morph_similarity needs a verb lemma")
    return prefix_similarity(verb.text, noun)


def pick_nominalization(
    verb: Lemma,
    candidates: list[tuple[str, int]],
    threshold: float = 0.5,
) -> list[tuple[str, float, int]]:
    """Rank candidate nouns by morphological closeness to the verb.

    Candidates scoring below `threshold` are dropped; an empty result means
    discovery failed.  Ties on similarity fall back to frequency, then to
    the noun itself, so the ranking does not depend on input order.
    """
    if not candidates:
        raise MalformedInputError("pick_nominalization needs at least one candidate")
    scored = [
        (noun, morph_similarity(verb, noun), freq)
        for noun, freq in candidates
        if morph_similarity(verb, noun) >= threshold
    ]
    scored.sort(key=lambda row: (-row[1], -row[2], row[0]))
    return scored
