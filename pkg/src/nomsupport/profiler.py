"""Preposition profiles, nominalization selection and support-verb ranking.

The pipeline: expand the word pair into a corpus filter, keep matching
sentences, tag and chunk them, profile the prepositions attached to the
verbal and nominal uses, keep the noun uses whose PP starts with one of
the verb's top prepositions, and rank the main verbs governing those uses.
All tallies are raw frequencies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional

from . import morphology, shallowparse, textprep
from .errors import InsufficientEvidenceError
from .morphology import Lemma
from .shallowparse import Relation
from .tagger import Tag, TagLexicon, TaggedSentence, tag_distribution, tag_sentences
from .textprep import Document

VERBAL = "verbal"
NOMINAL = "nominal"

# Profiles built from fewer relations than this get a low-confidence note.
MIN_EVIDENCE = 5


@dataclass(frozen=True)
class PrepProfile:
    target: Lemma
    role: str
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def sorted_items(self) -> list[tuple[str, int]]:
        return sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))


class TopPreps(NamedTuple):
    preps: tuple[str, ...]
    complete: bool  # False when the profile had fewer than k prepositions


@dataclass(frozen=True)
class NomSelection:
    noun: Lemma
    preps: tuple[str, ...]
    instances: tuple[tuple[str, int, str], ...]  # (doc_id, sent_index, prep)

    @property
    def count(self) -> int:
        return len(self.instances)


@dataclass(frozen=True)
class SupportVerbTable:
    noun: Lemma
    mode: str  # "naive" | "filtered"
    rows: tuple[tuple[str, int], ...]
    preps: tuple[str, ...] = ()
    selection_count: int = 0

    def top(self) -> Optional[str]:
        return self.rows[0][0] if self.rows else None

    def as_dict(self) -> dict[str, int]:
        return dict(self.rows)


@dataclass(frozen=True)
class OverlapTable:
    verb: Lemma
    noun: Lemma
    rows: tuple[tuple[str, int, int], ...]  # (object, verb-frame count, of-genitive count)


@dataclass(frozen=True)
class DiscoveryResult:
    verb: Lemma
    profile: PrepProfile
    preps: tuple[str, ...]
    tally: tuple[tuple[str, int], ...]  # noun lemma -> frequency, sorted
    ranked: tuple[tuple[str, float, int], ...]

    def best(self) -> Optional[str]:
        return self.ranked[0][0] if self.ranked else None


@dataclass(frozen=True)
class NominalizationReport:
    verb: Lemma
    noun: Lemma
    sentence_count: int
    tag_dist: dict[Tag, int]
    verbal_profile: PrepProfile
    nominal_profile: PrepProfile
    preps: tuple[str, ...]
    preps_complete: bool
    selection: NomSelection
    naive: SupportVerbTable
    filtered: SupportVerbTable
    overlap: OverlapTable
    warnings: tuple[str, ...]

    def summary_line(self) -> str:
        top = self.filtered.top() or "-"
        count = self.filtered.rows[0][1] if self.filtered.rows else 0
        return (
            f"{self.verb.text}\t{self.noun.text}\t{','.join(self.preps)}\t{top}\t{count}"
        )


def _tally_sorted(counts: dict[str, int]) -> tuple[tuple[str, int], ...]:
    return tuple(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])))


def verb_prep_profile(relations: Iterable[Relation], verb: Lemma) -> PrepProfile:
    """Frequencies of prepositions heading PPs after verbal uses of `verb`."""
    counts: dict[str, int] = {}
    for r in relations:
        if r.kind == shallowparse.VPP and r.governor == verb.text and r.prep != "by":
            counts[r.prep] = counts.get(r.prep, 0) + 1
    return PrepProfile(verb, VERBAL, counts)


def noun_prep_profile(relations: Iterable[Relation], noun: Lemma) -> PrepProfile:
    """Frequencies of prepositions heading PPs after nominal uses of `noun`."""
    counts: dict[str, int] = {}
    for r in relations:
        if r.kind == shallowparse.NPP and r.governor == noun.text:
            counts[r.prep] = counts.get(r.prep, 0) + 1
    return PrepProfile(noun, NOMINAL, counts)


def top_preps(profile: PrepProfile, k: int = 3) -> TopPreps:
    """The k most frequent prepositions, ties broken lexicographically."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if not profile.counts:
        raise InsufficientEvidenceError(
            "profile", f"empty {profile.role} preposition profile for {profile.target.text!r}"
        )
    ranked = [prep for prep, _ in profile.sorted_items()]
    return TopPreps(tuple(ranked[:k]), complete=len(ranked) >= k)


def select_nominalizations(
    relations: Iterable[Relation], noun: Lemma, preps: Iterable[str]
) -> NomSelection:
    """Noun uses followed by a PP headed by one of the chosen prepositions."""
    chosen = tuple(preps)
    wanted = set(chosen)
    instances = tuple(
        (r.doc_id, r.sent_index, r.prep)
        for r in relations
        if r.kind == shallowparse.NPP and r.governor == noun.text and r.prep in wanted
    )
    return NomSelection(noun, chosen, instances)


def support_verbs(relations: Iterable[Relation], sel: NomSelection) -> SupportVerbTable:
    """Rank verbs taking a selected nominalization as their direct object.

    The direct object NP must be the very NP that carries the selected PP
    (same sentence, same head token), so a qualifying PP on one occurrence
    of the noun cannot license a verb governing another occurrence.
    """
    relations = list(relations)
    wanted = set(sel.preps)
    selected_nps = {
        (r.doc_id, r.sent_index, r.gov_index)
        for r in relations
        if r.kind == shallowparse.NPP and r.governor == sel.noun.text and r.prep in wanted
    }
    counts: dict[str, int] = {}
    for r in relations:
        if (
            r.kind == shallowparse.DOBJ
            and r.dependent == sel.noun.text
            and (r.doc_id, r.sent_index, r.dep_index) in selected_nps
        ):
            counts[r.governor] = counts.get(r.governor, 0) + 1
    return SupportVerbTable(
        sel.noun, "filtered", _tally_sorted(counts), sel.preps, sel.count
    )


def naive_dobj_table(relations: Iterable[Relation], noun: Lemma) -> SupportVerbTable:
    """The unfiltered baseline: every verb of which the noun is direct object."""
    counts: dict[str, int] = {}
    for r in relations:
        if r.kind == shallowparse.DOBJ and r.dependent == noun.text:
            counts[r.governor] = counts.get(r.governor, 0) + 1
    return SupportVerbTable(noun, "naive", _tally_sorted(counts))


def argument_overlap(
    relations: Iterable[Relation], verb: Lemma, noun: Lemma
) -> OverlapTable:
    """Objects of the verb joined with of-genitives of the noun (diagnostic)."""
    dobj: dict[str, int] = {}
    ngen: dict[str, int] = {}
    for r in relations:
        if r.kind == shallowparse.DOBJ and r.governor == verb.text:
            dobj[r.dependent] = dobj.get(r.dependent, 0) + 1
        elif r.kind == shallowparse.NGEN and r.governor == noun.text:
            ngen[r.dependent] = ngen.get(r.dependent, 0) + 1
    rows = [
        (obj, dobj.get(obj, 0), ngen.get(obj, 0))
        for obj in set(dobj) | set(ngen)
    ]
    rows.sort(key=lambda row: (-row[1], -row[2], row[0]))
    return OverlapTable(verb, noun, tuple(rows))


def pair_filter_forms(
    verb: Lemma, noun: Lemma, irregulars: Optional[morphology.IrregularTable] = None
) -> frozenset[str]:
    return (
        morphology.expand_verb(verb, irregulars).forms
        | morphology.expand_noun(noun, irregulars).forms
    )


def run_pair(
    docs: Iterable[Document],
    verb: Lemma,
    noun: Lemma,
    *,
    lexicon: Optional[TagLexicon] = None,
    irregulars: Optional[morphology.IrregularTable] = None,
    k: int = 3,
    vpp_window: int = 1,
    require_noun_prep: bool = False,
) -> NominalizationReport:
    """Run the whole verb/nominalization pipeline over a corpus in memory."""
    irregulars = irregulars or morphology.default_irregulars()
    forms = pair_filter_forms(verb, noun, irregulars)
    sentences = list(textprep.iter_filtered(docs, forms))
    if not sentences:
        raise InsufficientEvidenceError(
            "filter", f"no sentence contains a form of {verb.text!r}/{noun.text!r}"
        )
    tagged = tag_sentences(sentences, lexicon)
    relations = shallowparse.parse_sentences(tagged, irregulars, vpp_window)
    return build_report(
        tagged,
        relations,
        verb,
        noun,
        forms=forms,
        k=k,
        require_noun_prep=require_noun_prep,
    )


def build_report(
    tagged: list[TaggedSentence],
    relations: list[Relation],
    verb: Lemma,
    noun: Lemma,
    *,
    forms: Optional[frozenset[str]] = None,
    k: int = 3,
    require_noun_prep: bool = False,
) -> NominalizationReport:
    """Assemble the report from tagged sentences and extracted relations."""
    forms = forms or pair_filter_forms(verb, noun)
    dist = tag_distribution(tagged, forms)
    verbal = verb_prep_profile(relations, verb)
    nominal = noun_prep_profile(relations, noun)
    warnings: list[str] = []
    for profile in (verbal, nominal):
        if 0 < profile.total < MIN_EVIDENCE:
            warnings.append(
                f"low-confidence {profile.role} profile: "
                f"only {profile.total} relations"
            )
    chosen = top_preps(verbal, k)
    preps = chosen.preps
    if not chosen.complete:
        warnings.append(
            f"verbal profile has fewer than {k} prepositions; using {len(preps)}"
        )
    if require_noun_prep:
        preps = tuple(p for p in preps if p in nominal.counts)
        if not preps:
            raise InsufficientEvidenceError(
                "select", "no verbal preposition also follows the noun"
            )
    selection = select_nominalizations(relations, noun, preps)
    filtered = support_verbs(relations, selection)
    naive = naive_dobj_table(relations, noun)
    overlap = argument_overlap(relations, verb, noun)
    return NominalizationReport(
        verb=verb,
        noun=noun,
        sentence_count=len(tagged),
        tag_dist=dist,
        verbal_profile=verbal,
        nominal_profile=nominal,
        preps=preps,
        preps_complete=chosen.complete,
        selection=selection,
        naive=naive,
        filtered=filtered,
        overlap=overlap,
        warnings=tuple(warnings),
    )


def discover_nominalization(
    docs: Iterable[Document],
    verb: Lemma,
    *,
    lexicon: Optional[TagLexicon] = None,
    irregulars: Optional[morphology.IrregularTable] = None,
    k: int = 3,
    threshold: float = 0.5,
    vpp_window: int = 1,
) -> DiscoveryResult:
    """Find likely nominalized forms of a verb from the corpus alone.

    Documents mentioning the verb are kept; the verb's top prepositions
    are computed from them; every noun directly preceding one of those
    prepositions anywhere in the same documents is tallied and the tallies
    are ranked by morphological closeness to the verb.  Buffers the corpus
    in memory.
    """
    irregulars = irregulars or morphology.default_irregulars()
    forms = morphology.expand_verb(verb, irregulars).forms
    kept: list[tuple[Document, list[textprep.Sentence]]] = []
    verb_sentences: list[textprep.Sentence] = []
    for doc in docs:
        matched = list(textprep.iter_filtered([doc], forms))
        if matched:
            kept.append((doc, matched))
            verb_sentences.extend(matched)
    if not kept:
        raise InsufficientEvidenceError(
            "filter", f"no document contains a form of {verb.text!r}"
        )
    tagged = tag_sentences(verb_sentences, lexicon)
    relations = shallowparse.parse_sentences(tagged, irregulars, vpp_window)
    profile = verb_prep_profile(relations, verb)
    preps = top_preps(profile, k).preps
    wanted = set(preps)

    tally: dict[str, int] = {}
    for doc, _ in kept:
        doc_sentences = list(textprep.iter_document_sentences(doc))
        for ts in tag_sentences(doc_sentences, lexicon):
            entries = ts.entries
            for i in range(len(entries) - 1):
                if entries[i][2] is Tag.NOUN and entries[i + 1][1] in wanted:
                    lemma = morphology.lemmatize(entries[i][1], morphology.NOUN, irregulars)
                    key = lemma.text if lemma is not None else entries[i][1]
                    tally[key] = tally.get(key, 0) + 1
    tally_rows = _tally_sorted(tally)
    ranked: tuple[tuple[str, float, int], ...] = ()
    if tally_rows:
        ranked = tuple(
            morphology.pick_nominalization(verb, list(tally_rows), threshold)
        )
    return DiscoveryResult(verb, profile, preps, tally_rows, ranked)


REPORT_HEADER = "section\ta\tb\tc\td"

_TAG_ORDER = list(Tag)


def render_report(report: NominalizationReport) -> str:
    """Deterministic TSV rendering; ends with the one-line summary."""
    lines = [REPORT_HEADER]

    def row(section: str, *cells):
        padded = list(cells) + [""] * (4 - len(cells))
        lines.append(section + "\t" + "\t".join(str(c) for c in padded))

    row("run", "verb", report.verb.text)
    row("run", "noun", report.noun.text)
    row("run", "sentences", report.sentence_count)
    for tag in _TAG_ORDER:
        if tag in report.tag_dist:
            row("tag_distribution", tag.value, report.tag_dist[tag])
    for prep, count in report.verbal_profile.sorted_items():
        row("verbal_profile", prep, count)
    for prep, count in report.nominal_profile.sorted_items():
        row("nominal_profile", prep, count)
    row("selection", "preps", ",".join(report.preps))
    row("selection", "count", report.selection.count)
    for verb, count in report.naive.rows:
        row("naive", verb, count)
    for verb, count in report.filtered.rows:
        row("filtered", verb, count)
    for obj, dobj_count, ngen_count in report.overlap.rows:
        row("overlap", obj, dobj_count, ngen_count)
    for warning in report.warnings:
        row("warning", warning)
    lines.append("summary\t" + report.summary_line())
    return "\n".join(lines) + "\n"


def render_discovery(result: DiscoveryResult) -> str:
    lines = [REPORT_HEADER]

    def row(section: str, *cells):
        padded = list(cells) + [""] * (4 - len(cells))
        lines.append(section + "\t" + "\t".join(str(c) for c in padded))

    row("run", "verb", result.verb.text)
    for prep, count in result.profile.sorted_items():
        row("verbal_profile", prep, count)
    row("selection", "preps", ",".join(result.preps))
    for noun, count in result.tally:
        row("tally", noun, count)
    for noun, similarity, count in result.ranked:
        row("ranked", noun, f"{similarity:.4f}", count)
    best = result.best() or "-"
    lines.append(f"summary\t{result.verb.text}\t{best}")
    return "\n".join(lines) + "\n"
