"""Surface chunking and local relation extraction.

Longest-match rules find noun phrases, verb groups and prepositional
phrases; adjacency rules between chunks then read off the four relations
the profiler consumes: direct objects, verb- and noun-attached PPs, and
of-genitives.  Passive verb groups contribute no object or PP evidence,
and PPs headed by "by" after a verb are discarded as probable
passivizations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Optional

from . import morphology
from .tagger import Tag, TaggedSentence

NP, VG, PP = "NP", "VG", "PP"
DOBJ, VPP, NPP, NGEN = "DOBJ", "VPP", "NPP", "NGEN"

ACTIVE, PASSIVE, PROGRESSIVE, INFINITIVAL = (
    "active", "passive", "progressive", "infinitival",
)

_NP_OPEN = frozenset({Tag.DET, Tag.POSS})
_NP_BODY = frozenset({Tag.ADJ, Tag.NOUN, Tag.PROPN, Tag.NUM})
_NP_HEAD = frozenset({Tag.NOUN, Tag.PROPN})
_VG_OPEN = frozenset({Tag.MODAL, Tag.AUX})
_VERBS = frozenset({Tag.VERB_ACT, Tag.VERB_PROG, Tag.VERB_PASTPART})

_BE = frozenset({"be", "is", "am", "are", "was", "were", "been", "being"})


@dataclass(frozen=True)
class Chunk:
    kind: str
    start: int
    end: int  # exclusive
    head_index: int
    head_lemma: str
    voice: Optional[str] = None  # VG only
    prep: Optional[str] = None  # PP only
    inner_head_index: Optional[int] = None  # PP: head of the embedded NP
    inner_head_lemma: Optional[str] = None


@dataclass(frozen=True)
class Relation:
    kind: str
    governor: str
    prep: str  # empty for DOBJ and NGEN
    dependent: str
    doc_id: str
    sent_index: int
    gov_index: int
    dep_index: int

    def signature(self) -> tuple[str, str, str, str]:
        return (self.kind, self.governor, self.prep, self.dependent)


def _head_lemma(surface: str, tag: Tag, irregulars: morphology.IrregularTable) -> str:
    lower = surface.lower()
    if tag is Tag.PROPN:
        return lower
    pos = morphology.VERB if tag in _VERBS else morphology.NOUN
    lemma = morphology.lemmatize(lower, pos, irregulars)
    return lemma.text if lemma is not None else lower


def _try_np(tags: tuple[Tag, ...], start: int) -> Optional[tuple[int, int]]:
    """Return (end, head_index) for an NP starting exactly at `start`."""
    i = start
    if i < len(tags) and tags[i] in _NP_OPEN:
        i += 1
    head = -1
    while i < len(tags) and tags[i] in _NP_BODY:
        if tags[i] in _NP_HEAD:
            head = i
        i += 1
    if head < 0:
        return None
    return head + 1, head


def _try_vg(tags: tuple[Tag, ...], start: int) -> Optional[tuple[int, int]]:
    i = start
    while i < len(tags) and tags[i] in _VG_OPEN:
        i += 1
    while i < len(tags) and tags[i] is Tag.ADV:
        i += 1
    if i < len(tags) and tags[i] in _VERBS:
        return i + 1, i
    return None


def _vg_voice(ts: TaggedSentence, start: int, head: int) -> str:
    had_be = any(
        ts.entries[j][2] is Tag.AUX and ts.entries[j][1] in _BE
        for j in range(start, head)
    )
    head_tag = ts.entries[head][2]
    if head_tag is Tag.VERB_PASTPART and had_be:
        return PASSIVE
    if head_tag is Tag.VERB_PROG:
        return ACTIVE if had_be else PROGRESSIVE
    if start > 0 and ts.entries[start - 1][1] == "to":
        return INFINITIVAL
    return ACTIVE


def chunk(
    ts: TaggedSentence, irregulars: Optional[morphology.IrregularTable] = None
) -> list[Chunk]:
    """Longest-match left-to-right chunking into NPs, VGs and PPs."""
    irregulars = irregulars or morphology.default_irregulars()
    tags = ts.tags
    chunks: list[Chunk] = []
    i = 0
    n = len(tags)
    while i < n:
        tag = tags[i]
        if tag is Tag.PREP:
            np = _try_np(tags, i + 1)
            if np is not None:
                end, head = np
                chunks.append(
                    Chunk(
                        PP, i, end,
                        head_index=head,
                        head_lemma=_head_lemma(ts.entries[head][0], tags[head], irregulars),
                        prep=ts.entries[i][1],
                        inner_head_index=head,
                        inner_head_lemma=_head_lemma(
                            ts.entries[head][0], tags[head], irregulars
                        ),
                    )
                )
                i = end
                continue
            i += 1
            continue
        if tag in _NP_OPEN or tag in _NP_BODY:
            np = _try_np(tags, i)
            if np is not None:
                end, head = np
                chunks.append(
                    Chunk(
                        NP, i, end,
                        head_index=head,
                        head_lemma=_head_lemma(ts.entries[head][0], tags[head], irregulars),
                    )
                )
                i = end
                continue
            i += 1
            continue
        if tag in _VG_OPEN or tag is Tag.ADV or tag in _VERBS:
            vg = _try_vg(tags, i)
            if vg is not None:
                end, head = vg
                chunks.append(
                    Chunk(
                        VG, i, end,
                        head_index=head,
                        head_lemma=_head_lemma(ts.entries[head][0], tags[head], irregulars),
                        voice=_vg_voice(ts, i, head),
                    )
                )
                i = end
                continue
            i += 1
            continue
        i += 1
    return chunks


def extract_relations(
    chunks: list[Chunk], ts: TaggedSentence, vpp_window: int = 1
) -> list[Relation]:
    """Read relations off the chunk sequence.

    DOBJ: NP right after an active/infinitival VG (stray adverbs allowed).
    VPP: first PP after a non-passive VG, with at most `vpp_window`
    object NPs in between; "by" PPs are dropped.  NPP: PP strictly
    adjacent to a top-level NP; a PP chain attaches each later PP to the
    NP embedded in the one before.  NGEN doubles every of-NPP.
    """
    tags = ts.tags
    n = len(tags)
    covered: dict[int, Chunk] = {}
    for c in chunks:
        for pos in range(c.start, c.end):
            covered[pos] = c
    by_start = {c.start: c for c in chunks}
    by_end = {c.end: c for c in chunks}

    def next_chunk(after: Chunk) -> Optional[Chunk]:
        pos = after.end
        while pos < n:
            if pos in by_start:
                return by_start[pos]
            if pos in covered:  # inside some chunk without being its start
                return None
            if tags[pos] is Tag.ADV:
                pos += 1
                continue
            return None
        return None

    def make(kind, gov_chunk_head, gov_lemma, prep, dep_lemma, dep_index):
        return Relation(
            kind, gov_lemma, prep, dep_lemma,
            ts.doc_id, ts.index, gov_chunk_head, dep_index,
        )

    relations: list[Relation] = []
    for c in chunks:
        if c.kind == VG and c.voice != PASSIVE:
            following = next_chunk(c)
            if (
                following is not None
                and following.kind == NP
                and c.voice in (ACTIVE, INFINITIVAL)
            ):
                relations.append(
                    make(DOBJ, c.head_index, c.head_lemma, "",
                         following.head_lemma, following.head_index)
                )
            # scan for the verb-attached PP, skipping the object NP(s)
            walker = following
            skipped = 0
            while walker is not None and walker.kind == NP and skipped < vpp_window:
                walker = next_chunk(walker)
                skipped += 1
            if walker is not None and walker.kind == PP and walker.prep != "by":
                relations.append(
                    make(VPP, c.head_index, c.head_lemma, walker.prep,
                         walker.inner_head_lemma, walker.inner_head_index)
                )
        elif c.kind == PP:
            before = by_end.get(c.start)
            gov = None
            if before is not None and before.kind == NP:
                gov = (before.head_index, before.head_lemma)
            elif before is not None and before.kind == PP:
                gov = (before.inner_head_index, before.inner_head_lemma)
            if gov is not None:
                relations.append(
                    make(NPP, gov[0], gov[1], c.prep,
                         c.inner_head_lemma, c.inner_head_index)
                )
                if c.prep == "of":
                    relations.append(
                        make(NGEN, gov[0], gov[1], "",
                             c.inner_head_lemma, c.inner_head_index)
                    )
    return relations


def parse_sentence(
    ts: TaggedSentence,
    irregulars: Optional[morphology.IrregularTable] = None,
    vpp_window: int = 1,
) -> list[Relation]:
    return extract_relations(chunk(ts, irregulars), ts, vpp_window)


def parse_sentences(
    sentences: Iterable[TaggedSentence],
    irregulars: Optional[morphology.IrregularTable] = None,
    vpp_window: int = 1,
) -> list[Relation]:
    irregulars = irregulars or morphology.default_irregulars()
    relations: list[Relation] = []
    for ts in sentences:
        relations.extend(parse_sentence(ts, irregulars, vpp_window))
    return relations


RELATIONS_HEADER = (
    "kind\tgovernor\tprep\tdependent\tdoc_id\tsent_index\tgov_index\tdep_index"
)


def write_relations(relations: Iterable[Relation], fh: IO[str]) -> int:
    fh.write(RELATIONS_HEADER + "\n")
    count = 0
    for r in relations:
        fh.write(
            f"{r.kind}\t{r.governor}\t{r.prep}\t{r.dependent}\t"
            f"{r.doc_id}\t{r.sent_index}\t{r.gov_index}\t{r.dep_index}\n"
        )
        count += 1
    return count


def read_relations(fh: IO[str]) -> Iterator[Relation]:
    header = fh.readline()
    if header.strip() and header.strip() != RELATIONS_HEADER:
        raise ValueError("not a relation dump file")
    for line in fh:
        line = line.rstrip("\n")
        if not line:
            continue
        kind, governor, prep, dependent, doc_id, sent_index, gov_idx, dep_idx = (
            line.split("\t")
        )
        yield Relation(
            kind, governor, prep, dependent,
            doc_id, int(sent_index), int(gov_idx), int(dep_idx),
        )
