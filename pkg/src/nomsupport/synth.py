"""Synthetic corpus generator with known ground truth.

Given target frequencies for each relation pattern, emits a corpus whose
sentences realize those patterns exactly, interleaved with filler, plus a
manifest recording every count the pipeline should recover.  Useful for
desk-scale reproduction of published co-occurrence tables and for
randomized round-trip tests.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

from . import morphology
from .errors import MalformedInputError
from .morphology import Lemma

# PP objects and tally PP objects; disjoint from every lemma the tests plant.
FILLER_NOUNS = ("court", "committee", "board", "panel", "group", "fund", "union", "company")

PASSIVE_VERB = "reject"

TAG_CATEGORIES = ("noun", "verb_act", "verb_prog", "verb_pastpart")


@lru_cache(maxsize=None)
def templates() -> dict[str, str]:
    path = resources.files("nomsupport").joinpath("data", "templates.txt")
    table: dict[str, str] = {}
    with path.open(encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].rstrip()
            if not line.strip():
                continue
            name, pattern = line.split("\t", 1)
            table[name] = pattern
    return table


@dataclass
class PlantSpec:
    """Target frequencies for one synthetic corpus.

    All relation tables are totals: `dobj` counts include the framed
    instances listed in `frames`, and `npp` totals include the PPs that
    frame sentences and of-genitive sentences contribute.
    """

    verb: str
    noun: str
    seed: int = 0
    docs: int = 1
    filler: int = 0
    min_bytes: int = 0
    vpp: dict[str, int] = field(default_factory=dict)
    npp: dict[str, int] = field(default_factory=dict)
    dobj: dict[str, int] = field(default_factory=dict)
    frames: dict[str, int] = field(default_factory=dict)
    frame_preps: tuple[str, ...] = ()
    ngen: dict[str, int] = field(default_factory=dict)
    verb_dobj: dict[str, int] = field(default_factory=dict)
    tags: dict[str, int] = field(default_factory=dict)
    passive_by: int = 0
    tally: dict[str, int] = field(default_factory=dict)
    distractor: dict[str, int] = field(default_factory=dict)

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "PlantSpec":
        values: dict = {
            "vpp": {}, "npp": {}, "dobj": {}, "frames": {}, "ngen": {},
            "verb_dobj": {}, "tags": {}, "tally": {}, "distractor": {},
        }
        scalars = {"verb": str, "noun": str, "seed": int, "docs": int,
                   "filler": int, "min_bytes": int, "passive_by": int}
        tables = {"vpp": "vpp", "npp": "npp", "dobj": "dobj", "frame": "frames",
                  "ngen": "ngen", "verbdobj": "verb_dobj", "tag": "tags",
                  "tally": "tally", "distractor": "distractor"}
        for num, raw in enumerate(lines, start=1):
            line = raw.split("#", 1)[0].rstrip()
            if not line.strip():
                continue
            fields = line.split("\t")
            key = fields[0]
            try:
                if key in scalars and len(fields) == 2:
                    values[key] = scalars[key](fields[1])
                elif key == "frame_preps" and len(fields) == 2:
                    values["frame_preps"] = tuple(
                        p for p in fields[1].split(",") if p
                    )
                elif key in tables and len(fields) == 3:
                    values[tables[key]][fields[1]] = int(fields[2])
                else:
                    raise ValueError("unrecognized line")
            except ValueError as exc:
                raise MalformedInputError(f"plant spec line {num}: {exc}") from exc
        if "verb" not in values:
            raise MalformedInputError("plant spec needs a verb")
        values.setdefault("noun", values["verb"])
        return cls(**values)

    @classmethod
    def from_file(cls, path) -> "PlantSpec":
        with open(path, encoding="utf-8") as fh:
            return cls.from_lines(fh)

    def expected_preps(self) -> tuple[str, ...]:
        ordered = sorted(self.vpp.items(), key=lambda kv: (-kv[1], kv[0]))
        return tuple(prep for prep, _ in ordered[:3])


def _cycled(options, index):
    return options[index % len(options)]


def _noun_lemma_of(word: str) -> str:
    lemma = morphology.lemmatize(word, morphology.NOUN)
    return lemma.text if lemma is not None else word


def _round_robin(total: int, options: tuple[str, ...]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for i in range(total):
        key = _cycled(options, i)
        counts[key] = counts.get(key, 0) + 1
    return counts


class _Builder:
    def __init__(self, spec: PlantSpec):
        self.spec = spec
        self.irregulars = morphology.default_irregulars()
        self.templates = templates()
        self.filler_cursor = 0
        self.sentences: list[str] = []
        self.distractor_sentences: list[str] = []
        # filler nouns that ended up as of-genitive objects of the target noun
        self.of_fillers: dict[str, int] = {}

    def add(self, name: str, count: int = 1, to_distractors: bool = False, **slots):
        target = self.distractor_sentences if to_distractors else self.sentences
        pattern = self.templates[name]
        for _ in range(count):
            filled = dict(slots)
            for slot in ("filler", "filler2"):
                if "{" + slot + "}" in pattern:
                    filled[slot] = _cycled(FILLER_NOUNS, self.filler_cursor)
                    self.filler_cursor += 1
            if name in ("frame", "npp") and filled.get("prep") == "of":
                obj = filled["filler"]
                self.of_fillers[obj] = self.of_fillers.get(obj, 0) + 1
            target.append(pattern.format(**filled))


def _validate(spec: PlantSpec) -> None:
    if spec.docs < 1:
        raise MalformedInputError("docs must be at least 1")
    Lemma(spec.verb, morphology.VERB)
    Lemma(spec.noun, morphology.NOUN)
    unknown = set(spec.tags) - set(TAG_CATEGORIES)
    if unknown:
        raise MalformedInputError(f"unknown tag categories: {sorted(unknown)}")
    for table in (spec.vpp, spec.npp, spec.dobj, spec.frames, spec.ngen,
                  spec.verb_dobj, spec.tags, spec.tally, spec.distractor):
        if any(v < 0 for v in table.values()):
            raise MalformedInputError("plant frequencies must be >= 0")
    if "by" in spec.vpp or "by" in spec.npp or "by" in spec.frame_preps:
        raise MalformedInputError(
            "'by' cannot be planted: the parser discards by-PPs after verbs"
        )
    verb_forms = morphology.expand_verb(Lemma(spec.verb, morphology.VERB)).forms
    noun_forms = morphology.expand_noun(Lemma(spec.noun, morphology.NOUN)).forms
    for word in list(spec.tally) + list(spec.distractor):
        if word in verb_forms:
            raise MalformedInputError(
                f"{word!r} is a verb form and would break document scoping"
            )
    for word in list(spec.ngen) + list(spec.verb_dobj) + list(spec.distractor):
        if word in verb_forms | noun_forms:
            raise MalformedInputError(f"{word!r} collides with a target surface form")
    noun_lemma = _noun_lemma_of(spec.noun)
    if any(_noun_lemma_of(w) == noun_lemma for w in spec.distractor):
        raise MalformedInputError(
            "distractor nouns may not share the target noun's lemma"
        )
    if "of" in (spec.frame_preps or spec.expected_preps()) and any(
        _noun_lemma_of(w) == noun_lemma for w in spec.tally
    ):
        raise MalformedInputError(
            "planting the target noun as a tally word with an of-preposition "
            "is not supported (it would skew the genitive tables)"
        )
    planted_nouns = set(spec.tally) | set(spec.ngen) | set(spec.verb_dobj) | set(spec.distractor)
    if planted_nouns & set(FILLER_NOUNS):
        raise MalformedInputError("planted nouns may not reuse filler nouns")


def build_corpus(spec: PlantSpec, out_dir: str | Path) -> dict:
    """Write corpus files and a ground-truth manifest; returns the manifest."""
    _validate(spec)
    out_dir = Path(out_dir)
    corpus_dir = out_dir / "corpus"
    corpus_dir.mkdir(parents=True, exist_ok=True)

    b = _Builder(spec)
    irregulars = b.irregulars
    verb_past = morphology.past_form(spec.verb, irregulars)
    verb_third = morphology.third_person(spec.verb, irregulars)
    verb_prog = morphology.progressive_form(spec.verb, irregulars)
    verb_pastpart = morphology.past_participle_form(spec.verb, irregulars)
    noun_plural = morphology.plural_form(spec.noun, irregulars)
    verb_forms = morphology.expand_verb(Lemma(spec.verb, morphology.VERB), irregulars).forms

    preps = spec.frame_preps or spec.expected_preps()
    frames_total = sum(spec.frames.values())
    if frames_total and not preps:
        raise MalformedInputError("frames need frame_preps or a vpp profile")
    tally_preps = preps
    if (spec.tally or spec.distractor) and not tally_preps:
        raise MalformedInputError("tally sentences need frame_preps or a vpp profile")

    # Allocate each verb's framed instances across the chosen prepositions.
    frame_alloc: dict[str, int] = {}
    frame_jobs: list[tuple[str, str]] = []
    for sverb in sorted(spec.frames):
        for i in range(spec.frames[sverb]):
            prep = _cycled(preps, i)
            frame_alloc[prep] = frame_alloc.get(prep, 0) + 1
            frame_jobs.append((sverb, prep))

    ngen_total = sum(spec.ngen.values())
    npp_preps = set(spec.npp) | set(frame_alloc) | ({"of"} if ngen_total else set())
    npp_bare: dict[str, int] = {}
    for prep in sorted(npp_preps):
        implied = frame_alloc.get(prep, 0) + (ngen_total if prep == "of" else 0)
        total = spec.npp.get(prep, implied)
        bare = total - implied
        if bare < 0:
            raise MalformedInputError(
                f"npp total for {prep!r} is below its framed/genitive share"
            )
        npp_bare[prep] = bare

    dobj_bare: dict[str, int] = {}
    for sverb in sorted(set(spec.dobj) | set(spec.frames)):
        total = spec.dobj.get(sverb, spec.frames.get(sverb, 0))
        bare = total - spec.frames.get(sverb, 0)
        if bare < 0:
            raise MalformedInputError(
                f"dobj total for {sverb!r} is below its framed share"
            )
        dobj_bare[sverb] = bare

    # Render every planted sentence (deterministic order; shuffled later).
    for sverb, prep in frame_jobs:
        b.add("frame", sverb_past=morphology.past_form(sverb, irregulars),
              noun=spec.noun, prep=prep)
    for sverb in sorted(dobj_bare):
        b.add("dobj", count=dobj_bare[sverb],
              sverb_past=morphology.past_form(sverb, irregulars), noun=spec.noun)
    for prep in sorted(npp_bare):
        b.add("npp", count=npp_bare[prep], noun=spec.noun, prep=prep)
    for obj in sorted(spec.ngen):
        b.add("ngen", count=spec.ngen[obj], noun=spec.noun, object=obj)
    for prep in sorted(spec.vpp):
        b.add("vpp", count=spec.vpp[prep], verb_past=verb_past, prep=prep)
    for obj in sorted(spec.verb_dobj):
        b.add("verbdobj", count=spec.verb_dobj[obj], verb_past=verb_past, object=obj)
    b.add("passive_by", count=spec.passive_by, noun=spec.noun,
          sverb_pastpart=morphology.past_participle_form(PASSIVE_VERB, irregulars))
    for tnoun in sorted(spec.tally):
        for i in range(spec.tally[tnoun]):
            b.add("tally", tnoun=tnoun, prep=_cycled(tally_preps, i))

    # Tag-category bookkeeping: counts implied by the jobs above, plus
    # explicit top-up sentences to reach any requested totals.
    implied = {
        "noun": frames_total + sum(npp_bare.values()) + ngen_total
        + sum(dobj_bare.values()) + spec.passive_by,
        "verb_act": sum(spec.vpp.values()) + sum(spec.verb_dobj.values()),
        "verb_prog": 0,
        "verb_pastpart": 0,
    }
    tag_totals = dict(implied)
    for category in TAG_CATEGORIES:
        target = spec.tags.get(category)
        if target is None:
            continue
        extra = target - implied[category]
        if extra < 0:
            raise MalformedInputError(
                f"tag target {category}={target} is below the implied {implied[category]}"
            )
        tag_totals[category] = target
        if category == "noun":
            for i in range(extra):
                if i % 2 == 0:
                    b.add("tag_noun_sg", noun=spec.noun)
                else:
                    b.add("tag_noun_pl", noun_plural=noun_plural)
        elif category == "verb_act":
            for i in range(extra):
                name = ("tag_vact_past", "tag_vact_base", "tag_vact_third")[i % 3]
                b.add(name, verb_past=verb_past, verb=spec.verb, verb_third=verb_third)
        elif category == "verb_prog":
            b.add("tag_vprog", count=extra, verb_prog=verb_prog)
        else:
            b.add("tag_vpastpart", count=extra, verb_pastpart=verb_pastpart)

    filler_names = sorted(n for n in b.templates if n.startswith("filler_"))
    for i in range(spec.filler):
        b.sentences.append(b.templates[_cycled(filler_names, i)])

    for word in sorted(spec.distractor):
        for i in range(spec.distractor[word]):
            b.add("tally", to_distractors=True, tnoun=word,
                  prep=_cycled(tally_preps, i))

    rng = random.Random(spec.seed)
    sentences = list(b.sentences)
    rng.shuffle(sentences)

    # Discovery corpora need the verb in every document so that document
    # scoping keeps them all.
    doc_lists: list[list[str]] = [[] for _ in range(spec.docs)]
    rest = sentences
    if spec.tally or spec.distractor:
        def has_verb_form(sentence: str) -> bool:
            return any(tok in verb_forms for tok in sentence.lower().split())

        anchors = [s for s in sentences if has_verb_form(s)]
        if len(anchors) < spec.docs:
            raise MalformedInputError(
                "discovery corpora need at least one verb sentence per document"
            )
        rest = [s for s in sentences if not has_verb_form(s)]
        for i, anchor in enumerate(anchors):
            doc_lists[i % spec.docs].append(anchor)
    for i, sentence in enumerate(rest):
        doc_lists[i % spec.docs].append(sentence)

    # Pad with filler to a requested corpus size.
    total_bytes = sum(len(s) + 1 for doc in doc_lists for s in doc)
    pad = 0
    while total_bytes < spec.min_bytes:
        sentence = b.templates[_cycled(filler_names, pad)]
        doc_lists[pad % spec.docs].append(sentence)
        total_bytes += len(sentence) + 1
        pad += 1

    if b.distractor_sentences:
        n_distractor_docs = max(1, spec.docs // 4)
        for i in range(n_distractor_docs):
            chunk = b.distractor_sentences[i::n_distractor_docs]
            if chunk:
                doc_lists.append(chunk)

    paths = []
    for i, doc in enumerate(doc_lists):
        if not doc:
            continue
        path = corpus_dir / f"doc_{i:04d}.txt"
        path.write_text("\n".join(doc) + "\n", encoding="utf-8")
        paths.append(path)

    manifest = _manifest(
        spec, preps, frame_alloc, npp_bare, dobj_bare, tag_totals, b.of_fillers,
        sentence_count=sum(len(d) for d in doc_lists),
        doc_count=len(paths),
        byte_count=sum(p.stat().st_size for p in paths),
    )
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return manifest


def _manifest(
    spec: PlantSpec,
    preps: tuple[str, ...],
    frame_alloc: dict[str, int],
    npp_bare: dict[str, int],
    dobj_bare: dict[str, int],
    tag_totals: dict[str, int],
    of_fillers: dict[str, int],
    sentence_count: int,
    doc_count: int,
    byte_count: int,
) -> dict:
    ngen_total = sum(spec.ngen.values())
    noun_lemma = _noun_lemma_of(spec.noun)

    base_nominal = {
        prep: npp_bare.get(prep, 0)
        + frame_alloc.get(prep, 0)
        + (ngen_total if prep == "of" else 0)
        for prep in set(npp_bare) | set(frame_alloc)
    }
    # tally sentences whose noun is the target noun put it in front of a
    # preposition too, so they add real nominal-PP evidence
    nominal = dict(base_nominal)
    for word, count in spec.tally.items():
        if _noun_lemma_of(word) == noun_lemma:
            for prep, extra in _round_robin(count, preps).items():
                nominal[prep] = nominal.get(prep, 0) + extra
    nominal = {p: c for p, c in nominal.items() if c > 0}
    naive = {
        v: dobj_bare.get(v, 0) + spec.frames.get(v, 0)
        for v in set(dobj_bare) | set(spec.frames)
    }
    naive = {v: c for v, c in naive.items() if c > 0}
    filtered = {v: c for v, c in spec.frames.items() if c > 0}
    selection_count = sum(nominal.get(p, 0) for p in preps)

    overlap: dict[str, list[int]] = {}
    for obj, count in spec.verb_dobj.items():
        overlap.setdefault(obj, [0, 0])[0] += count
    for obj, count in spec.ngen.items():
        overlap.setdefault(obj, [0, 0])[1] += count
    for obj, count in of_fillers.items():
        overlap.setdefault(obj, [0, 0])[1] += count

    tally_expected: dict[str, int] = {}
    if spec.tally or spec.distractor:
        for word, count in spec.tally.items():
            key = _noun_lemma_of(word)
            tally_expected[key] = tally_expected.get(key, 0) + count
        # every planted nominal PP whose preposition is one of the tally
        # preps also puts the target noun right before that preposition
        in_tally_preps = sum(
            count for prep, count in base_nominal.items() if prep in preps
        )
        if in_tally_preps:
            tally_expected[noun_lemma] = (
                tally_expected.get(noun_lemma, 0) + in_tally_preps
            )

    tags = {
        "NOUN": tag_totals["noun"],
        "VERB_ACT": tag_totals["verb_act"],
        "VERB_PROG": tag_totals["verb_prog"],
        "VERB_PASTPART": tag_totals["verb_pastpart"],
    }
    return {
        "verb": spec.verb,
        "noun": spec.noun,
        "seed": spec.seed,
        "docs": doc_count,
        "sentences": sentence_count,
        "bytes": byte_count,
        "expected": {
            "preps": list(preps),
            "tag_distribution": {k: v for k, v in tags.items() if v > 0},
            "verbal_profile": dict(sorted(spec.vpp.items())),
            "nominal_profile": dict(sorted(nominal.items())),
            "naive": dict(sorted(naive.items())),
            "filtered": dict(sorted(filtered.items())),
            "selection_count": selection_count,
            "overlap": {k: v for k, v in sorted(overlap.items())},
            "tally": dict(sorted(tally_expected.items())),
        },
    }
