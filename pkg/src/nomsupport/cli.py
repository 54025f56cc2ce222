"""Command-line front end.

Every pipeline stage reads and writes plain TSV files in the output
directory, so a corpus can be processed in multiple passes and each
intermediate inspected or regenerated on its own.  `pipeline` is exactly
the stage sequence run back to back.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import morphology, profiler, shallowparse, synth, tagger, textprep
from .errors import (
    DependencyError,
    InsufficientEvidenceError,
    MalformedInputError,
    NomsupportError,
)
from .morphology import Lemma

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NO_EVIDENCE = 4

FILES = {
    "filter": "filtered.tsv",
    "tag": "tagged.tsv",
    "parse": "relations.tsv",
    "profile": "profiles.tsv",
    "select": "selection.tsv",
    "rank": "support.tsv",
    "overlap": "overlap.tsv",
    "report": "report.tsv",
    "discover": "discovery.tsv",
}

_STAGE_BEFORE = {
    "filtered.tsv": "filter",
    "tagged.tsv": "tag",
    "relations.tsv": "parse",
    "profiles.tsv": "profile",
    "selection.tsv": "select",
}


@dataclass
class RunConfig:
    corpus: list[str] = field(default_factory=list)
    verb: Optional[str] = None
    noun: Optional[str] = None
    k: int = 3
    vpp_window: int = 1
    require_noun_prep: bool = False
    tagger_mode: str = "baseline"
    doc_delim: Optional[str] = None
    out: str = "nomsupport_out"
    seed: int = 0
    threshold: float = 0.5

    def __post_init__(self):
        if self.k < 1:
            raise MalformedInputError("k must be at least 1")
        if self.vpp_window < 0:
            raise MalformedInputError("vpp window must be >= 0")
        if self.tagger_mode not in ("baseline", "pretagged"):
            raise MalformedInputError(f"unknown tagger mode {self.tagger_mode!r}")

    @property
    def out_dir(self) -> Path:
        return Path(self.out)

    def path(self, stage: str) -> Path:
        return self.out_dir / FILES[stage]

    def verb_lemma(self) -> Lemma:
        if not self.verb:
            raise MalformedInputError("--verb is required")
        return Lemma(self.verb, morphology.VERB)

    def noun_lemma(self) -> Lemma:
        if not self.noun:
            raise MalformedInputError("--noun is required for this stage")
        return Lemma(self.noun, morphology.NOUN)

    def filter_forms(self) -> frozenset[str]:
        forms = morphology.expand_verb(self.verb_lemma()).forms
        if self.noun:
            forms = forms | morphology.expand_noun(self.noun_lemma()).forms
        return forms


def load_config_file(path: str | Path) -> dict:
    """Flat `key = value` configuration, same keys as the CLI flags."""
    parsers = {
        "corpus": lambda v: [p.strip() for p in v.split(",") if p.strip()],
        "verb": str, "noun": str, "k": int, "vpp_window": int,
        "require_noun_prep": lambda v: v.lower() in ("1", "true", "yes"),
        "tagger": str, "doc_delim": str, "out": str, "seed": int,
        "threshold": float,
    }
    values: dict = {}
    with open(path, encoding="utf-8") as fh:
        for num, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or key not in parsers:
                raise MalformedInputError(f"config line {num}: cannot parse {raw!r}")
            values["tagger_mode" if key == "tagger" else key] = parsers[key](value)
    return values


def _require(cfg: RunConfig, stage_file: str) -> Path:
    path = cfg.out_dir / stage_file
    if not path.exists():
        raise DependencyError(str(path), _STAGE_BEFORE[stage_file])
    return path


def _corpus_paths(cfg: RunConfig) -> list[str]:
    if not cfg.corpus:
        raise MalformedInputError("--corpus is required")
    for p in cfg.corpus:
        if not Path(p).exists():
            raise FileNotFoundError(f"corpus path does not exist: {p}")
    return cfg.corpus


def _read_pretagged_corpus(cfg: RunConfig) -> list[tagger.TaggedSentence]:
    sentences: list[tagger.TaggedSentence] = []
    errors = 0
    for root in _corpus_paths(cfg):
        root = Path(root)
        files = sorted(p for p in root.rglob("*") if p.is_file()) if root.is_dir() else [root]
        for file_path in files:
            with open(file_path, encoding="utf-8") as fh:
                got, bad = tagger.read_pretagged(fh)
            sentences.extend(got)
            errors += bad
    if errors:
        print(f"warning: skipped {errors} malformed pre-tagged sentences", file=sys.stderr)
    return sentences


def stage_filter(cfg: RunConfig) -> Path:
    forms = cfg.filter_forms()
    out = cfg.path("filter")
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    if cfg.tagger_mode == "pretagged":
        kept = [
            textprep.Sentence.build(ts.doc_id, ts.index, ts.surfaces)
            for ts in _read_pretagged_corpus(cfg)
            if any(t in forms for t in ts.lower)
        ]
        with open(out, "w", encoding="utf-8") as fh:
            textprep.write_filtered(kept, fh)
        return out
    errors: list[tuple[str, str]] = []
    docs = textprep.segment(_corpus_paths(cfg), cfg.doc_delim, errors)
    with open(out, "w", encoding="utf-8") as fh:
        textprep.write_filtered(textprep.iter_filtered(docs, forms), fh)
    for doc_id, message in errors:
        print(f"warning: skipped {doc_id}: {message}", file=sys.stderr)
    return out


def stage_tag(cfg: RunConfig) -> Path:
    out = cfg.path("tag")
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    if cfg.tagger_mode == "pretagged":
        forms = cfg.filter_forms()
        kept = [
            ts for ts in _read_pretagged_corpus(cfg)
            if any(t in forms for t in ts.lower)
        ]
        with open(out, "w", encoding="utf-8") as fh:
            tagger.write_vertical(kept, fh)
        return out
    source = _require(cfg, FILES["filter"])
    with open(source, encoding="utf-8") as fh:
        sentences = list(textprep.read_filtered(fh))
    tagged = tagger.tag_sentences(sentences)
    with open(out, "w", encoding="utf-8") as fh:
        tagger.write_vertical(tagged, fh)
    return out


def _read_tagged(cfg: RunConfig) -> list[tagger.TaggedSentence]:
    source = _require(cfg, FILES["tag"])
    with open(source, encoding="utf-8") as fh:
        sentences, errors = tagger.read_pretagged(fh)
    if errors:
        print(f"warning: {errors} malformed sentences in {source}", file=sys.stderr)
    return sentences


def stage_parse(cfg: RunConfig) -> Path:
    tagged = _read_tagged(cfg)
    relations = shallowparse.parse_sentences(tagged, vpp_window=cfg.vpp_window)
    out = cfg.path("parse")
    with open(out, "w", encoding="utf-8") as fh:
        shallowparse.write_relations(relations, fh)
    return out


def _read_relations(cfg: RunConfig) -> list[shallowparse.Relation]:
    source = _require(cfg, FILES["parse"])
    with open(source, encoding="utf-8") as fh:
        return list(shallowparse.read_relations(fh))


PROFILES_HEADER = "role\tprep\tcount"


def stage_profile(cfg: RunConfig) -> Path:
    relations = _read_relations(cfg)
    verbal = profiler.verb_prep_profile(relations, cfg.verb_lemma())
    nominal = profiler.noun_prep_profile(relations, cfg.noun_lemma())
    out = cfg.path("profile")
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(PROFILES_HEADER + "\n")
        for profile in (verbal, nominal):
            for prep, count in profile.sorted_items():
                fh.write(f"{profile.role}\t{prep}\t{count}\n")
    return out


def _read_profiles(cfg: RunConfig) -> tuple[profiler.PrepProfile, profiler.PrepProfile]:
    source = _require(cfg, FILES["profile"])
    verbal: dict[str, int] = {}
    nominal: dict[str, int] = {}
    with open(source, encoding="utf-8") as fh:
        header = fh.readline()
        if header.strip() != PROFILES_HEADER:
            raise MalformedInputError(f"{source} is not a profiles file")
        for line in fh:
            role, prep, count = line.rstrip("\n").split("\t")
            (verbal if role == profiler.VERBAL else nominal)[prep] = int(count)
    return (
        profiler.PrepProfile(cfg.verb_lemma(), profiler.VERBAL, verbal),
        profiler.PrepProfile(cfg.noun_lemma(), profiler.NOMINAL, nominal),
    )


SELECTION_HEADER = "record\ta\tb\tc"


def _choose_preps(cfg: RunConfig, verbal, nominal) -> tuple[str, ...]:
    preps = profiler.top_preps(verbal, cfg.k).preps
    if cfg.require_noun_prep:
        preps = tuple(p for p in preps if p in nominal.counts)
        if not preps:
            raise InsufficientEvidenceError(
                "select", "no verbal preposition also follows the noun"
            )
    return preps


def stage_select(cfg: RunConfig) -> Path:
    verbal, nominal = _read_profiles(cfg)
    preps = _choose_preps(cfg, verbal, nominal)
    selection = profiler.select_nominalizations(
        _read_relations(cfg), cfg.noun_lemma(), preps
    )
    out = cfg.path("select")
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(SELECTION_HEADER + "\n")
        fh.write(f"preps\t{','.join(selection.preps)}\t\t\n")
        fh.write(f"count\t{selection.count}\t\t\n")
        for doc_id, sent_index, prep in selection.instances:
            fh.write(f"instance\t{doc_id}\t{sent_index}\t{prep}\n")
    return out


def _read_selection(cfg: RunConfig) -> profiler.NomSelection:
    source = _require(cfg, FILES["select"])
    preps: tuple[str, ...] = ()
    instances: list[tuple[str, int, str]] = []
    with open(source, encoding="utf-8") as fh:
        header = fh.readline()
        if header.strip() != SELECTION_HEADER:
            raise MalformedInputError(f"{source} is not a selection file")
        for line in fh:
            record, a, b, c = line.rstrip("\n").split("\t")
            if record == "preps":
                preps = tuple(p for p in a.split(",") if p)
            elif record == "instance":
                instances.append((a, int(b), c))
    return profiler.NomSelection(cfg.noun_lemma(), preps, tuple(instances))


SUPPORT_HEADER = "mode\tverb\tcount"


def stage_rank(cfg: RunConfig) -> Path:
    relations = _read_relations(cfg)
    selection = _read_selection(cfg)
    filtered = profiler.support_verbs(relations, selection)
    naive = profiler.naive_dobj_table(relations, cfg.noun_lemma())
    out = cfg.path("rank")
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(SUPPORT_HEADER + "\n")
        for verb, count in naive.rows:
            fh.write(f"naive\t{verb}\t{count}\n")
        for verb, count in filtered.rows:
            fh.write(f"filtered\t{verb}\t{count}\n")
    return out


OVERLAP_HEADER = "object\tverb_frame\tof_genitive"


def stage_overlap(cfg: RunConfig) -> Path:
    table = profiler.argument_overlap(
        _read_relations(cfg), cfg.verb_lemma(), cfg.noun_lemma()
    )
    out = cfg.path("overlap")
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(OVERLAP_HEADER + "\n")
        for obj, verb_count, ngen_count in table.rows:
            fh.write(f"{obj}\t{verb_count}\t{ngen_count}\n")
    return out


def stage_discover(cfg: RunConfig) -> Path:
    docs = textprep.segment(_corpus_paths(cfg), cfg.doc_delim)
    result = profiler.discover_nominalization(
        docs,
        cfg.verb_lemma(),
        k=cfg.k,
        threshold=cfg.threshold,
        vpp_window=cfg.vpp_window,
    )
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    out = cfg.path("discover")
    out.write_text(profiler.render_discovery(result), encoding="utf-8")
    best = result.best()
    print(best if best else "no nominalization found")
    return out


def cmd_pipeline(cfg: RunConfig) -> Path:
    if not cfg.noun:
        stage_filter(cfg)
        stage_tag(cfg)
        stage_parse(cfg)
        return stage_discover(cfg)
    stage_filter(cfg)
    stage_tag(cfg)
    stage_parse(cfg)
    stage_profile(cfg)
    stage_select(cfg)
    stage_rank(cfg)
    stage_overlap(cfg)
    tagged = _read_tagged(cfg)
    relations = _read_relations(cfg)
    report = profiler.build_report(
        tagged,
        relations,
        cfg.verb_lemma(),
        cfg.noun_lemma(),
        k=cfg.k,
        require_noun_prep=cfg.require_noun_prep,
    )
    out = cfg.path("report")
    out.write_text(profiler.render_report(report), encoding="utf-8")
    print(report.summary_line())
    return out


def cmd_synth(spec_path: str, out: str) -> Path:
    spec = synth.PlantSpec.from_file(spec_path)
    manifest = synth.build_corpus(spec, out)
    print(
        f"wrote {manifest['docs']} documents, {manifest['sentences']} sentences, "
        f"{manifest['bytes']} bytes to {out}"
    )
    return Path(out)


STAGES = {
    "filter": stage_filter,
    "tag": stage_tag,
    "parse": stage_parse,
    "profile": stage_profile,
    "select": stage_select,
    "rank": stage_rank,
    "overlap": stage_overlap,
    "discover": stage_discover,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nomsupport",
        description="Find support verbs for nominalizations in a text corpus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_flags(p):
        p.add_argument("--corpus", nargs="+", default=None,
                       help="corpus files or directories")
        p.add_argument("--verb", default=None, help="verb lemma")
        p.add_argument("--noun", default=None,
                       help="nominalized form; omit for discovery mode")
        p.add_argument("--k", type=int, default=None,
                       help="number of top prepositions to keep (default 3)")
        p.add_argument("--vpp-window", type=int, default=None, dest="vpp_window",
                       help="max NPs between verb and its PP (default 1)")
        p.add_argument("--require-noun-prep", action="store_true", default=None,
                       dest="require_noun_prep",
                       help="keep only prepositions seen after the noun too")
        p.add_argument("--tagger", choices=("baseline", "pretagged"), default=None,
                       dest="tagger_mode", help="tag with the built-in tagger or "
                       "treat the corpus as vertical pre-tagged text")
        p.add_argument("--doc-delim", default=None, dest="doc_delim",
                       help="line that separates documents inside one file")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threshold", type=float, default=None,
                       help="similarity cutoff for discovery (default 0.5)")
        p.add_argument("--config", default=None, help="key = value config file")

    for name in ["pipeline", *STAGES]:
        p = sub.add_parser(name)
        add_run_flags(p)

    p = sub.add_parser("synth", help="generate a synthetic corpus with a manifest")
    p.add_argument("--spec", required=True, help="plant-spec file")
    p.add_argument("--out", required=True, help="output directory")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if args.config:
        values.update(load_config_file(args.config))
    overrides = {
        "corpus": args.corpus,
        "verb": args.verb,
        "noun": args.noun,
        "k": args.k,
        "vpp_window": args.vpp_window,
        "require_noun_prep": args.require_noun_prep,
        "tagger_mode": args.tagger_mode,
        "doc_delim": args.doc_delim,
        "out": args.out,
        "seed": args.seed,
        "threshold": args.threshold,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "synth":
            cmd_synth(args.spec, args.out)
        elif args.command == "pipeline":
            cmd_pipeline(make_config(args))
        else:
            path = STAGES[args.command](make_config(args))
            print(path)
    except MalformedInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InsufficientEvidenceError as exc:
        print(f"error: insufficient evidence at {exc}", file=sys.stderr)
        return EXIT_NO_EVIDENCE
    except (DependencyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NomsupportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
