import json

import pytest

from nomsupport import profiler as pf
from nomsupport import shallowparse as sp
from nomsupport import synth
from nomsupport import tagger as tg
from nomsupport import textprep as tp
from nomsupport.errors import MalformedInputError
from nomsupport.morphology import Lemma
from nomsupport.textprep import Sentence


def signatures(text):
    ts = tg.tag_sentence(Sentence.build("d", 0, text.split()))
    return {r.signature() for r in sp.parse_sentence(ts)}


def test_template_coverage_each_pattern_yields_exactly_its_relations():
    t = synth.templates()
    cases = [
        (t["vpp"].format(verb_past="appealed", prep="to", filler="court"),
         {("VPP", "appeal", "to", "court")}),
        (t["npp"].format(noun="appeal", prep="to", filler="court"),
         {("NPP", "appeal", "to", "court")}),
        (t["ngen"].format(noun="appeal", object="conviction"),
         {("NPP", "appeal", "of", "conviction"), ("NGEN", "appeal", "", "conviction")}),
        (t["dobj"].format(sverb_past="rejected", noun="appeal"),
         {("DOBJ", "reject", "", "appeal")}),
        (t["frame"].format(sverb_past="made", noun="appeal", prep="to", filler="court"),
         {("DOBJ", "make", "", "appeal"), ("NPP", "appeal", "to", "court"),
          ("VPP", "make", "to", "court")}),
        (t["verbdobj"].format(verb_past="appealed", object="decision"),
         {("DOBJ", "appeal", "", "decision")}),
        (t["passive_by"].format(noun="appeal", sverb_pastpart="rejected", filler="court"),
         set()),
        (t["tag_noun_sg"].format(noun="appeal"), set()),
        (t["tag_noun_pl"].format(noun_plural="appeals"), set()),
        (t["tag_vact_past"].format(verb_past="appealed"), set()),
        (t["tag_vact_base"].format(verb="appeal"), set()),
        (t["tag_vact_third"].format(verb_third="appeals"), set()),
        (t["tag_vprog"].format(verb_prog="appealing"), set()),
        (t["tag_vpastpart"].format(verb_pastpart="appealed"), set()),
        (t["tally"].format(tnoun="million", prep="to", filler2="fund"),
         {("NPP", "million", "to", "fund")}),
    ]
    for sentence, expected in cases:
        assert signatures(sentence) == expected, sentence


def test_template_tag_categories():
    t = synth.templates()
    forms = frozenset({"appeal", "appeals", "appealed", "appealing"})

    def category(sentence):
        ts = tg.tag_sentence(Sentence.build("d", 0, sentence.split()))
        dist = tg.tag_distribution([ts], forms)
        assert sum(dist.values()) == 1
        return next(iter(dist))

    assert category(t["tag_noun_sg"].format(noun="appeal")) is tg.Tag.NOUN
    assert category(t["tag_noun_pl"].format(noun_plural="appeals")) is tg.Tag.NOUN
    assert category(t["tag_vact_past"].format(verb_past="appealed")) is tg.Tag.VERB_ACT
    assert category(t["tag_vact_base"].format(verb="appeal")) is tg.Tag.VERB_ACT
    assert category(t["tag_vact_third"].format(verb_third="appeals")) is tg.Tag.VERB_ACT
    assert category(t["tag_vprog"].format(verb_prog="appealing")) is tg.Tag.VERB_PROG
    assert category(t["tag_vpastpart"].format(verb_pastpart="appealed")) is tg.Tag.VERB_PASTPART


SPEC_TEXT = """\
verb\tappeal
noun\tappeal
seed\t42
docs\t3
filler\t5
vpp\tto\t4
vpp\tfor\t2
vpp\tin\t1
npp\tto\t5
npp\tfor\t3
npp\tof\t4
dobj\treject\t3
dobj\tmake\t3
frame\tmake\t2
ngen\truling\t2
verbdobj\tdecision\t2
tag\tnoun\t25
tag\tverb_act\t12
tag\tverb_prog\t2
tag\tverb_pastpart\t3
passive_by\t2
"""


def test_plant_spec_parsing():
    spec = synth.PlantSpec.from_lines(SPEC_TEXT.splitlines())
    assert spec.verb == "appeal" and spec.noun == "appeal"
    assert spec.vpp == {"to": 4, "for": 2, "in": 1}
    assert spec.expected_preps() == ("to", "for", "in")
    assert spec.tags["noun"] == 25


def test_plant_spec_rejects_bad_lines():
    with pytest.raises(MalformedInputError):
        synth.PlantSpec.from_lines(["nonsense\tx"])
    with pytest.raises(MalformedInputError):
        synth.PlantSpec.from_lines(["vpp\tto"])  # missing count


def test_validation_catches_inconsistent_plants(tmp_path):
    spec = synth.PlantSpec(verb="appeal", noun="appeal",
                           vpp={"to": 2}, npp={"to": 1},
                           frames={"make": 3}, dobj={"make": 3})
    with pytest.raises(MalformedInputError):
        synth.build_corpus(spec, tmp_path)
    spec = synth.PlantSpec(verb="appeal", noun="appeal", vpp={"by": 3})
    with pytest.raises(MalformedInputError):
        synth.build_corpus(spec, tmp_path)
    spec = synth.PlantSpec(verb="appeal", noun="appeal",
                           dobj={"make": 1}, frames={"make": 2}, frame_preps=("to",))
    with pytest.raises(MalformedInputError):
        synth.build_corpus(spec, tmp_path)


def pipeline_tables(corpus_dir, verb="appeal", noun="appeal"):
    docs = tp.segment(corpus_dir)
    return pf.run_pair(docs, Lemma(verb, "verb"), Lemma(noun, "noun"))


def test_manifest_round_trip(tmp_path):
    spec = synth.PlantSpec.from_lines(SPEC_TEXT.splitlines())
    manifest = synth.build_corpus(spec, tmp_path)
    expected = manifest["expected"]
    report = pipeline_tables(tmp_path / "corpus")

    assert report.verbal_profile.counts == expected["verbal_profile"]
    assert report.nominal_profile.counts == expected["nominal_profile"]
    assert list(report.preps) == expected["preps"]
    assert report.naive.as_dict() == expected["naive"]
    assert report.filtered.as_dict() == expected["filtered"]
    assert report.selection.count == expected["selection_count"]
    got_overlap = {obj: [v, g] for obj, v, g in report.overlap.rows}
    assert got_overlap == expected["overlap"]
    got_tags = {tag.value: n for tag, n in report.tag_dist.items()}
    assert got_tags == expected["tag_distribution"]


def test_same_seed_gives_identical_corpora(tmp_path):
    spec = synth.PlantSpec.from_lines(SPEC_TEXT.splitlines())
    a, b = tmp_path / "a", tmp_path / "b"
    synth.build_corpus(spec, a)
    synth.build_corpus(spec, b)
    files_a = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
    files_b = sorted(p.relative_to(b) for p in b.rglob("*") if p.is_file())
    assert files_a == files_b
    for rel in files_a:
        assert (a / rel).read_bytes() == (b / rel).read_bytes()


def test_different_seed_changes_order_but_not_counts(tmp_path):
    text = SPEC_TEXT.replace("seed\t42", "seed\t7")
    spec_a = synth.PlantSpec.from_lines(SPEC_TEXT.splitlines())
    spec_b = synth.PlantSpec.from_lines(text.splitlines())
    ma = synth.build_corpus(spec_a, tmp_path / "a")
    mb = synth.build_corpus(spec_b, tmp_path / "b")
    assert ma["expected"] == mb["expected"]


def test_zero_plant_gives_filler_only_corpus(tmp_path):
    spec = synth.PlantSpec(verb="appeal", noun="appeal", filler=4, docs=1)
    manifest = synth.build_corpus(spec, tmp_path)
    assert manifest["sentences"] == 4
    docs = list(tp.segment(tmp_path / "corpus"))
    from nomsupport.errors import InsufficientEvidenceError
    with pytest.raises(InsufficientEvidenceError):
        pf.run_pair(docs, Lemma("appeal", "verb"), Lemma("appeal", "noun"))


def test_discovery_plant_round_trip(tmp_path):
    spec = synth.PlantSpec(
        verb="propose",
        noun="proposal",
        seed=3,
        docs=4,
        filler=6,
        vpp={"to": 6, "for": 3, "in": 2},
        tally={"million": 5, "proposal": 4},
        distractor={"billion": 6},
    )
    manifest = synth.build_corpus(spec, tmp_path)
    result = pf.discover_nominalization(
        tp.segment(tmp_path / "corpus"), Lemma("propose", "verb")
    )
    assert list(result.preps) == manifest["expected"]["preps"]
    assert dict(result.tally) == manifest["expected"]["tally"]
    assert "billion" not in dict(result.tally)
    assert result.best() == "proposal"


def test_min_bytes_padding(tmp_path):
    spec = synth.PlantSpec(verb="appeal", noun="appeal", vpp={"to": 2},
                           docs=2, min_bytes=20000)
    manifest = synth.build_corpus(spec, tmp_path)
    assert manifest["bytes"] >= 20000
