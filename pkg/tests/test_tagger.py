import io

import pytest

from nomsupport import tagger as tg
from nomsupport.tagger import Tag, TaggedSentence
from nomsupport.textprep import Sentence


def tag_tokens(text):
    sentence = Sentence.build("d", 0, text.split())
    return [t.value for t in tg.tag_sentence(sentence).tags]


def test_rule_trace_they_appealed_the_ruling():
    assert tag_tokens("they appealed the ruling") == [
        "PRON", "VERB_ACT", "DET", "NOUN",
    ]


def test_rule_trace_det_makes_noun():
    assert tag_tokens("the appeal failed") == ["DET", "NOUN", "VERB_ACT"]


def test_rule_trace_progressive_after_be():
    assert tag_tokens("is appealing") == ["AUX", "VERB_PROG"]


def test_rule_trace_passive_participle_after_be():
    assert tag_tokens("was appealed") == ["AUX", "VERB_PASTPART"]


def test_rule_trace_infinitival_to():
    assert tag_tokens("to appeal the ruling") == ["PREP", "VERB_ACT", "DET", "NOUN"]


def test_possessive_and_punctuation_and_numbers():
    assert tag_tokens("the enemy's destruction of the city .") == [
        "DET", "POSS", "NOUN", "PREP", "DET", "NOUN", "PUNCT",
    ]
    assert tag_tokens("appeals' merits") == ["POSS", "NOUN"]
    assert tag_tokens("in 1989 ,") == ["PREP", "NUM", "PUNCT"]


def test_unknown_word_suffix_rules():
    assert tag_tokens("the blortment") == ["DET", "NOUN"]
    assert tag_tokens("they blorted") == ["PRON", "VERB_ACT"]
    assert tag_tokens("was blorted") == ["AUX", "VERB_PASTPART"]
    assert tag_tokens("the blorting") == ["DET", "NOUN"]
    assert tag_tokens("was blorting") == ["AUX", "VERB_PROG"]
    assert tag_tokens("they said blortly") == ["PRON", "VERB_ACT", "ADV"]
    assert tag_tokens("met Blorty today") == ["VERB_ACT", "PROPN", "ADV"]


def test_every_token_gets_exactly_one_tag():
    sentence = Sentence.build("d", 0, "Mrs. Marcos made a public appeal .".split())
    tagged = tg.tag_sentence(sentence)
    assert len(tagged.entries) == len(sentence.tokens)


def test_tagging_is_deterministic():
    sentence = Sentence.build("d", 0, "They made an appeal to the court .".split())
    assert tg.tag_sentence(sentence) == tg.tag_sentence(sentence)


def test_vertical_round_trip():
    sentences = [
        tg.tag_sentence(Sentence.build("doc1", 4, "They appealed .".split())),
        tg.tag_sentence(Sentence.build("doc2", 0, "The appeal failed .".split())),
    ]
    buf = io.StringIO()
    tg.write_vertical(sentences, buf)
    buf.seek(0)
    again, errors = tg.read_pretagged(buf)
    assert errors == 0
    assert again == sentences


def test_read_pretagged_penn_mapping():
    buf = io.StringIO("appeal\tNN\n\ncourt\tNN\nruled\tVBD\n\n")
    sentences, errors = tg.read_pretagged(buf)
    assert errors == 0
    assert len(sentences) == 2
    assert sentences[0].entries[0] == ("appeal", "appeal", Tag.NOUN)
    assert sentences[1].tags == (Tag.NOUN, Tag.VERB_ACT)


def test_read_pretagged_unknown_tag_maps_to_other():
    buf = io.StringIO("appeal\tZZZ\n\n")
    sentences, errors = tg.read_pretagged(buf)
    assert errors == 0
    assert sentences[0].tags == (Tag.OTHER,)


def test_read_pretagged_malformed_line_skips_sentence():
    buf = io.StringIO("appeal\tNN\tx\ty\n\ncourt\tNN\n\n")
    sentences, errors = tg.read_pretagged(buf)
    assert errors == 1
    assert [s.surfaces for s in sentences] == [("court",)]


APPEAL_FORMS = frozenset(
    {"appeal", "appeals", "appealed", "appealing", "appeal's", "appeals'"}
)


def _tagged(text):
    return tg.tag_sentence(Sentence.build("d", 0, text.split()))


def test_tag_distribution_counts_by_category():
    sentences = [
        _tagged("The appeal failed ."),
        _tagged("They appealed the ruling ."),
        _tagged("He is appealing again ."),
        _tagged("The matter was appealed again ."),
        _tagged("The appeals failed ."),
    ]
    dist = tg.tag_distribution(sentences, APPEAL_FORMS)
    assert dist == {
        Tag.NOUN: 2,
        Tag.VERB_ACT: 1,
        Tag.VERB_PROG: 1,
        Tag.VERB_PASTPART: 1,
    }


def test_tag_distribution_empty_cases():
    assert tg.tag_distribution([], APPEAL_FORMS) == {}
    assert tg.tag_distribution([_tagged("Nothing here .")], APPEAL_FORMS) == {}


def test_compare_taggings_diagnostic():
    a = [_tagged("The appeal failed .")]
    b = [TaggedSentence("d", 0, a[0].entries[:2] + (("failed", "failed", Tag.NOUN), a[0].entries[3]))]
    compared, disagreements = tg.compare_taggings(a, b)
    assert compared == 4 and disagreements == 1
