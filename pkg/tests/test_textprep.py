import io

import pytest

from nomsupport import textprep as tp
from nomsupport.textprep import Document, Sentence


def test_segment_one_document_per_file(tmp_path):
    (tmp_path / "a.txt").write_text("First article.", encoding="utf-8")
    (tmp_path / "b.txt").write_text("Second article.", encoding="utf-8")
    docs = list(tp.segment(tmp_path))
    assert [d.id for d in docs] == ["a.txt", "b.txt"]
    assert docs[0].text.strip() == "First article."


def test_segment_with_delimiter(tmp_path):
    path = tmp_path / "ap.txt"
    path.write_text("one\n~~~\ntwo\n~~~\nthree\n", encoding="utf-8")
    docs = list(tp.segment(path, doc_delim="~~~"))
    assert [d.id for d in docs] == ["ap.txt#0000", "ap.txt#0001", "ap.txt#0002"]
    assert [d.text.strip() for d in docs] == ["one", "two", "three"]


def test_segment_empty_file_yields_nothing(tmp_path):
    (tmp_path / "empty.txt").write_text("", encoding="utf-8")
    assert list(tp.segment(tmp_path)) == []


def test_segment_bad_encoding_is_reported_and_skipped(tmp_path):
    (tmp_path / "bad.txt").write_bytes(b"\xff\xfe garbage \xff")
    (tmp_path / "good.txt").write_text("Fine text.", encoding="utf-8")
    errors: list[tuple[str, str]] = []
    docs = list(tp.segment(tmp_path, errors=errors))
    assert [d.id for d in docs] == ["good.txt"]
    assert len(errors) == 1 and errors[0][0] == "bad.txt"


def test_segment_strips_trivial_markup(tmp_path):
    (tmp_path / "sgml.txt").write_text("<DOC><TEXT>Hello there.</TEXT></DOC>")
    docs = list(tp.segment(tmp_path))
    assert docs[0].text.strip() == "Hello there."


def test_split_two_sentences():
    assert tp.split_sentences("He left. She stayed.") == ["He left.", "She stayed."]


def test_split_abbreviation_suppressed():
    assert tp.split_sentences("Mr. Marcos appealed.") == ["Mr. Marcos appealed."]


def test_split_empty():
    assert tp.split_sentences("") == []


@pytest.mark.parametrize(
    "text,expected",
    [
        ("The U.S. Senate met. It voted.", ["The U.S. Senate met.", "It voted."]),
        ("J. Smith appealed. He won.", ["J. Smith appealed.", "He won."]),
        ("Costs rose 3.5 percent. They fell later.",
         ["Costs rose 3.5 percent.", "They fell later."]),
        ("Really? Yes! Fine.", ["Really?", "Yes!", "Fine."]),
        ('He said "stop." "Go on," she said.', ['He said "stop."', '"Go on," she said.']),
    ],
)
def test_split_cases(text, expected):
    assert tp.split_sentences(text) == expected


def test_tokenize_detaches_punctuation():
    assert tp.tokenize("the enemy's destruction of the city.") == [
        "the", "enemy's", "destruction", "of", "the", "city", ".",
    ]


def test_tokenize_keeps_possessive_clitics():
    assert tp.tokenize("appeals' merits") == ["appeals'", "merits"]


def test_tokenize_keeps_internal_hyphens_and_periods():
    assert tp.tokenize("U.S.-backed plan") == ["U.S.-backed", "plan"]
    assert tp.tokenize("The U.S. fleet") == ["The", "U.S.", "fleet"]


@pytest.mark.parametrize(
    "text,expected",
    [
        ('"Stop," he said.', ['"', "Stop", ",", '"', "he", "said", "."]),
        ("a (small) win", ["a", "(", "small", ")", "win"]),
        ("wait...", ["wait", ".", ".", "."]),
        ("Mr. Marcos", ["Mr.", "Marcos"]),
        ("1989.", ["1989", "."]),
    ],
)
def test_tokenize_cases(text, expected):
    assert tp.tokenize(text) == expected


def test_tokenize_is_character_lossless():
    samples = [
        "They appealed the ruling.",
        'Mrs. Marcos made a "public appeal" to President Corazon Aquino.',
        "U.S.-backed plans (and others) failed, didn't they?",
    ]
    for text in samples:
        assert "".join(tp.tokenize(text)) == "".join(text.split())


def test_detokenize_round_trip():
    samples = [
        "They appealed the ruling .",
        "the enemy's destruction of the city .",
        "a ( small ) win , again .",
    ]
    for text in samples:
        tokens = text.split(" ")
        normalized = tp.detokenize(tokens)
        assert tp.tokenize(normalized) == tokens


def _sentences(*rows):
    return [Sentence.build(doc, i, toks.split()) for doc, i, toks in rows]


APPEAL_FORMS = frozenset(
    {"appeal", "appeals", "appealed", "appealing", "appeal's", "appeals'"}
)


def test_filter_retains_exact_token_matches():
    kept = tp.filter_sentences(
        _sentences(("d", 0, "They appealed the ruling .")), APPEAL_FORMS
    )
    assert len(kept) == 1


def test_filter_no_substring_matches():
    kept = tp.filter_sentences(
        _sentences(("d", 0, "They applied for jobs .")), APPEAL_FORMS
    )
    assert kept == []


def test_filter_is_case_insensitive_on_tokens():
    kept = tp.filter_sentences(
        _sentences(("d", 0, "Appeals court ruled .")), APPEAL_FORMS
    )
    assert len(kept) == 1


def test_filter_union_distributes():
    sents = _sentences(
        ("d", 0, "They appealed ."),
        ("d", 1, "They proposed a deal ."),
        ("d", 2, "Nothing here ."),
    )
    f1 = frozenset({"appealed"})
    f2 = frozenset({"proposed"})
    union = tp.filter_sentences(sents, f1 | f2)
    split = {(s.doc_id, s.index) for s in tp.filter_sentences(sents, f1)} | {
        (s.doc_id, s.index) for s in tp.filter_sentences(sents, f2)
    }
    assert {(s.doc_id, s.index) for s in union} == split


def test_iter_filtered_keeps_doc_and_index(tmp_path):
    (tmp_path / "d.txt").write_text(
        "Nothing first. They appealed the ruling. Nothing again. The appeal failed."
    )
    kept = list(tp.iter_filtered(tp.segment(tmp_path), APPEAL_FORMS))
    assert [(s.doc_id, s.index) for s in kept] == [("d.txt", 1), ("d.txt", 3)]


def test_filtered_file_round_trip():
    sents = _sentences(("a", 0, "They appealed ."), ("b", 3, "The appeal failed ."))
    buf = io.StringIO()
    tp.write_filtered(sents, buf)
    buf.seek(0)
    again = list(tp.read_filtered(buf))
    assert again == sents
