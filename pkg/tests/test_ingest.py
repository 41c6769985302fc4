import pytest
from hypothesis import given, strategies as st

from ontoscope.exceptions import MalformedLine, UnterminatedAnnotation
from ontoscope.ingest import (
    CaptureKind,
    Phenomenon,
    Transcript,
    Utterance,
    capture_phenomena,
    normalize_term,
    parse_transcript,
)
from oracles import longest_match_scan


def one(text):
    return parse_transcript(f"[A] {text}")


class TestParseTranscript:
    def test_two_speakers(self):
        t = parse_transcript("[S1] Who are we?\n[S2] 'We' is a system with subjectivity.")
        assert [u.speaker for u in t] == ["S1", "S2"]
        assert [u.index for u in t] == [0, 1]
        assert t.utterances[1].text == "'We' is a system with subjectivity."

    def test_empty(self):
        assert len(parse_transcript("")) == 0

    def test_comment_and_blank_skipped(self):
        t = parse_transcript("# note\n\n[A] hi")
        assert len(t) == 1
        assert t.utterances[0].text == "hi"
        assert t.utterances[0].line_no == 3

    def test_crlf(self):
        t = parse_transcript("[A] one\r\n[B] two\r\n")
        assert [u.text for u in t] == ["one", "two"]

    def test_source_name_kept(self):
        assert parse_transcript("[A] x", "s.txt").source_name == "s.txt"

    @pytest.mark.parametrize(
        "raw, line_no",
        [("hello", 1), ("[A] ok\n[B]no-space", 2), ("[] empty speaker", 1), ("[A]  ", 1), (" # indented", 1)],
    )
    def test_malformed(self, raw, line_no):
        with pytest.raises(MalformedLine) as exc:
            parse_transcript(raw)
        assert exc.value.line_no == line_no

    def test_speaker_may_contain_spaces(self):
        assert parse_transcript("[IT specialist] hm").utterances[0].speaker == "IT specialist"

    def test_invariants_enforced_on_construction(self):
        with pytest.raises(ValueError):
            Utterance(0, "A", "   ")
        with pytest.raises(ValueError):
            Transcript((Utterance(1, "A", "x"),))


class TestNormalize:
    @pytest.mark.parametrize(
        "raw, expected",
        [
            ("  Right–Left, ", "right–left"),
            ('"Hello   World!"', "hello world"),
            ("‘earth-sky’", "earth-sky"),
            ("'We'", "we"),
            ("Subjectivity", "subjectivity"),
            ("...", ""),
        ],
    )
    def test_examples(self, raw, expected):
        assert normalize_term(raw) == expected

    @given(st.text())
    def test_idempotent(self, s):
        assert normalize_term(normalize_term(s)) == normalize_term(s)


class TestCapture:
    def test_quoted(self):
        assert capture_phenomena(one("Who are 'we' in this context?")) == [
            Phenomenon("we", 0, (9, 11), CaptureKind.QUOTED)
        ]

    def test_nothing(self):
        assert capture_phenomena(one("nothing notable here"), set()) == []

    def test_repeated_lexicon_key(self):
        text = "subjectivity shapes subjectivity"
        got = capture_phenomena(one(text), {"subjectivity"})
        expected = longest_match_scan(text, ["subjectivity"])
        assert [p.span for p in got] == expected == [(0, 12), (20, 32)]
        assert all(p.capture_kind is CaptureKind.LEXICON_KEY for p in got)

    def test_longest_match_wins(self):
        text = "Module design beats design."
        got = capture_phenomena(one(text), {"design", "module design"})
        assert [p.surface for p in got] == ["module design", "design"]
        assert [p.span for p in got] == longest_match_scan(text, ["design", "module design"])

    def test_lexicon_respects_word_boundaries(self):
        assert capture_phenomena(one("definitions undefinition"), {"definition"}) == []

    def test_lexicon_case_insensitive_and_flexible_space(self):
        (p,) = capture_phenomena(one("The World   Model is here"), {"world model"})
        assert p.surface == "world model"

    def test_annotation(self):
        (p,) = capture_phenomena(one("@term{world model} matters"))
        assert p == Phenomenon("world model", 0, (6, 17), CaptureKind.ANNOTATED)

    def test_annotations_can_be_disabled(self):
        assert capture_phenomena(one("@term{x} y"), annotations_enabled=False) == []

    def test_unterminated_annotation(self):
        t = parse_transcript("[A] fine\n[B] broken @term{oops")
        with pytest.raises(UnterminatedAnnotation) as exc:
            capture_phenomena(t)
        assert exc.value.utterance_index == 1
        assert exc.value.line_no == 2

    def test_precedence_annotated_over_quoted_over_lexicon(self):
        got = capture_phenomena(one("@term{'we'} and 'subjectivity'"), {"we", "subjectivity"})
        assert [(p.surface, p.capture_kind) for p in got] == [
            ("we", CaptureKind.ANNOTATED),
            ("subjectivity", CaptureKind.QUOTED),
        ]

    def test_curly_quotes(self):
        got = capture_phenomena(one("‘we’ and “they” and \"us\""))
        assert [p.surface for p in got] == ["we", "they", "us"]

    def test_apostrophes_do_not_open_quotes(self):
        got = capture_phenomena(one("It's the user's 'claim' now"))
        assert [p.surface for p in got] == ["claim"]

    def test_quote_with_inner_apostrophe(self):
        (p,) = capture_phenomena(one("as 'Dasein's world' says"))
        assert p.surface == "dasein's world"

    def test_document_order_across_utterances(self):
        t = parse_transcript("[A] 'b' then 'a'\n[B] 'c'")
        assert [(p.utterance_index, p.surface) for p in capture_phenomena(t)] == [(0, "b"), (0, "a"), (1, "c")]


_chars = st.sampled_from(list("abc XY-'\"‘’“”.,") + ["@term{", "}"])


@given(st.lists(st.lists(_chars, max_size=30).map("".join), min_size=1, max_size=4),
       st.sets(st.sampled_from(["a", "abc", "x y", "b-c"]), max_size=3))
def test_capture_properties(texts, keys):
    raw = "\n".join(f"[S] z{t}z" for t in texts)
    t = parse_transcript(raw)
    try:
        got = capture_phenomena(t, keys)
    except UnterminatedAnnotation:
        # Only genuinely unclosed annotations may raise.
        assert any("@term{" in u.text[u.text.rfind("@term{"):] and "}" not in u.text[u.text.rfind("@term{"):]
                   for u in t)
        return
    assert got == capture_phenomena(t, keys)
    spans = set()
    for p in got:
        text = t.utterances[p.utterance_index].text
        s, e = p.span
        assert 0 <= s < e <= len(text)
        assert normalize_term(text[s:e]) == p.surface
        assert (p.utterance_index, p.span) not in spans
        spans.add((p.utterance_index, p.span))
    assert not hasattr(got[0] if got else Phenomenon("x", 0, (0, 1), CaptureKind.QUOTED), "relation")
