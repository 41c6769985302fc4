import pytest
from hypothesis import given, strategies as st

from ontoscope.categorical import (
    IMPORTED_TRIPLE,
    Assertion,
    ConceptGraph,
    ConceptNode,
    NodeFlag,
    Relation,
    RelationEdge,
    Rule,
    build_graph,
    extract_assertions,
    import_triples,
    load_rule_table,
    parse_rule_table,
)
from ontoscope.exceptions import MalformedRule, MalformedTriple, UnknownPredicate
from ontoscope.ingest import capture_phenomena, parse_transcript

DT, DO, LT, MO = Relation.DEFINED_THROUGH, Relation.DEPENDS_ON, Relation.LINKED_TO, Relation.METAPHOR_OF


@pytest.fixture(scope="module")
def rules(config_dir_module):
    return load_rule_table(config_dir_module / "rules.tsv")


@pytest.fixture(scope="module")
def config_dir_module():
    from ontoscope.config import bundled_config_dir

    return bundled_config_dir()


def extract(text, rules, keys=()):
    t = parse_transcript(text)
    return extract_assertions(t, capture_phenomena(t, keys), rules)


def triples_of(assertions):
    return [(a.subject, a.relation, a.object) for a in assertions]


class TestExtract:
    def test_system_with(self, rules):
        got = extract("[B] 'We' is a system with subjectivity", rules, {"subjectivity"})
        assert triples_of(got) == [("we", DT, "subjectivity")]
        assert got[0].fragment == "'We' is a system with subjectivity"
        assert got[0].utterance_index == 0
        assert got[0].intended is None

    def test_no_phenomena(self, rules):
        assert extract("[A] hello world", rules) == []

    def test_depends_on(self, rules):
        got = extract("[A] 'universality of concepts' depends on 'experience'", rules)
        assert triples_of(got) == [("universality of concepts", DO, "experience")]

    def test_both_sides_must_be_captured(self, rules):
        assert extract("[A] 'we' depends on experience", rules) == []

    def test_chain_yields_overlapping_matches(self, rules):
        got = extract("[A] 'a' depends on 'b', which depends on 'c'", rules)
        assert triples_of(got) == [("a", DO, "b")]
        got = extract("[A] 'a' depends on 'b' depends on 'c'", rules)
        assert triples_of(got) == [("a", DO, "b"), ("b", DO, "c")]

    def test_articles_before_object_ignored(self, rules):
        got = extract("[A] the 'neocortex' is like the 'transformer'", rules)
        assert triples_of(got) == [("neocortex", MO, "transformer")]

    def test_implying(self, rules):
        got = extract("[A] A 'metaphor', implying 'module design', is poetry", rules)
        assert triples_of(got) == [("metaphor", MO, "module design")]

    def test_tied_to_is_linked(self, rules):
        assert triples_of(extract("[A] 'we' is tied to 'subjectivity'", rules)) == [("we", LT, "subjectivity")]

    def test_reflexive_rule(self, rules):
        got = extract("[A] Indeed 'consciousness' understands itself.", rules)
        assert triples_of(got) == [("consciousness", DT, "consciousness")]
        assert got[0].fragment == "'consciousness' understands itself"

    def test_whole_quote_is_one_term(self, rules):
        # The quoted span swallows the inner term, so the reflexive rule does not fire.
        assert extract("[A] as in 'consciousness understands itself'", rules) == []

    def test_same_term_in_two_slots_ignored(self, rules):
        assert extract("[A] 'we' depends on 'we'", rules) == []

    def test_order_is_utterance_then_priority_then_position(self, rules):
        text = "[A] 'x' depends on 'y' and 'p' is defined through 'q'\n[B] 'm' is tied to 'n'"
        assert triples_of(extract(text, rules)) == [("p", DT, "q"), ("x", DO, "y"), ("m", LT, "n")]

    def test_annotations_participate(self, rules):
        got = extract("[A] @term{world model} depends on @term{data}", rules)
        assert triples_of(got) == [("world model", DO, "data")]
        assert got[0].fragment == "@term{world model} depends on @term{data}"

    def test_word_boundaries_in_connectors(self, rules):
        assert extract("[A] 'x' is avocado with 'y'", rules) == []
        assert extract("[A] 'x' redepends on 'y'", rules) == []


class TestRuleTable:
    def test_default_table_priorities(self, rules):
        assert [r.priority for r in rules] == sorted(r.priority for r in rules)
        assert {r.relation for r in rules} == set(Relation)
        assert [r.reflexive for r in rules].count(True) == 1

    def test_custom_rule(self):
        table = parse_rule_table("# c\n5\t<A> grounds <B>\tDependsOn\n")
        got = extract("[A] 'soil' grounds 'plant'", table)
        assert triples_of(got) == [("soil", DO, "plant")]

    def test_equal_priority_keeps_file_order(self):
        table = parse_rule_table("1\t<A> zz <B>\tDependsOn\n1\t<A> yy <B>\tLinkedTo\n")
        assert [r.pattern for r in table] == ["<A> zz <B>", "<A> yy <B>"]

    @pytest.mark.parametrize(
        "line",
        ["x\t<A> a <B>\tDependsOn", "1\t<A> a <B>", "1\t<A> a <B>\tCauses", "1\t<B> only\tDependsOn",
         "1\t<A> <A>\tDependsOn"],
    )
    def test_malformed(self, line):
        with pytest.raises(MalformedRule) as exc:
            parse_rule_table("# header\n" + line)
        assert exc.value.line_no == 2

    def test_rule_compile_direct(self):
        r = Rule.compile(1, "<A> feeds <B>", DO)
        assert not r.reflexive


class TestBuildGraph:
    def test_recursion_pair(self):
        g = build_graph([Assertion("we", DT, "subjectivity", "f"), Assertion("subjectivity", DO, "we", "f")])
        assert [n.label for n in g.nodes] == ["we", "subjectivity"]
        assert [e.key for e in g.edges] == [(0, 1, DT), (1, 0, DO)]

    def test_empty(self):
        g = build_graph([])
        assert g.nodes == () and g.edges == ()

    def test_duplicate_collapses(self):
        a = Assertion("we", DT, "subjectivity", "f", utterance_index=0)
        g = build_graph([a, Assertion("we", DT, "subjectivity", "f", utterance_index=3)])
        assert len(g.edges) == 1
        assert g.edges[0].provenance == 0

    def test_parallel_relations_are_distinct_edges(self):
        g = build_graph([Assertion("a", DT, "b", "f"), Assertion("a", DO, "b", "f")])
        assert len(g.edges) == 2

    def test_metaphor_flag(self):
        g = build_graph([Assertion("neocortex", MO, "transformer", "f"), Assertion("transformer", DT, "neocortex", "f")])
        assert g.nodes[0].flags == {NodeFlag.METAPHOR_TERM}
        assert g.nodes[1].flags == frozenset()

    def test_graph_invariants(self):
        with pytest.raises(ValueError):
            ConceptGraph((ConceptNode(0, "a"), ConceptNode(1, "a")))
        with pytest.raises(ValueError):
            ConceptGraph((ConceptNode(0, "a"),), (RelationEdge(0, 1, DO, 0),))
        with pytest.raises(ValueError):
            ConceptGraph((ConceptNode(0, "a"), ConceptNode(1, "b")), (RelationEdge(0, 1, DO, 0),) * 2)

    def test_without_edge_keeps_nodes(self):
        g = build_graph([Assertion("a", DO, "b", "f"), Assertion("b", DO, "a", "f")])
        h = g.without_edge(0, 1, DO)
        assert h.nodes == g.nodes and [e.key for e in h.edges] == [(1, 0, DO)]
        assert len(g.edges) == 2


_terms = st.sampled_from(["a", "b", "c", "d", "e"])
_assertions = st.lists(st.tuples(_terms, st.sampled_from(list(Relation)), _terms), max_size=15)


@given(_assertions)
def test_rebuild_from_edges_is_isomorphic(items):
    g = build_graph(Assertion(s, r, o, "f", utterance_index=i) for i, (s, r, o) in enumerate(items))
    h = build_graph(g.to_assertions())
    assert h == g
    assert build_graph(Assertion(s, r, o, "f", utterance_index=i) for i, (s, r, o) in enumerate(items)) == g


class TestImportTriples:
    def test_single(self):
        g = import_triples('"we" defined_through "subjectivity"\n', ConceptGraph())
        assert [n.label for n in g.nodes] == ["we", "subjectivity"]
        assert g.edges == (RelationEdge(0, 1, DT, IMPORTED_TRIPLE),)

    def test_empty_file_leaves_graph(self):
        base = build_graph([Assertion("a", DO, "b", "f", utterance_index=0)])
        assert import_triples("", base) == base
        assert import_triples("# only a comment\n\n", base) == base

    def test_triangle(self):
        text = '"a" depends_on "b"\n"b" depends_on "c" .\n"c" depends_on "a"\n'
        g = import_triples(text)
        # Hand-applied grammar: three distinct terms in first-mention order, one edge per line.
        assert [n.label for n in g.nodes] == ["a", "b", "c"]
        assert [e.key for e in g.edges] == [(0, 1, DO), (1, 2, DO), (2, 0, DO)]

    def test_merge_does_not_mutate_input(self):
        base = build_graph([Assertion("we", DT, "subjectivity", "f", utterance_index=2)])
        g = import_triples('"subjectivity" depends_on "we"\n"neocortex" metaphor_of "we"', base)
        assert len(base.edges) == 1
        assert [e.provenance for e in g.edges] == [2, IMPORTED_TRIPLE, IMPORTED_TRIPLE]
        assert NodeFlag.METAPHOR_TERM in g.nodes[g.node_id("neocortex")].flags

    def test_normalizes_terms(self):
        g = import_triples('"  World  Model " linked_to "AGI"')
        assert [n.label for n in g.nodes] == ["world model", "agi"]

    def test_unknown_predicate(self):
        with pytest.raises(UnknownPredicate) as exc:
            import_triples('"a" depends_on "b"\n"a" causes "b"')
        assert exc.value.line_no == 2

    @pytest.mark.parametrize("line", ['a depends_on "b"', '"a" depends_on', '"" depends_on "b"', '"a" "b" "c"'])
    def test_malformed(self, line):
        with pytest.raises(MalformedTriple) as exc:
            import_triples(line)
        assert exc.value.line_no == 1
