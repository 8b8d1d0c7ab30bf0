import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aggrewrite.core import TOP, AggFunction, Atom, Comparator, Program, PropLiteral, Rule, lit
from aggrewrite.fuzz import FuzzConfig, random_program
from aggrewrite.textio import ParseError, format_literal, parse_literal, parse_program, print_program

from conftest import FIXTURES, load


class TestParse:
    def test_double_negation(self):
        (rule,) = parse_program("p :- ~~p.").rules
        assert rule.head == (Atom("p"),)
        assert rule.body == (PropLiteral(Atom("p"), 2),)

    def test_pi1_aggregate_rule(self):
        (rule,) = parse_program("unequal :- #sum[1:x1, 2:x2, 2:y1, 3:y2] != 5.").rules
        (agg,) = rule.body
        assert agg.function is AggFunction.SUM
        assert agg.comparator is Comparator.NE and agg.bound == 5
        assert agg.elements == ((1, lit("x1")), (2, lit("x2")), (2, lit("y1")), (3, lit("y2")))

    def test_constraint(self):
        (rule,) = parse_program(":- ~unequal.").rules
        assert rule.head == ()
        assert rule.body == (lit("unequal", 1),)

    def test_disjunctive_fact(self):
        (rule,) = parse_program("p | q.").rules
        assert set(rule.head) == {Atom("p"), Atom("q")}
        assert rule.body == ()

    def test_bottom_in_head_and_body(self):
        a, b = parse_program("#false :- p. q :- ~#false.").rules
        assert a.is_constraint and a.raw_head_had_bottom
        assert b.body == (TOP,)

    def test_comments_and_whitespace(self):
        text = "% a comment\np :-\n   q. % trailing\n"
        assert parse_program(text) == parse_program("p :- q.")

    def test_empty_elements(self):
        (rule,) = parse_program("p :- #sum[] >= 0, #even[].").rules
        assert [len(a.elements) for a in rule.body] == [0, 0]

    def test_count_and_parity(self):
        (rule,) = parse_program("p :- #count[q, ~r] >= 1, #odd[q].").rules
        count, odd = rule.body
        assert count.elements == ((1, lit("q")), (1, lit("r", 1)))
        assert odd.comparator is None and odd.bound is None

    def test_duplicate_rules_preserved(self):
        assert len(parse_program("p. p.")) == 2

    def test_negative_weights_and_bounds(self):
        (rule,) = parse_program("p :- #sum[-1:q] > -3.").rules
        assert rule.body[0].elements == ((-1, lit("q")),) and rule.body[0].bound == -3


class TestParseErrors:
    @pytest.mark.parametrize(
        "text",
        [
            "p :- ~#sum[1:q] > 0.",
            "p :- #even[q] > 0.",
            "p :- #sum[9223372036854775808:q] > 0.",
            "p :- #sum[1:q] > -9223372036854775809.",
            "p :- q",
            "P :- q.",
            "p :- #sum[1:q].",
            "p :- #count[1:q] > 0.",
            "p :- q $ r.",
            "__aux_1 :- q.",
        ],
    )
    def test_rejected(self, text):
        with pytest.raises(ParseError):
            parse_program(text)

    def test_span_points_at_problem(self):
        with pytest.raises(ParseError) as info:
            parse_program("p.\nq :- ~#count[r] > 0.")
        assert (info.value.span.line, info.value.span.column) == (2, 6)

    def test_reserved_allowed_on_request(self):
        (rule,) = parse_program("__aux_1 :- q.", allow_reserved=True).rules
        assert rule.head == (Atom("__aux_1"),)

    def test_int64_extremes_accepted(self):
        text = "p :- #sum[-9223372036854775808:q] > 9223372036854775807."
        assert parse_program(text).rules[0].body[0].bound == 2**63 - 1


class TestPrint:
    def test_pi1_fixpoint(self):
        text = (FIXTURES / "pi1.lp").read_text()
        once = print_program(parse_program(text))
        assert once == text
        assert print_program(parse_program(once)) == once

    def test_constraint(self):
        assert print_program(Program((Rule((), (lit("b"),)),))) == ":- b.\n"

    def test_top(self):
        assert format_literal(TOP) == "~#false"

    def test_empty_rule_is_bottom(self):
        assert print_program(Program((Rule(()),))) == "#false.\n"

    def test_fact_and_disjunction(self):
        p = Program((Rule((Atom("p"),)), Rule((Atom("p"), Atom("q")), (lit("r", 2),))))
        assert print_program(p) == "p.\np | q :- ~~r.\n"

    def test_aggregate_forms(self):
        for text in ["#sum[1:p, -1:q] > -1", "#count[p, ~q] >= 1", "#even[p]", "#avg[] = 0", "#min[2:~~a] != -4"]:
            assert format_literal(parse_literal(text)) == text

    def test_lf_line_endings(self):
        assert "\r" not in print_program(parse_program("p :- q.\r\nq.\r\n"))


@pytest.mark.parametrize("name", ["pi1", "pi2", "pi3", "pi3prime", "pi4"])
def test_fixture_round_trip(name):
    p = load(name)
    assert parse_program(print_program(p)) == p


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_round_trip_generated_programs(seed):
    import random

    config = FuzzConfig(atom_count=6, rule_count=6, weight_range=3, bound_range=6)
    p = random_program(random.Random(seed), config)
    text = print_program(p)
    assert parse_program(text) == p
    assert print_program(parse_program(text)) == text
