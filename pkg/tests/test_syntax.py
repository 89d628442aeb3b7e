import random

import pytest

from urgency.errors import ParseError
from urgency.selftest import random_term
from urgency.syntax import parse_grammar, parse_term, print_grammar, print_term
from urgency.terms import Letter, adam, eve


def test_parse_choice():
    t = parse_term("E2{b,c}")
    assert t == eve(2, Letter("b"), Letter("c"))


def test_parse_infix_sugar():
    assert parse_term("a . (a_l A1 a_r)") == parse_term("a . A1{a_l, a_r}")
    # same-operator chains flatten, mixed ones associate to the right
    assert parse_term("x E2 y E2 z") == eve(2, *[Letter(s) for s in "xyz"])
    assert parse_term("x E1 y A1 z") == eve(1, Letter("x"), adam(1, Letter("y"), Letter("z")))


def test_parse_empty_choice_is_an_error():
    with pytest.raises(ParseError) as err:
        parse_term("E1{}")
    assert err.value.line == 1


def test_parse_reports_position():
    with pytest.raises(ParseError) as err:
        parse_term("a .\n. b")
    assert err.value.line == 2


def test_quoted_symbols_roundtrip():
    t = parse_term("'(q0,a,q1)' . x")
    assert t == parse_term(print_term(t))
    assert print_term(Letter("(q0,a,q1)")).startswith("'")


def test_print_parse_identity_on_random_terms():
    rng = random.Random(9)
    for _ in range(300):
        t = random_term(rng, 3, depth=4, max_nodes=25)
        assert parse_term(print_term(t)) == t


def test_nested_concat_roundtrip():
    from urgency.terms import Concat

    t = Concat(Letter("a"), Concat(Letter("b"), Letter("c")))
    assert parse_term(print_term(t)) == t


def test_grammar_file_roundtrip():
    text = "maxurg 2;\n@X = a . E2{b, @Y};\n@Y = skip;\n"
    g = parse_grammar(text)
    assert g.max_urgency == 2
    assert g.defs["Y"].__class__.__name__ == "Skip"
    assert parse_grammar(print_grammar(g)).defs == g.defs


def test_grammar_errors():
    with pytest.raises(ParseError):
        parse_grammar("@X = a;")  # missing maxurg header
    with pytest.raises(ParseError):
        parse_grammar("maxurg 1;\n@X = E2{a};")  # urgency out of range
    with pytest.raises(ParseError):
        parse_grammar("maxurg 1;\n@X = @Y;")  # undefined non-terminal
    with pytest.raises(ParseError):
        parse_grammar("maxurg 1;\n@X = a;\n@X = b;")  # duplicate
