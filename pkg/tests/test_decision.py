import random

import pytest

from conftest import bruteforce_preorder, contextual_suffix_family
from urgency.arena import solve_exact
from urgency.decision import (
    Caps,
    PreorderDecider,
    arrow_translate,
    decide_equiv,
    decide_preorder,
    pair_symbol,
)
from urgency.dfa import Dfa, terminate_dfa
from urgency.errors import ResourceLimitError
from urgency.monoid import build_monoid
from urgency.selftest import random_dfa, random_term
from urgency.syntax import parse_term, print_term
from urgency.terms import ERR, Grammar, HOLE, Letter, eve, plug


def test_arrow_translation_table():
    two = Dfa(("0", "1"), "0", ("a",), {("0", "a"): "1", ("1", "a"): "1"}, frozenset(["1"]))
    system = arrow_translate(Grammar.empty(1), Letter("a"), two)
    assert system.translate(ERR) == ERR
    assert system.translate(Letter("a")) == eve(
        1, Letter(pair_symbol("0", "1")), Letter(pair_symbol("1", "1"))
    )
    assert system.dfa.initial == "0"
    assert set(system.dfa.finals) == {"1"}
    # mismatching pairs fall into the absorbing failure state
    q = system.dfa.step("0", pair_symbol("1", "0"))
    assert q not in system.dfa.finals
    assert system.dfa.step(q, pair_symbol("0", "1")) == q


def test_arrow_faithfulness_random():
    rng = random.Random(51)
    for _ in range(80):
        o = random_dfa(rng, 3, ("a", "b"))
        t = random_term(rng, 2, ("a", "b"))
        g = Grammar.empty(2)
        system = arrow_translate(g, t, o)
        want = solve_exact(g, t, o).is_win
        got = solve_exact(system.grammar, system.term, system.dfa).is_win
        assert got == want


def test_fig1_preorder(fig1_dfa):
    g = Grammar.empty(2)
    fwd = decide_preorder(g, parse_term("b E2 c"), parse_term("b E1 c"), fig1_dfa)
    assert fwd.holds
    bwd = decide_preorder(
        g, parse_term("b E1 c"), parse_term("b E2 c"), fig1_dfa, want_witness=True
    )
    assert not bwd.holds
    assert bwd.witness == parse_term("A1{a_l, a_r} . _")
    # the witness is honest: it separates the two terms under the exact solver
    assert solve_exact(g, plug(bwd.witness, parse_term("b E1 c")), fig1_dfa).is_win
    assert not solve_exact(g, plug(bwd.witness, parse_term("b E2 c")), fig1_dfa).is_win


def test_preorder_reflexive(fig1_dfa):
    g = Grammar.empty(2)
    t = parse_term("(a_l A1 a_r) . (b E2 c)")
    assert decide_preorder(g, t, t, fig1_dfa).holds


def test_equiv_examples(fig1_dfa):
    g1 = Grammar.empty(1)
    o = terminate_dfa(["a", "b"])
    assert decide_equiv(g1, parse_term("a . skip"), parse_term("a"), o).holds
    assert decide_equiv(g1, parse_term("E1{a}"), parse_term("a"), o).holds
    g2 = Grammar.empty(2)
    assert not decide_equiv(g2, parse_term("b E1 c"), parse_term("b E2 c"), fig1_dfa).holds


def test_agreement_with_bruteforce_oracle():
    rng = random.Random(52)
    g = Grammar.empty(1)
    checked = 0
    while checked < 40:
        o = random_dfa(rng, 3, ("a", "b"))
        m = build_monoid(o)
        if len(m) > 6:
            continue
        suffixes = contextual_suffix_family(m)
        decider = PreorderDecider(g, o)
        for _ in range(2):
            t1 = random_term(rng, 1, ("a", "b"))
            t2 = random_term(rng, 1, ("a", "b"))
            got = decider.decide(t1, t2).holds
            want = bruteforce_preorder(g, t1, t2, o, m, suffixes)
            assert got == want, (print_term(t1), print_term(t2), o.to_json())
            checked += 1


def test_paths_agree_on_right_separating_objectives():
    rng = random.Random(53)
    g = Grammar.empty(1)
    checked = 0
    while checked < 15:
        o = random_dfa(rng, 3, ("a", "b"))
        m = build_monoid(o)
        if len(m) > 5 or not m.is_right_separating():
            continue
        decider = PreorderDecider(g, o)
        for _ in range(2):
            t1 = random_term(rng, 1, ("a", "b"))
            t2 = random_term(rng, 1, ("a", "b"))
            fast = decider.decide(t1, t2, method="rightsep").holds
            char = decider.decide(t1, t2, method="char").holds
            auto = decider.decide(t1, t2).holds
            assert fast == char == auto
            checked += 1


def chain_dfa():
    # accepts exactly a.b; three live states plus the sink
    states = ("q0", "q1", "acc", "dead")
    delta = {}
    for q in states:
        for x in ("a", "b"):
            delta[(q, x)] = "dead"
    delta[("q0", "a")] = "q1"
    delta[("q1", "b")] = "acc"
    return Dfa(states, "q0", ("a", "b"), delta, frozenset(["acc"]))


def test_characteristic_terms_bottom_excluded():
    decider = PreorderDecider(Grammar.empty(1), chain_dfa())
    chars = decider.characteristic_terms()
    assert chars, "some context must have solutions"
    for char in chars:
        assert char.solutions  # the empty solution space never yields a term


def test_characteristic_terms_for_terminate():
    # the hole context under the all-words objective: solutions are exactly
    # the classes that win from the initial state
    o = terminate_dfa(["a"])
    decider = PreorderDecider(Grammar.empty(1), o)
    algebra = decider.arrow_algebra()
    chars = decider.characteristic_terms()
    winning = frozenset(
        algebra.leaf(c) for c in algebra.monoid.class_ids if algebra.monoid.class_wins(c)
    )
    assert winning in {c.solutions for c in chars}


def test_characteristic_terms_match_definition():
    # wins(C[t]) iff the characteristic term is dominated by t, for every
    # level-0 insert and every characteristic term of the decider
    decider = PreorderDecider(Grammar.empty(1), chain_dfa())
    algebra = decider.arrow_algebra()
    for char in decider.characteristic_terms():
        for cls in algebra.monoid.class_ids:
            insert = algebra.nf_of_class(cls)
            dominated = algebra.dominates(char.lifted, insert)
            assert dominated == (algebra.leaf(cls) in char.solutions)


def test_characteristic_terms_cap_on_large_objectives(fig1_dfa):
    decider = PreorderDecider(Grammar.empty(1), fig1_dfa, Caps(contexts=1000))
    with pytest.raises(ResourceLimitError):
        decider.characteristic_terms()


def test_enum_guard_reports_counts(fig1_dfa):
    g = Grammar.empty(2)
    caps = Caps(contexts=10, nf_terms=10)
    decider = PreorderDecider(g, fig1_dfa, caps)
    with pytest.raises(ResourceLimitError) as err:
        decider.decide(parse_term("b E1 c"), parse_term("c"), method="enum")
    assert err.value.needed > err.value.limit


def test_witness_search_empty_context(fig1_dfa):
    g = Grammar.empty(2)
    out = decide_preorder(
        g, parse_term("a_l . c"), parse_term("err"), fig1_dfa, want_witness=True
    )
    assert not out.holds
    assert out.witness == HOLE
