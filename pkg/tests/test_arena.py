import random

import pytest

from urgency.arena import Status, owner, solve_bounded, solve_exact, successors
from urgency.dfa import terminate_dfa
from urgency.errors import GrammarError
from urgency.selftest import random_dfa, random_term
from urgency.syntax import parse_grammar, parse_term
from urgency.terms import (
    ERR,
    Grammar,
    Letter,
    Player,
    SKIP,
    choice,
    is_word_term,
    leading_subterm,
    nt,
    term_size,
)


def g_empty(n=2):
    return Grammar.empty(n)


def test_successors_choice():
    succ = successors(g_empty(), parse_term("E2{b,c}"))
    assert set(succ) == {Letter("b"), Letter("c")}


def test_successors_resolve_higher_urgency_first():
    t = parse_term("(a_l A1 a_r) . (b E2 c)")
    succ = successors(g_empty(), t)
    assert set(succ) == {parse_term("(a_l A1 a_r) . b"), parse_term("(a_l A1 a_r) . c")}


def test_successors_nonterminal():
    g = Grammar({"X": Letter("a")}, 1)
    assert successors(g, nt("X")) == [Letter("a")]
    with pytest.raises(GrammarError):
        successors(g_empty(1), nt("Y"))


def test_owner_follows_leading_subterm():
    assert owner(parse_term("(a_l A1 a_r) . (b E2 c)"), 2) is Player.EVE
    assert owner(parse_term("(a_l A1 a_r) . (b E1 c)"), 2) is Player.ADAM
    assert owner(Letter("a"), 2) is None


def test_fig1_verdicts(fig1_dfa):
    g = g_empty(2)
    assert solve_exact(g, parse_term("(a_l A1 a_r) . (b E1 c)"), fig1_dfa).status is Status.WIN
    assert solve_exact(g, parse_term("(a_l A1 a_r) . (b E2 c)"), fig1_dfa).status is Status.LOSE
    assert solve_exact(g, ERR, fig1_dfa).status is Status.LOSE


def test_strategy_witness_replays_to_a_win(fig1_dfa):
    g = g_empty(2)
    verdict = solve_exact(g, parse_term("(a_l A1 a_r) . (b E1 c)"), fig1_dfa)
    assert verdict.status is Status.WIN

    def replay(t, depth=0):
        assert depth < 50
        if is_word_term(t):
            assert fig1_dfa.member(__import__("urgency.terms", fromlist=["flatten_word"]).flatten_word(t))
            return
        succ = successors(g, t)
        if owner(t, 2) is Player.ADAM:
            for s in succ:
                replay(s, depth + 1)
        else:
            assert t in verdict.strategy or len(succ) == 1
            replay(verdict.strategy.get(t, succ[0]), depth + 1)

    replay(parse_term("(a_l A1 a_r) . (b E1 c)"))


def test_solve_exact_rejects_nonterminals():
    with pytest.raises(GrammarError):
        solve_exact(Grammar({"X": SKIP}, 1), nt("X"), terminate_dfa(["a"]))


def test_bounded_cycle_detection():
    g = parse_grammar("maxurg 1;\n@X = @X;")
    o = terminate_dfa(["a"])
    assert solve_bounded(g, nt("X"), o, 100).status is Status.LOSE
    assert solve_bounded(g, nt("X"), o, 100, cycle_detection=False).status is Status.UNKNOWN


def test_bounded_recursive_win():
    g = parse_grammar("maxurg 1;\n@X = skip E1 (a . @X);")
    o = terminate_dfa(["a"])  # every terminating word is acceptable
    assert solve_bounded(g, nt("X"), o, 50).status is Status.WIN


def test_bounded_matches_exact_on_recursion_free_terms():
    rng = random.Random(21)
    for _ in range(150):
        o = random_dfa(rng, 3, ("a", "b"))
        t = random_term(rng, 2, ("a", "b"))
        g = g_empty(2)
        budget = term_size(t) * (term_size(t) + 1)
        assert solve_bounded(g, t, o, budget).status is solve_exact(g, t, o).status


def test_budget_monotonicity():
    rng = random.Random(22)
    g = parse_grammar("maxurg 1;\n@X = skip E1 (a . @X) A1 (a . a . @X);")
    t = nt("X")
    for _ in range(20):
        o = random_dfa(rng, 2, ("a",))
        previous = None
        for budget in (0, 1, 2, 4, 8, 12):
            status = solve_bounded(g, t, o, budget).status
            if previous is not None and previous is not Status.UNKNOWN:
                assert status is previous
            previous = status


def test_bounded_memoization_respects_play_relative_cycles():
    # A cycle through the start: an unguarded alternative must not poison
    # the verdict of the guarded one.
    g = parse_grammar("maxurg 1;\n@X = a E1 @Y;\n@Y = @X;")
    o = terminate_dfa(["a"])
    assert solve_bounded(g, nt("X"), o, 100).status is Status.WIN
    assert solve_bounded(g, nt("Y"), o, 100).status is Status.WIN
