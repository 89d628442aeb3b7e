import itertools
import random

import pytest

from urgency.dfa import Dfa
from urgency.decision import decide_preorder
from urgency.encoders import (
    Circuit,
    HyperSpec,
    Nfa,
    Pds,
    encode_hyper,
    encode_imperfect_info,
    encode_inclusion,
    encode_mcvp,
    encode_pushdown,
    encode_simulation,
    extract_summaries,
)
from urgency.encoders.hyper import hyper_holds_bruteforce, tuple_symbol
from urgency.encoders.iig import knowledge_attractor
from urgency.encoders.inclusion import nfa_inclusion, nfa_simulated_by
from urgency.encoders.mcvp import Gate
from urgency.errors import ParseError
from urgency.monoid import build_monoid
from urgency.normalform import NfAlgebra
from urgency.syntax import parse_term
from urgency.terms import Player


def winner(game) -> bool:
    algebra = NfAlgebra(build_monoid(game.dfa), game.grammar.max_urgency)
    return algebra.wins(algebra.normalize(game.grammar, game.term))


def winner_bounded(game) -> bool:
    # For left-emitting encodings the product arena is finite, so the
    # bounded solver always decides; it doubles as a second route beside
    # the normalization-based winner used elsewhere.
    from urgency.arena import Status, solve_bounded

    verdict = solve_bounded(game.grammar, game.term, game.dfa, 10_000)
    assert verdict.status is not Status.UNKNOWN
    return verdict.status is Status.WIN


def fig1_nfas():
    a = Nfa(
        ("1", "2", "3", "4"),
        "1",
        ("a", "b", "c"),
        frozenset({("1", "a", "2"), ("2", "b", "3"), ("2", "c", "4")}),
        frozenset({"3", "4"}),
    )
    b = Nfa(
        ("1", "2", "3", "4", "5"),
        "1",
        ("a", "b", "c"),
        frozenset({("1", "a", "2"), ("1", "a", "3"), ("2", "b", "4"), ("3", "c", "5")}),
        frozenset({"4", "5"}),
    )
    return a, b


def random_nfa(rng, max_states=3, alphabet=("a", "b"), acyclic=False):
    while True:
        n = rng.randint(1, max_states)
        states = tuple(f"s{i}" for i in range(n))
        trans = set()
        for i, q in enumerate(states):
            for a in alphabet:
                for j, q2 in enumerate(states):
                    if acyclic and j <= i:
                        continue
                    if rng.random() < 0.4:
                        trans.add((q, a, q2))
        finals = frozenset(q for q in states if rng.random() < 0.4)
        if not acyclic or trans:
            return Nfa(states, states[0], alphabet, frozenset(trans), finals)


def test_fig1_inclusion_and_simulation_verdicts():
    a, b = fig1_nfas()
    assert nfa_inclusion(a, b) and not nfa_simulated_by(a, b)
    assert winner(encode_inclusion(a, b)) is False
    assert winner(encode_simulation(a, b)) is True


def test_encoded_urgencies():
    a, b = fig1_nfas()
    assert encode_inclusion(a, b).grammar.max_urgency == 2
    assert encode_simulation(a, b).grammar.max_urgency == 1
    assert encode_imperfect_info(a, {q: "h" for q in a.states}).grammar.max_urgency == 1


def test_inclusion_reflexive_and_empty_target():
    a, _ = fig1_nfas()
    assert winner(encode_inclusion(a, a)) is False
    x = Nfa(("p", "q"), "p", ("x",), frozenset({("p", "x", "q")}), frozenset({"q"}))
    empty = Nfa(("p", "q"), "p", ("x",), frozenset({("p", "x", "q")}), frozenset())
    assert winner(encode_inclusion(x, empty)) is True


def test_simulation_chain_vs_tree_family():
    # words ab and ac: the chain automaton commits late, the tree early
    chain = Nfa(
        ("0", "1", "2", "3"),
        "0",
        ("a", "b", "c"),
        frozenset({("0", "a", "1"), ("1", "b", "2"), ("1", "c", "3")}),
        frozenset({"2", "3"}),
    )
    tree = Nfa(
        ("0", "1l", "1r", "2", "3"),
        "0",
        ("a", "b", "c"),
        frozenset({("0", "a", "1l"), ("0", "a", "1r"), ("1l", "b", "2"), ("1r", "c", "3")}),
        frozenset({"2", "3"}),
    )
    assert nfa_simulated_by(tree, chain) and not nfa_simulated_by(chain, tree)
    assert winner(encode_simulation(tree, chain)) is False
    assert winner(encode_simulation(chain, tree)) is True


def test_inclusion_random_against_classical():
    rng = random.Random(61)
    for _ in range(25):
        a, b = random_nfa(rng), random_nfa(rng)
        assert winner(encode_inclusion(a, b)) == (not nfa_inclusion(a, b))


def test_simulation_random_against_classical():
    rng = random.Random(62)
    for _ in range(25):
        a, b = random_nfa(rng), random_nfa(rng)
        assert winner_bounded(encode_simulation(a, b)) == (not nfa_simulated_by(a, b))


def test_iig_trivial_win():
    a = Nfa(("s",), "s", ("x",), frozenset({("s", "x", "s")}), frozenset({"s"}))
    assert winner(encode_imperfect_info(a, {"s": "h"})) is True


def test_iig_perfect_information_matches_attractor():
    rng = random.Random(63)
    for _ in range(20):
        a = random_nfa(rng, 3)
        hd = {q: q for q in a.states}  # injective: perfect information

        # direct attractor on the plain game graph: Adam letters, Eve transitions
        win = set(a.finals)
        changed = True
        while changed:
            changed = False
            for q in a.states:
                if q in win:
                    continue
                if all(
                    any(t[2] in win for t in a.transitions if t[0] == q and t[1] == x)
                    for x in a.alphabet
                ):
                    win.add(q)
                    changed = True
        want = a.initial in win
        assert knowledge_attractor(a, hd) == want
        assert winner(encode_imperfect_info(a, hd)) == want


def test_iig_blind_pick_loses():
    # Adam's letter forces Eve to commit blindly under a constant abstraction
    a = Nfa(
        ("0", "l", "r", "gl", "gr"),
        "0",
        ("x", "y"),
        frozenset(
            {
                ("0", "x", "l"),
                ("0", "x", "r"),
                ("l", "x", "gl"),
                ("r", "y", "gr"),
            }
        ),
        frozenset({"gl", "gr"}),
    )
    hd = {q: "blur" for q in a.states}
    assert knowledge_attractor(a, hd) is False
    assert winner(encode_imperfect_info(a, hd)) is False


def test_iig_random_against_knowledge_oracle():
    rng = random.Random(64)
    for _ in range(25):
        a = random_nfa(rng, 3)
        hd = {q: rng.choice(("u", "v")) for q in a.states}
        assert winner(encode_imperfect_info(a, hd)) == knowledge_attractor(a, hd)


def hyper_fixture_system():
    return Nfa(
        ("0", "1", "2"),
        "0",
        ("x", "y"),
        frozenset({("0", "x", "1"), ("1", "y", "2")}),
        frozenset({"2"}),
    )


def prop_dfa(n, alphabet, accept):
    """Finite-word property over n-tuples from an acceptance predicate on tuple words."""
    tuples = [tuple_symbol(list(c)) for c in itertools.product(alphabet, repeat=n)]
    # brute-force DFA over bounded length via trie up to depth 4
    words = []

    def walk(prefix):
        if accept(prefix):
            words.append(tuple(prefix))
        if len(prefix) < 4:
            for t in tuples:
                walk(prefix + [t])

    walk([])
    from urgency.dfa import finite_language_dfa

    return finite_language_dfa(words, tuples)


def test_hyper_single_trace_trivial_property():
    sys = hyper_fixture_system()
    prop = prop_dfa(1, sys.alphabet, lambda w: True)
    spec = HyperSpec(sys, 1, prop)
    assert hyper_holds_bruteforce(spec, 4) is True
    assert winner(encode_hyper(spec)) is True


def test_hyper_agreement_two_traces():
    sys = hyper_fixture_system()  # single maximal trace x.y
    agree = prop_dfa(2, sys.alphabet, lambda w: all(s.count(",") == 1 and len(set(s[1:-1].split(","))) == 1 for s in w))
    spec = HyperSpec(sys, 2, agree)
    assert hyper_holds_bruteforce(spec, 4) is True
    assert winner(encode_hyper(spec)) is True


def test_hyper_divergent_traces_fail_agreement():
    sys = Nfa(
        ("0", "1", "2"),
        "0",
        ("x", "y"),
        frozenset({("0", "x", "1"), ("0", "y", "2")}),
        frozenset({"1", "2"}),
    )
    agree = prop_dfa(2, sys.alphabet, lambda w: all(len(set(s[1:-1].split(","))) == 1 for s in w))
    spec = HyperSpec(sys, 2, agree)
    assert hyper_holds_bruteforce(spec, 4) is False
    assert winner(encode_hyper(spec)) is False


def test_hyper_random_against_bruteforce():
    rng = random.Random(65)
    for trial in range(16):
        sys = random_nfa(rng, 3, ("x", "y"), acyclic=True)
        n = 1 + (trial % 2)
        tuples = [tuple_symbol(list(c)) for c in itertools.product(sys.alphabet, repeat=n)]
        k = rng.randint(1, 2)
        pstates = tuple(f"p{i}" for i in range(k))
        delta = {(p, t): rng.choice(pstates) for p in pstates for t in tuples}
        prop = Dfa(pstates, pstates[0], tuple(tuples), delta,
                   frozenset(p for p in pstates if rng.random() < 0.5))
        spec = HyperSpec(sys, n, prop)
        assert winner(encode_hyper(spec)) == hyper_holds_bruteforce(spec, 4)


def test_hyper_rejects_empty():
    sys = hyper_fixture_system()
    with pytest.raises(ParseError):
        HyperSpec(sys, 0, prop_dfa(1, sys.alphabet, lambda w: True))


def test_mcvp_fixed_examples():
    base = Circuit((Gate("P0", "true"),), "P0")
    game = encode_mcvp(base)
    left = parse_term(game.meta["query"]["left"])
    right = parse_term(game.meta["query"]["right"])
    assert decide_preorder(game.grammar, left, right, game.dfa).holds is True

    conj = Circuit(
        (Gate("P0", "false"), Gate("P1", "true"), Gate("P2", "and", ("P0", "P1"))), "P2"
    )
    game = encode_mcvp(conj)
    assert (
        decide_preorder(
            game.grammar,
            parse_term(game.meta["query"]["left"]),
            parse_term(game.meta["query"]["right"]),
            game.dfa,
        ).holds
        is False
    )


def random_circuit(rng, max_gates=8):
    gates = []
    for i in range(rng.randint(1, max_gates)):
        name = f"P{i}"
        if i == 0 or rng.random() < 0.3:
            gates.append(Gate(name, rng.choice(("true", "false"))))
        else:
            kind = rng.choice(("and", "or"))
            inputs = tuple(
                rng.sample([g.name for g in gates], k=rng.randint(1, min(3, len(gates))))
            )
            gates.append(Gate(name, kind, inputs))
    return Circuit(tuple(gates), gates[-1].name)


def test_mcvp_random_against_evaluator():
    rng = random.Random(66)
    for _ in range(25):
        circuit = random_circuit(rng)
        game = encode_mcvp(circuit)
        got = decide_preorder(
            game.grammar,
            parse_term(game.meta["query"]["left"]),
            parse_term(game.meta["query"]["right"]),
            game.dfa,
        ).holds
        assert got == circuit.evaluate()


def anbm_pds():
    return Pds(
        states=("qa", "qf"),
        owner={"qa": Player.EVE, "qf": Player.EVE},
        stack_alphabet=("Z", "A"),
        initial=("qa", "Z"),
        internal=frozenset(),
        pushes=frozenset({("qa", "a", "qa", ("A", "Z")), ("qa", "a", "qa", ("A", "A"))}),
        pops=frozenset({("qa", "b", "qf"), ("qf", "b", "qf")}),
        finals=frozenset({"qf"}),
    )


def astar_bstar_dfa():
    delta = {
        ("sa", "a"): "sa",
        ("sa", "b"): "sb",
        ("sb", "a"): "sx",
        ("sb", "b"): "sb",
        ("sx", "a"): "sx",
        ("sx", "b"): "sx",
    }
    return Dfa(("sa", "sb", "sx"), "sa", ("a", "b"), delta, frozenset(["sa", "sb"]))


def test_pushdown_one_step():
    one = Pds(
        states=("q", "qf"),
        owner={"q": Player.EVE, "qf": Player.EVE},
        stack_alphabet=("Z",),
        initial=("q", "Z"),
        internal=frozenset(),
        pushes=frozenset(),
        pops=frozenset({("q", "x", "qf"), ("qf", "x", "qf")}),
        finals=frozenset({"qf"}),
    )
    assert winner(encode_pushdown(one)) is True
    summaries = extract_summaries(one)
    options = summaries["frame(q,Z)"].options
    assert len(options) == 1
    ((src, _cls, dst),) = tuple(options[0])
    assert (src, dst) == ("q", "qf")


def test_pushdown_anbm_with_observation():
    game = encode_pushdown(anbm_pds(), astar_bstar_dfa())
    assert winner(game) is True


def test_pushdown_summaries_first_component():
    for pds, obs in ((anbm_pds(), astar_bstar_dfa()), (anbm_pds(), None)):
        summaries = extract_summaries(pds, obs)
        assert summaries
        for name, summary in summaries.items():
            state = name[len("frame("):-1].split(",")[0]
            for option in summary.options:
                assert option
                for (src, _cls, dst) in option:
                    assert src == state


def test_pushdown_validation():
    with pytest.raises(ParseError):
        Pds(
            states=("q",),
            owner={"q": Player.EVE},
            stack_alphabet=("Z",),
            initial=("q", "Z"),
            internal=frozenset(),
            pushes=frozenset({("q", "x", "q", ("Z", "Z", "Z"))}),
            pops=frozenset(),
            finals=frozenset(),
        )
    with pytest.raises(ParseError):
        Pds(
            states=("q", "f"),
            owner={"q": Player.EVE, "f": Player.EVE},
            stack_alphabet=("Z",),
            initial=("q", "Z"),
            internal=frozenset({("f", "x", "q")}),
            pushes=frozenset(),
            pops=frozenset(),
            finals=frozenset({"f"}),
        )


def test_pushdown_adam_states():
    # Adam chooses between a losing pop and one that lets Eve finish
    pds = Pds(
        states=("q", "bad", "qf"),
        owner={"q": Player.ADAM, "bad": Player.EVE, "qf": Player.EVE},
        stack_alphabet=("Z",),
        initial=("q", "Z"),
        internal=frozenset({("q", "x", "bad"), ("q", "x", "qf")}),
        pushes=frozenset(),
        pops=frozenset({("qf", "x", "qf"), ("bad", "y", "bad")}),
        finals=frozenset({"qf"}),
    )
    # Adam moves to "bad", where the only pop loops outside the finals
    assert winner(encode_pushdown(pds)) is False
