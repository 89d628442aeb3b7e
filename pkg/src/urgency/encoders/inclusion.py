"""Language inclusion and simulation as urgency games.

Eve walks an accepting run of the left automaton; the letter of each step
opens a demonic choice over the right automaton's transitions on that same
letter, so the emitted word is Adam's transition sequence. The objective
accepts exactly the words that fail to certify an accepting right-hand run
(broken chain, wrong endpoint) or in which Adam got stuck. The only
difference between the two encodings is the urgency of Eve's choice: with
urgency 2 she commits her whole run before Adam answers (inclusion), with
urgency 1 the players alternate (simulation).
"""

from __future__ import annotations

from typing import Dict, Tuple

from ..dfa import Dfa
from ..errors import ParseError
from ..terms import Grammar, Letter, Player, SKIP, choice, concat, nt
from .common import EncodedGame, triple_symbol
from .nfa import Nfa

STUCK = "!stuck"
DEADEND = "!deadend"
CLAIM = "!claim"


def _run_check_dfa(b: Nfa, with_claim: bool) -> Dfa:
    """Accepts Adam-run words that do NOT certify an accepting run of b."""
    at = lambda q: f"at({q})"
    states = [at(q) for q in b.states] + ["broken", "stuckwin", "deadrej"]
    alphabet = tuple(triple_symbol(*t) for t in sorted(b.transitions)) + (STUCK, DEADEND)
    if with_claim:
        alphabet += (CLAIM,)
    delta: Dict[Tuple[str, str], str] = {}
    by_symbol = {triple_symbol(*t): t for t in b.transitions}
    for s in states:
        for a in alphabet:
            if a == DEADEND:
                delta[(s, a)] = "deadrej"
            elif s == "deadrej":
                delta[(s, a)] = "deadrej"
            elif a == CLAIM:
                # A claim is honest only once Adam's run has already failed.
                delta[(s, a)] = s if s in ("broken", "stuckwin") else "deadrej"
            elif a == STUCK:
                delta[(s, a)] = "stuckwin"
            elif s in ("broken", "stuckwin"):
                delta[(s, a)] = s
            else:
                (p, _x, p2) = by_symbol[a]
                delta[(s, a)] = at(p2) if s == at(p) else "broken"
    finals = frozenset(
        {"broken", "stuckwin"} | {at(q) for q in b.states if q not in b.finals}
    )
    return Dfa(tuple(states), at(b.initial), alphabet, delta, finals)


def _encode_run_game(a: Nfa, b: Nfa, eve_urgency: int, with_claim: bool) -> EncodedGame:
    if set(a.alphabet) != set(b.alphabet):
        raise ParseError("both automata must share one alphabet")
    name = lambda q: f"from({q})"
    defs = {}
    for q in a.states:
        options = []
        for (p, x, p2) in sorted(a.transitions):
            if p != q:
                continue
            answers = [Letter(triple_symbol(*t)) for t in sorted(b.transitions) if t[1] == x]
            reply = choice(Player.ADAM, 1, answers) if answers else Letter(STUCK)
            options.append(concat(reply, nt(name(p2))))
        if q in a.finals:
            options.append(SKIP)
        if with_claim:
            options.append(Letter(CLAIM))
        if not options:
            options.append(Letter(DEADEND))
        defs[name(q)] = choice(Player.EVE, eve_urgency, options)
    grammar = Grammar(defs, eve_urgency)
    return EncodedGame(grammar, nt(name(a.initial)), _run_check_dfa(b, with_claim))


def encode_inclusion(a: Nfa, b: Nfa) -> EncodedGame:
    """Eve wins the encoded game iff the language of a is NOT included in b's.

    Eve must complete an accepting run of a before any failure of Adam's
    counter-run counts, so there is no early stop here.
    """
    game = _encode_run_game(a, b, eve_urgency=2, with_claim=False)
    game.meta = {"problem": "inclusion", "negated": True}
    return game


def encode_simulation(a: Nfa, b: Nfa) -> EncodedGame:
    """Eve wins the encoded game iff a is NOT simulated by b.

    Unlike inclusion, the spoiler wins the moment the duplicator cannot
    match a step, so Eve may always stop and claim that Adam's run has
    failed; the objective rejects dishonest claims.
    """
    game = _encode_run_game(a, b, eve_urgency=1, with_claim=True)
    game.meta = {"problem": "simulation", "negated": True}
    return game


def nfa_inclusion(a: Nfa, b: Nfa) -> bool:
    """Classical inclusion check via subset construction (test oracle)."""
    return b.determinize().includes(a.determinize())


def nfa_simulated_by(a: Nfa, b: Nfa) -> bool:
    """Greatest simulation relation, computed as a fixpoint (test oracle)."""
    rel = {
        (q, p)
        for q in a.states
        for p in b.states
        if not (q in a.finals and p not in b.finals)
    }
    changed = True
    while changed:
        changed = False
        for (q, p) in sorted(rel):
            ok = True
            for (q1, x, q2) in a.transitions:
                if q1 != q:
                    continue
                if not any(
                    (p1, y, p2) in b.transitions and (q2, p2) in rel
                    for (p1, y, p2) in b.transitions
                    if p1 == p and y == x
                ):
                    ok = False
                    break
            if not ok:
                rel.discard((q, p))
                changed = True
    return (a.initial, b.initial) in rel
