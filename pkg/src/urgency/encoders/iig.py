"""Imperfect-information reachability games as urgency games.

Adam picks letters while seeing only an abstraction of the current state;
Eve picks the abstraction of the next state right away but her actual
transition choices stay unresolved until she stops, thanks to the
left-linear recursion: pending transition choices accumulate to the right
of the non-terminal and resolve only when the recursion has ended. The
emitted word is therefore the reversed run, and the objective checks that
it chains back from a final state to the initial one.
"""

from __future__ import annotations

from typing import Dict, Mapping

from ..dfa import Dfa
from ..errors import ParseError
from ..terms import Grammar, Letter, Player, SKIP, Term, choice, concat, nt
from .common import EncodedGame, triple_symbol
from .nfa import Nfa


def _reversed_run_dfa(a: Nfa) -> Dfa:
    expect = lambda q: f"expect({q})"
    states = ["fresh", "broken"] + [expect(q) for q in a.states]
    alphabet = tuple(triple_symbol(*t) for t in sorted(a.transitions))
    by_symbol = {triple_symbol(*t): t for t in a.transitions}
    delta = {}
    for s in states:
        for sym in alphabet:
            (q, _x, q2) = by_symbol[sym]
            if s == "broken":
                delta[(s, sym)] = "broken"
            elif s == "fresh":
                delta[(s, sym)] = expect(q) if q2 in a.finals else "broken"
            else:
                delta[(s, sym)] = expect(q) if s == expect(q2) else "broken"
    finals = {expect(a.initial)}
    if a.initial in a.finals:
        finals.add("fresh")
    return Dfa(tuple(states), "fresh", alphabet, delta, frozenset(finals))


def encode_imperfect_info(a: Nfa, hd: Mapping[str, str]) -> EncodedGame:
    """Eve wins the encoded game iff she wins the imperfect-information game (a, hd)."""
    missing = [q for q in a.states if q not in hd]
    if missing:
        raise ParseError(f"abstraction map must be total; missing {missing}")
    if not a.alphabet:
        raise ParseError("imperfect-information game needs a non-empty alphabet")
    views = sorted(set(hd.values()))
    name = lambda h: f"seen({h})"
    defs: Dict[str, Term] = {}
    for h in views:
        per_letter = []
        for x in a.alphabet:
            options = [SKIP]
            for h2 in views:
                consistent = [
                    Letter(triple_symbol(*t))
                    for t in sorted(a.transitions)
                    if t[1] == x and hd[t[2]] == h2
                ]
                if consistent:
                    options.append(concat(nt(name(h2)), choice(Player.EVE, 1, consistent)))
            per_letter.append(choice(Player.EVE, 1, options))
        defs[name(h)] = choice(Player.ADAM, 1, per_letter)
    grammar = Grammar(defs, 1)
    start = nt(name(hd[a.initial]))
    return EncodedGame(grammar, start, _reversed_run_dfa(a), {"problem": "imperfect-info"})


def knowledge_attractor(a: Nfa, hd: Mapping[str, str]) -> bool:
    """Subset-construction oracle: can Eve force the knowledge set into a final state."""
    views = sorted(set(hd.values()))
    start = frozenset([a.initial])

    def moves(k):
        out = []
        for x in a.alphabet:
            per_view = []
            for h2 in views:
                k2 = frozenset(
                    q2 for (q, y, q2) in a.transitions if q in k and y == x and hd[q2] == h2
                )
                if k2:
                    per_view.append(k2)
            out.append(per_view)
        return out

    winning = set()
    todo = [start]
    seen = set()
    succ = {}
    # Least fixed point over the finite knowledge graph.
    while todo:
        k = todo.pop()
        if k in seen:
            continue
        seen.add(k)
        succ[k] = moves(k)
        for per_view in succ[k]:
            for k2 in per_view:
                if k2 not in seen:
                    todo.append(k2)
    changed = True
    while changed:
        changed = False
        for k in seen:
            if k in winning:
                continue
            if k & a.finals:
                winning.add(k)
                changed = True
            elif all(any(k2 in winning for k2 in per_view) for per_view in succ[k]):
                winning.add(k)
                changed = True
    return start in winning
