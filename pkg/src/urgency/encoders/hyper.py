"""Finite-trace hyperproperties over a fixed number of traces.

A property over n traces alternates quantifiers starting with "exists"; all
quantified traces share the length the first one fixes. Each quantifier is
one urgency level: per column the players pick one system transition each,
highest urgency first, so quantifier i is fully resolved before quantifier
i+1 reveals anything. The objective reads the column-major word and nests
the per-component run checks around the property: an existential component
must be a valid trace, a universal component that is not one satisfies the
property vacuously.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from ..dfa import Dfa
from ..errors import ParseError
from ..terms import Grammar, Letter, Player, SKIP, choice, concat, nt
from .common import EncodedGame, triple_symbol
from .nfa import Nfa


def tuple_symbol(labels) -> str:
    return "(" + ",".join(labels) + ")"


@dataclass(frozen=True)
class HyperSpec:
    system: Nfa
    n: int
    prop: Dfa  # over tuple_symbol(n system labels)

    def __post_init__(self):
        if self.n < 1:
            raise ParseError("a hyperproperty quantifies at least one trace")
        expected = {
            tuple_symbol(labels)
            for labels in itertools.product(self.system.alphabet, repeat=self.n)
        }
        if not expected <= set(self.prop.alphabet):
            raise ParseError("property automaton must read n-tuples of system labels")


def hyper_from_json(data) -> HyperSpec:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        system = Nfa(
            tuple(str(q) for q in data["system"]["states"]),
            str(data["system"]["initial"]),
            tuple(str(a) for a in data["system"]["alphabet"]),
            frozenset((str(q), str(a), str(q2)) for q, a, q2 in data["system"]["transitions"]),
            frozenset(str(q) for q in data["system"]["finals"]),
        )
        n = int(data["n"])
        prop = data["property"]
        delta = {}
        for q, labels, q2 in prop["delta"]:
            delta[(str(q), tuple_symbol([str(x) for x in labels]))] = str(q2)
        alphabet = tuple(sorted({a for (_q, a) in delta}))
        prop_dfa = Dfa(
            tuple(str(q) for q in prop["states"]),
            str(prop["initial"]),
            alphabet,
            delta,
            frozenset(str(q) for q in prop["finals"]),
        )
        return HyperSpec(system, n, prop_dfa)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed hyperproperty JSON: {exc}") from exc


def _component_run_dfa(spec: HyperSpec, component: int, alphabet) -> Dfa:
    """Words whose component-i transitions form an accepting system run."""
    sys = spec.system
    n = spec.n
    by_symbol = {triple_symbol(*t): t for t in sys.transitions}
    name = lambda phase, c: f"({phase},{c})"
    states = []
    delta = {}
    chain_states = ["fresh", "broken"] + [f"at({q})" for q in sys.states]
    for phase in range(n):
        for c in chain_states:
            states.append(name(phase, c))
            for sym in alphabet:
                (q, _x, q2) = by_symbol[sym]
                if phase != component - 1 or c == "broken":
                    c2 = c if phase != component - 1 else "broken"
                elif c == "fresh":
                    c2 = f"at({q2})" if q == sys.initial else "broken"
                else:
                    c2 = f"at({q2})" if c == f"at({q})" else "broken"
                delta[(name(phase, c), sym)] = name((phase + 1) % n, c2)
    finals = {name(0, f"at({q})") for q in sys.finals}
    if sys.initial in sys.finals:
        finals.add(name(0, "fresh"))
    return Dfa(tuple(states), name(0, "fresh"), tuple(alphabet), delta, frozenset(finals))


def _property_run_dfa(spec: HyperSpec, alphabet) -> Dfa:
    """The property automaton run over buffered columns of transition labels."""
    sys = spec.system
    n = spec.n
    by_symbol = {triple_symbol(*t): t for t in sys.transitions}
    name = lambda a, buf: f"({a},[{','.join(buf)}])"
    start = (spec.prop.initial, ())
    todo = [start]
    seen = {start}
    delta = {}
    while todo:
        (a, buf) = todo.pop()
        for sym in alphabet:
            (_q, x, _q2) = by_symbol[sym]
            buf2 = buf + (x,)
            if len(buf2) == n:
                succ = (spec.prop.step(a, tuple_symbol(buf2)), ())
            else:
                succ = (a, buf2)
            delta[(name(a, buf), sym)] = name(*succ)
            if succ not in seen:
                seen.add(succ)
                todo.append(succ)
    states = tuple(sorted(name(a, buf) for (a, buf) in seen))
    finals = frozenset(name(a, ()) for (a, buf) in seen if buf == () and a in spec.prop.finals)
    return Dfa(states, name(*start), tuple(alphabet), delta, finals)


def encode_hyper(spec: HyperSpec) -> EncodedGame:
    """Eve wins iff the system satisfies the hyperproperty."""
    sys = spec.system
    n = spec.n
    if not sys.transitions:
        raise ParseError("the system needs at least one transition")
    alphabet = tuple(triple_symbol(*t) for t in sorted(sys.transitions))
    column = []
    for i in range(1, n + 1):
        player = Player.EVE if i % 2 == 1 else Player.ADAM
        column.append(choice(player, n - i + 1, [Letter(a) for a in alphabet]))
    body = choice(Player.EVE, n, [SKIP, concat(*column, nt("unroll"))])
    grammar = Grammar({"unroll": body}, max(n, 1))

    objective = _property_run_dfa(spec, alphabet)
    for i in range(n, 0, -1):
        comp = _component_run_dfa(spec, i, alphabet)
        if i % 2 == 1:
            objective = comp.intersect(objective)
        else:
            objective = comp.complement().union(objective)
    objective = objective.minimize()
    return EncodedGame(grammar, nt("unroll"), objective, {"problem": "hyper", "n": n})


def hyper_holds_bruteforce(spec: HyperSpec, max_len: int) -> bool:
    """Quantifier evaluation by trace enumeration up to max_len (test oracle)."""
    sys = spec.system

    def traces(length):
        out = set()

        def walk(q, acc):
            if len(acc) == length:
                if q in sys.finals:
                    out.add(tuple(acc))
                return
            for (p, x, p2) in sys.transitions:
                if p == q:
                    walk(p2, acc + [x])

        walk(sys.initial, [])
        return sorted(out)

    def holds(level, chosen, pool):
        if level > spec.n:
            length = len(chosen[0])
            word = tuple(tuple_symbol([w[i] for w in chosen]) for i in range(length))
            return spec.prop.member(word)
        quantifier_exists = level % 2 == 1
        values = [holds(level + 1, chosen + [w], pool) for w in pool]
        return any(values) if quantifier_exists else all(values)

    for length in range(max_len + 1):
        pool = traces(length)
        if not pool:
            continue
        if holds(1, [], pool):
            return True
    return False
