"""Nondeterministic finite automata as encoder inputs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import FrozenSet, Set, Tuple

from ..dfa import Dfa
from ..errors import ParseError


@dataclass(frozen=True)
class Nfa:
    states: Tuple[str, ...]
    initial: str
    alphabet: Tuple[str, ...]
    transitions: FrozenSet[Tuple[str, str, str]]
    finals: FrozenSet[str]

    def __post_init__(self):
        states = set(self.states)
        if not states:
            raise ParseError("automaton needs at least one state")
        if self.initial not in states:
            raise ParseError(f"initial state {self.initial!r} not among states")
        for (q, a, q2) in self.transitions:
            if q not in states or q2 not in states:
                raise ParseError(f"transition ({q},{a},{q2}) uses unknown states")
            if a not in self.alphabet:
                raise ParseError(f"transition letter {a!r} outside alphabet")
        if not self.finals <= states:
            raise ParseError("final states must be states")

    def post(self, qs: Set[str], a: str) -> frozenset:
        return frozenset(q2 for (q, x, q2) in self.transitions if q in qs and x == a)

    def determinize(self) -> Dfa:
        """Subset construction, completed with a sink."""
        name = lambda qs: "{" + ",".join(sorted(qs)) + "}"
        start = frozenset([self.initial])
        todo = [start]
        seen = {start}
        delta = {}
        while todo:
            qs = todo.pop()
            for a in self.alphabet:
                succ = self.post(qs, a)
                delta[(name(qs), a)] = name(succ)
                if succ not in seen:
                    seen.add(succ)
                    todo.append(succ)
        states = tuple(sorted(name(qs) for qs in seen))
        finals = frozenset(name(qs) for qs in seen if qs & self.finals)
        return Dfa(states, name(start), self.alphabet, delta, finals)

    def accepts(self, word) -> bool:
        current = {self.initial}
        for a in word:
            current = self.post(current, a)
        return bool(current & self.finals)


def nfa_from_json(data) -> Nfa:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        return Nfa(
            tuple(str(q) for q in data["states"]),
            str(data["initial"]),
            tuple(str(a) for a in data["alphabet"]),
            frozenset((str(q), str(a), str(q2)) for q, a, q2 in data["transitions"]),
            frozenset(str(q) for q in data["finals"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed NFA JSON: {exc}") from exc
