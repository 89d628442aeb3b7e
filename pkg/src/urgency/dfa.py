"""Complete deterministic finite automata and the algebra the deciders need."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Tuple

from .errors import AlphabetError, ParseError
from .terms import WORD_ERR

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Dfa:
    states: Tuple[str, ...]
    initial: str
    alphabet: Tuple[str, ...]
    delta: Dict[Tuple[str, str], str]
    finals: FrozenSet[str]

    def __post_init__(self):
        states = set(self.states)
        if self.initial not in states:
            raise ParseError(f"initial state {self.initial!r} not among states")
        bad = self.finals - states
        if bad:
            raise ParseError(f"final states {sorted(bad)} not among states")
        for q in self.states:
            for a in self.alphabet:
                target = self.delta.get((q, a))
                if target is None:
                    raise ParseError(f"transition function misses ({q!r}, {a!r})")
                if target not in states:
                    raise ParseError(f"transition ({q!r}, {a!r}) leads to unknown state {target!r}")

    def step(self, q: str, a: str) -> str:
        try:
            return self.delta[(q, a)]
        except KeyError:
            raise AlphabetError(f"symbol {a!r} outside alphabet {sorted(self.alphabet)}") from None

    def run(self, word: Iterable[str], start: str = None) -> str:
        q = self.initial if start is None else start
        for a in word:
            q = self.step(q, a)
        return q

    def member(self, word) -> bool:
        """Membership of a monoid word; the err word belongs to no objective."""
        if word == WORD_ERR:
            return False
        return self.run(word) in self.finals

    def reachable_states(self) -> list:
        seen = [self.initial]
        seen_set = {self.initial}
        for q in seen:
            for a in self.alphabet:
                q2 = self.delta[(q, a)]
                if q2 not in seen_set:
                    seen_set.add(q2)
                    seen.append(q2)
        return seen

    def restrict_reachable(self) -> "Dfa":
        reach = self.reachable_states()
        keep = set(reach)
        return Dfa(
            tuple(reach),
            self.initial,
            self.alphabet,
            {(q, a): q2 for (q, a), q2 in self.delta.items() if q in keep},
            frozenset(q for q in self.finals if q in keep),
        )

    def dead_states(self) -> frozenset:
        """States from which no final state is reachable."""
        alive = set(self.finals)
        changed = True
        while changed:
            changed = False
            for (q, _a), q2 in self.delta.items():
                if q2 in alive and q not in alive:
                    alive.add(q)
                    changed = True
        return frozenset(set(self.states) - alive)

    def minimize(self) -> "Dfa":
        """Nerode minimization of the reachable part.

        Block names are the least member of each block (by string order), so
        minimization never invents state ids.
        """
        base = self.restrict_reachable()
        states = list(base.states)
        block = {q: ("F" if q in base.finals else "N") for q in states}
        n_blocks = len(set(block.values()))
        while True:
            signature = {
                q: (block[q], tuple(block[base.delta[(q, a)]] for a in base.alphabet))
                for q in states
            }
            groups = {}
            for q in states:
                groups.setdefault(signature[q], []).append(q)
            block = {}
            for members in groups.values():
                rep = min(members, key=str)
                for q in members:
                    block[q] = rep
            if len(groups) == n_blocks:
                break
            n_blocks = len(groups)
        reps = sorted(set(block.values()), key=str)
        delta = {
            (block[q], a): block[base.delta[(q, a)]] for q in states for a in base.alphabet
        }
        return Dfa(
            tuple(reps),
            block[base.initial],
            base.alphabet,
            delta,
            frozenset(block[q] for q in base.finals),
        )

    def residual_inclusion(self) -> Dict[Tuple[str, str], bool]:
        """All pairs (q, q') with the language from q included in that from q'."""
        pairs = {
            (q, p)
            for q in self.states
            for p in self.states
            if not (q in self.finals and p not in self.finals)
        }
        changed = True
        while changed:
            changed = False
            for (q, p) in list(pairs):
                for a in self.alphabet:
                    if (self.delta[(q, a)], self.delta[(p, a)]) not in pairs:
                        pairs.discard((q, p))
                        changed = True
                        break
        return {pair: True for pair in pairs}

    def complement(self) -> "Dfa":
        return Dfa(
            self.states,
            self.initial,
            self.alphabet,
            self.delta,
            frozenset(set(self.states) - self.finals),
        )

    def product(self, other: "Dfa", accept) -> "Dfa":
        if set(self.alphabet) != set(other.alphabet):
            raise AlphabetError("product requires equal alphabets")
        name = lambda a, b: f"({a},{b})"
        start = (self.initial, other.initial)
        todo = [start]
        seen = {start}
        delta = {}
        while todo:
            (q1, q2) = todo.pop()
            for a in self.alphabet:
                succ = (self.delta[(q1, a)], other.delta[(q2, a)])
                delta[(name(q1, q2), a)] = name(*succ)
                if succ not in seen:
                    seen.add(succ)
                    todo.append(succ)
        states = tuple(sorted(name(q1, q2) for (q1, q2) in seen))
        finals = frozenset(
            name(q1, q2)
            for (q1, q2) in seen
            if accept(q1 in self.finals, q2 in other.finals)
        )
        return Dfa(states, name(*start), self.alphabet, delta, finals)

    def intersect(self, other: "Dfa") -> "Dfa":
        return self.product(other, lambda x, y: x and y)

    def union(self, other: "Dfa") -> "Dfa":
        return self.product(other, lambda x, y: x or y)

    def difference(self, other: "Dfa") -> "Dfa":
        return self.product(other, lambda x, y: x and not y)

    def is_empty(self) -> bool:
        return all(q not in self.finals for q in self.reachable_states())

    def includes(self, other: "Dfa") -> bool:
        """Language inclusion: other is included in self."""
        return other.difference(self).is_empty()

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "states": list(self.states),
            "initial": self.initial,
            "alphabet": list(self.alphabet),
            "finals": sorted(self.finals),
            "delta": sorted([q, a, q2] for (q, a), q2 in self.delta.items()),
        }


def dfa_from_json(data) -> Dfa:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid automaton JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("automaton JSON must be an object")
    try:
        states = tuple(str(q) for q in data["states"])
        initial = str(data["initial"])
        alphabet = tuple(str(a) for a in data["alphabet"])
        finals = frozenset(str(q) for q in data["finals"])
        delta = {(str(q), str(a)): str(q2) for q, a, q2 in data["delta"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed automaton JSON: {exc}") from exc
    if len(set(states)) != len(states):
        raise ParseError("duplicate state names")
    if len(set(alphabet)) != len(alphabet):
        raise ParseError("duplicate alphabet symbols")
    return Dfa(states, initial, alphabet, delta, finals)


def terminate_dfa(alphabet: Iterable[str]) -> Dfa:
    """The objective containing every terminal word."""
    alphabet = tuple(dict.fromkeys(alphabet))
    delta = {("ok", a): "ok" for a in alphabet}
    return Dfa(("ok",), "ok", alphabet, delta, frozenset(["ok"]))


def reach_dfa(marker: str, alphabet: Iterable[str]) -> Dfa:
    """Words containing the marker symbol at least once."""
    alphabet = tuple(dict.fromkeys(tuple(alphabet) + (marker,)))
    delta = {}
    for a in alphabet:
        delta[("seek", a)] = "hit" if a == marker else "seek"
        delta[("hit", a)] = "hit"
    return Dfa(("seek", "hit"), "seek", alphabet, delta, frozenset(["hit"]))


def finite_language_dfa(words: Iterable[Tuple[str, ...]], alphabet: Iterable[str]) -> Dfa:
    """The finite language consisting exactly of the given letter sequences."""
    words = [tuple(w) for w in words]
    alphabet = tuple(dict.fromkeys(list(alphabet) + [a for w in words for a in w]))
    prefixes = {()}
    for w in words:
        for i in range(len(w) + 1):
            prefixes.add(w[: i])
    name = lambda p: "p_" + "_".join(p) if p else "p"
    delta = {}
    for p in prefixes:
        for a in alphabet:
            nxt = p + (a,)
            delta[(name(p), a)] = name(nxt) if nxt in prefixes else "sink"
    for a in alphabet:
        delta[("sink", a)] = "sink"
    states = tuple(sorted({name(p) for p in prefixes} | {"sink"}))
    return Dfa(states, name(()), alphabet, delta, frozenset(name(tuple(w)) for w in words))


def builtin_dfa(spec: str) -> Dfa:
    """Built-in objectives: 'terminate:<a,b,..>', 'reach:<m>:<a,b,..>', 'words:<w|w>:<a,b,..>'."""
    parts = spec.split(":")
    kind = parts[0]
    if kind == "terminate" and len(parts) == 2:
        return terminate_dfa([a for a in parts[1].split(",") if a])
    if kind == "reach" and len(parts) == 3:
        return reach_dfa(parts[1], [a for a in parts[2].split(",") if a])
    if kind == "words" and len(parts) in (2, 3):
        words = [tuple(w.split(".")) if w else () for w in parts[1].split("|")]
        extra = [a for a in parts[2].split(",") if a] if len(parts) == 3 else []
        return finite_language_dfa(words, extra)
    raise ParseError(f"unknown built-in objective {spec!r}")
