"""Pushdown games with observation objectives, and procedure summaries.

One non-terminal per (state, stack symbol) describes the play from that
state until the symbol is popped. A companion non-terminal per symbol lets
Eve guess the state in which control resumes after a return; the guess is
validated by the objective, which checks that the emitted state changes
chain up. Summaries per non-terminal are read off its normal form over the
state-pair translation: one Eve option per strategy, each an Adam-set of
(entry state, observation class, exit state) triples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from ..dfa import Dfa, terminate_dfa
from ..decision import arrow_translate
from ..errors import ParseError
from ..monoid import build_monoid
from ..normalform import NfAlgebra
from ..terms import Grammar, Letter, Player, Term, choice, concat, nt
from .common import EncodedGame, triple_symbol

STUCK_ADAM = "!stuck"
DEAD_EVE = "!deadend"


@dataclass(frozen=True)
class Pds:
    states: Tuple[str, ...]
    owner: Dict[str, Player]  # owner of each state's choices
    stack_alphabet: Tuple[str, ...]
    initial: Tuple[str, str]  # state and initial stack symbol
    internal: FrozenSet[Tuple[str, str, str]]  # (q, x, q2), top unchanged
    pushes: FrozenSet[Tuple[str, str, str, Tuple[str, ...]]]  # replaces top by <=2 symbols
    pops: FrozenSet[Tuple[str, str, str]]  # (q, x, q2), removes top
    finals: FrozenSet[str]

    def __post_init__(self):
        states = set(self.states)
        for (q, _x, q2) in self.internal | self.pops:
            if q not in states or q2 not in states:
                raise ParseError("pushdown transition uses unknown states")
        for (q, _x, q2, pushed) in self.pushes:
            if q not in states or q2 not in states:
                raise ParseError("pushdown transition uses unknown states")
            if len(pushed) > 2:
                raise ParseError("push replaces the top by at most 2 symbols")
            if not pushed:
                raise ParseError("empty push; use a pop transition instead")
            if any(g not in self.stack_alphabet for g in pushed):
                raise ParseError("pushed symbols must be stack symbols")
        if self.initial[0] not in states or self.initial[1] not in self.stack_alphabet:
            raise ParseError("initial configuration is malformed")
        for q in self.finals:
            for (p, _x, p2) in self.internal:
                if p == q:
                    raise ParseError(f"final state {q!r} has an internal transition")
            for (p, _x, _p2, _w) in self.pushes:
                if p == q:
                    raise ParseError(f"final state {q!r} has a push transition")
            for (p, _x, p2) in self.pops:
                if p == q and p2 != q:
                    raise ParseError(f"final state {q!r} has a non-loop pop")


def pds_from_json(data) -> Pds:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        return Pds(
            states=tuple(str(q) for q in data["states"]),
            owner={
                str(q): Player.EVE if str(p).upper().startswith("E") else Player.ADAM
                for q, p in data["owner"].items()
            },
            stack_alphabet=tuple(str(g) for g in data["stack_alphabet"]),
            initial=(str(data["initial"][0]), str(data["initial"][1])),
            internal=frozenset((str(q), str(x), str(q2)) for q, x, q2 in data.get("internal", [])),
            pushes=frozenset(
                (str(q), str(x), str(q2), tuple(str(g) for g in w))
                for q, x, q2, w in data.get("push", [])
            ),
            pops=frozenset((str(q), str(x), str(q2)) for q, x, q2 in data.get("pop", [])),
            finals=frozenset(str(q) for q in data["finals"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed pushdown JSON: {exc}") from exc


def _frame(q: str, g: str) -> str:
    return f"frame({q},{g})"


def _resume(g: str) -> str:
    return f"resume({g})"


def _chain_observation_dfa(p: Pds, observation: Dfa) -> Tuple[Dfa, Dict[str, str]]:
    """Product of the state-change chain checker with the observation automaton."""
    triples = sorted(p.internal | p.pops | {(q, x, q2) for (q, x, q2, _w) in p.pushes})
    for (_q, x, _q2) in triples:
        if x not in observation.alphabet:
            raise ParseError(f"observation automaton misses letter {x!r}")
    at = lambda q: f"at({q})"
    chain_states = [at(q) for q in p.states] + ["fresh", "broken"]
    name = lambda c, a: f"({c}|{a})"
    states = []
    delta = {}
    alphabet = tuple(triple_symbol(*t) for t in triples) + (STUCK_ADAM, DEAD_EVE)
    for c in chain_states:
        for a in observation.states:
            states.append(name(c, a))
            for t in triples:
                (q, x, q2) = t
                if c == "broken":
                    c2 = "broken"
                elif c == "fresh":
                    c2 = at(q2) if q == p.initial[0] else "broken"
                else:
                    c2 = at(q2) if c == at(q) else "broken"
                delta[(name(c, a), triple_symbol(*t))] = name(c2, observation.step(a, x))
            delta[(name(c, a), STUCK_ADAM)] = "stuckwin"
            delta[(name(c, a), DEAD_EVE)] = "deadrej"
    for s in ("stuckwin", "deadrej"):
        states.append(s)
        for sym in alphabet:
            delta[(s, sym)] = "deadrej" if sym == DEAD_EVE else s
    finals = {"stuckwin"}
    for q in p.finals:
        for a in observation.finals:
            finals.add(name(at(q), a))
    decode = {name(at(q), a): q for q in p.states for a in observation.states}
    obs_decode = {name(at(q), a): a for q in p.states for a in observation.states}
    initial = name("fresh", observation.initial)
    return Dfa(tuple(states), initial, alphabet, delta, frozenset(finals)), decode, obs_decode


def encode_pushdown(p: Pds, observation: Optional[Dfa] = None) -> EncodedGame:
    """Eve wins iff she forces a final state while the observation word is accepted."""
    if observation is None:
        letters = sorted({x for (_q, x, _q2) in p.internal | p.pops}
                         | {x for (_q, x, _q2, _w) in p.pushes})
        observation = terminate_dfa(letters)
    defs: Dict[str, Term] = {}
    for g in p.stack_alphabet:
        defs[_resume(g)] = choice(Player.EVE, 1, [nt(_frame(q, g)) for q in p.states])
        for q in p.states:
            options: List[Term] = []
            for (q1, x, q2) in sorted(p.internal):
                if q1 == q:
                    options.append(concat(Letter(triple_symbol(q1, x, q2)), nt(_frame(q2, g))))
            for (q1, x, q2, pushed) in sorted(p.pushes):
                if q1 != q:
                    continue
                parts = [Letter(triple_symbol(q1, x, q2)), nt(_frame(q2, pushed[0]))]
                for g2 in pushed[1:]:
                    parts.append(nt(_resume(g2)))
                options.append(concat(*parts))
            for (q1, x, q2) in sorted(p.pops):
                if q1 == q:
                    options.append(Letter(triple_symbol(q1, x, q2)))
            if not options:
                options.append(Letter(DEAD_EVE if p.owner[q] is Player.EVE else STUCK_ADAM))
            defs[_frame(q, g)] = choice(p.owner[q], 1, options)
    grammar = Grammar(defs, 1)
    dfa, decode, obs_decode = _chain_observation_dfa(p, observation)
    start = nt(_frame(*p.initial))
    meta = {
        "problem": "pushdown",
        "state_decode": decode,
        "obs_decode": obs_decode,
        "observation": observation,
    }
    return EncodedGame(grammar, start, dfa, meta)


@dataclass
class Summary:
    nonterminal: str
    options: List[FrozenSet[Tuple[str, int, str]]]  # (entry, class id, exit) per Eve option
    class_representatives: Dict[int, tuple] = field(default_factory=dict)


def _shortest_observation(observation: Dfa, source: str, target: str):
    """BFS for a shortest observation word inducing the given state change."""
    frontier = [(source, ())]
    seen = {source}
    while frontier:
        nxt = []
        for (q, word) in frontier:
            if q == target:
                return word
            for a in observation.alphabet:
                q2 = observation.step(q, a)
                if q2 not in seen:
                    seen.add(q2)
                    nxt.append((q2, word + (a,)))
        frontier = nxt
    return None


def extract_summaries(p: Pds, observation: Optional[Dfa] = None) -> Dict[str, Summary]:
    """Summaries for every frame non-terminal via the state-pair translation.

    The middle component of a triple is a congruence class of the
    translated objective; its representative is printed as a shortest
    observation word inducing the same observer state change.
    """
    game = encode_pushdown(p, observation)
    arrow = arrow_translate(game.grammar, game.term, game.dfa)
    monoid = build_monoid(arrow.dfa)
    algebra = NfAlgebra(monoid, 1)
    env = algebra.grammar_normal_forms(arrow.grammar)
    decode = game.meta["state_decode"]
    obs_decode = game.meta["obs_decode"]
    obs = game.meta["observation"]
    obs_dead = obs.dead_states()
    out = {}
    for name, nf in env.items():
        if not name.startswith("frame("):
            continue
        options = set()
        reps: Dict[int, tuple] = {}
        for adam_set in nf.esets:
            triples = set()
            for leaf in adam_set:
                cls = leaf.leaf
                if cls == monoid.zero or cls == monoid.identity:
                    continue
                trans = monoid.transformations[cls]
                for i, src in enumerate(monoid.dfa.states):
                    dst = monoid.dfa.states[trans[i]]
                    if src not in decode or dst not in decode:
                        continue
                    # A segment claiming a dead observer state never takes
                    # part in a winning play; keep the report to live claims.
                    if obs_decode[src] in obs_dead or obs_decode[dst] in obs_dead:
                        continue
                    triples.add((decode[src], cls, decode[dst]))
                    if cls not in reps:
                        word = _shortest_observation(obs, obs_decode[src], obs_decode[dst])
                        reps[cls] = word if word is not None else monoid.representative(cls)
            # Options without any decodable state change correspond to plays
            # that never form a valid segment; they carry no summary content.
            if triples:
                options.add(frozenset(triples))
        out[name] = Summary(name, sorted(options, key=sorted), reps)
    return out
