"""Operational game semantics: successors and the brute-force solvers.

solve_exact is the ground-truth oracle on recursion-free terms; every other
module is tested against it. solve_bounded is a sound three-valued
approximation for terms with non-terminals.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from .dfa import Dfa
from .errors import GrammarError
from .terms import (
    Choice,
    Concat,
    Grammar,
    NonTerminal,
    Player,
    Term,
    WORD_ERR,
    flatten_word,
    is_word_term,
    leading_subterm,
    nonterminals_of,
    plug,
)


class Status(enum.Enum):
    WIN = "WIN"
    LOSE = "LOSE"
    UNKNOWN = "UNKNOWN"


@dataclass
class Verdict:
    status: Status
    strategy: Optional[Dict[Term, Term]] = None

    @property
    def is_win(self) -> bool:
        return self.status is Status.WIN


def owner(t: Term, max_urgency: int) -> Optional[Player]:
    """Owner of the position: the owner of its leading subterm, Eve by default."""
    lead = leading_subterm(t, max_urgency)
    if lead is None:
        return None
    if isinstance(lead.subterm, Choice):
        return lead.subterm.player
    return Player.EVE


def successors(g: Grammar, t: Term) -> List[Term]:
    """All one-move successors; empty exactly on word terms."""
    lead = leading_subterm(t, g.max_urgency)
    if lead is None:
        return []
    sub = lead.subterm
    if isinstance(sub, Choice):
        return [plug(lead.context, s) for s in sub.operands]
    assert isinstance(sub, NonTerminal)
    if sub.name not in g.defs:
        raise GrammarError(f"undefined non-terminal @{sub.name}")
    return [plug(lead.context, g.defs[sub.name])]


def _membership(objective) -> Callable[[tuple], bool]:
    if isinstance(objective, Dfa):
        return objective.member
    return objective


def solve_exact(g: Grammar, t: Term, objective) -> Verdict:
    """Memoized minimax over the finite arena of a recursion-free term.

    The objective may be a Dfa or a predicate on monoid words. Word leaves
    are flattened to the monoid before evaluation; err loses. A positional
    Eve strategy is returned on WIN.
    """
    if nonterminals_of(t):
        raise GrammarError("solve_exact requires a recursion-free term")
    member = _membership(objective)
    memo: Dict[Term, bool] = {}
    strategy: Dict[Term, Term] = {}

    def wins(term: Term) -> bool:
        cached = memo.get(term)
        if cached is not None:
            return cached
        if is_word_term(term):
            result = member(flatten_word(term))
        else:
            succ = successors(g, term)
            if owner(term, g.max_urgency) is Player.ADAM:
                result = all(wins(s) for s in succ)
            else:
                result = False
                for s in succ:
                    if wins(s):
                        strategy[term] = s
                        result = True
                        break
        memo[term] = result
        return result

    if wins(t):
        return Verdict(Status.WIN, strategy)
    return Verdict(Status.LOSE)


def _split_prefix(t: Term):
    """Maximal passive prefix of a term and the remainder.

    Returns (word, rest): the flattened prefix (WORD_ERR if it errs) and
    the remaining term, or rest None when t is a word term. The prefix is
    final: no move ever rewrites it.
    """
    if is_word_term(t):
        return flatten_word(t), None
    if isinstance(t, Concat):
        if is_word_term(t.left):
            left = flatten_word(t.left)
            inner, rest = _split_prefix(t.right)
            if left == WORD_ERR or inner == WORD_ERR:
                word = WORD_ERR
            else:
                word = left + inner
            return word, rest
        word, rest = _split_prefix(t.left)
        assert rest is not None
        return word, Concat(rest, t.right)
    return (), t


def solve_bounded(
    g: Grammar,
    t: Term,
    objective: Dfa,
    budget: int,
    cycle_detection: bool = True,
) -> Verdict:
    """Bounded three-valued solver for arbitrary terms over g.

    Positions are explored as (objective state after the emitted prefix,
    remaining term), the classical product of the game with the objective
    automaton, so right-linear recursion yields a finite graph. WIN and
    LOSE verdicts are sound: WIN means Eve truly wins, LOSE that she does
    not. With cycle_detection, revisiting a product position along the
    current play counts as a loss for Eve (a positional winning strategy
    never revisits a position of a reachability game). Verdicts whose
    derivation treated an ancestor of the current play as a repeat are
    play-relative, so only self-contained WIN/LOSE results are memoized.
    An erring prefix loses outright: every completed play through it does.
    """
    if not isinstance(objective, Dfa):
        raise GrammarError("solve_bounded needs the objective as an automaton")
    import sys

    wanted = min(3 * budget + 1000, 60_000)
    if sys.getrecursionlimit() < wanted:
        sys.setrecursionlimit(wanted)
    memo: Dict[tuple, Status] = {}
    on_stack: Dict[tuple, int] = {}
    infinity = float("inf")

    def enter(state, term: Term):
        word, rest = _split_prefix(term)
        if word == WORD_ERR:
            return None
        return objective.run(word, state), rest

    def value(position, depth: int):
        if position is None:
            return Status.LOSE, infinity
        (state, rest) = position
        if rest is None:
            return (Status.WIN if state in objective.finals else Status.LOSE), infinity
        cached = memo.get(position)
        if cached is not None:
            return cached, infinity
        if cycle_detection and position in on_stack:
            return Status.LOSE, on_stack[position]
        if depth <= 0:
            return Status.UNKNOWN, infinity
        index = len(on_stack)
        if cycle_detection:
            on_stack[position] = index
        low = infinity
        results = []
        for s in successors(g, rest):
            r, l = value(enter(state, s), depth - 1)
            results.append(r)
            low = min(low, l)
        if cycle_detection:
            del on_stack[position]
        if owner(rest, g.max_urgency) is Player.ADAM:
            if any(r is Status.LOSE for r in results):
                result = Status.LOSE
            elif all(r is Status.WIN for r in results):
                result = Status.WIN
            else:
                result = Status.UNKNOWN
        else:
            if any(r is Status.WIN for r in results):
                result = Status.WIN
            elif all(r is Status.LOSE for r in results):
                result = Status.LOSE
            else:
                result = Status.UNKNOWN
        if result is not Status.UNKNOWN and low >= index:
            memo[position] = result
            return result, infinity
        return result, low

    status, _ = value(enter(objective.initial, t), budget)
    return Verdict(status)
