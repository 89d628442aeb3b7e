"""Shared fixtures: the running example and independent test oracles."""

from __future__ import annotations

import itertools

import pytest

from urgency.arena import solve_exact
from urgency.dfa import Dfa, finite_language_dfa
from urgency.monoid import SynMonoid, build_monoid
from urgency.terms import (
    Grammar,
    HOLE,
    Player,
    SKIP,
    choice,
    concat,
    plug,
    word_term,
)


@pytest.fixture(scope="session")
def fig1_dfa() -> Dfa:
    return finite_language_dfa([("a_l", "c"), ("a_r", "b")], ["a_l", "a_r", "b", "c"])


@pytest.fixture(scope="session")
def fig1_monoid(fig1_dfa) -> SynMonoid:
    return build_monoid(fig1_dfa)


def contextual_suffix_family(m: SynMonoid):
    """One rendered urgency-1 suffix per distinct behavior, plus the empty suffix.

    A suffix E{ A S_1, ..., A S_k } over representative words acts on an
    inserted word u only through the predicate "some S_i is all-winning
    after u". Enumerating the distinct predicates keeps the context family
    exhaustive in behavior while staying small.
    """
    classes = list(m.class_ids)
    goods = {}
    for r in range(1, len(classes) + 1):
        for s in itertools.combinations(classes, r):
            good = frozenset(
                u for u in classes if all(m.class_wins(m.multiply(u, v)) for v in s)
            )
            goods.setdefault(good, s)
    seen = {g: [s] for g, s in goods.items()}
    frontier = list(seen.items())
    while frontier:
        new = []
        for g1, fam in frontier:
            for g2, s2 in goods.items():
                u = g1 | g2
                if u not in seen:
                    seen[u] = fam + [s2]
                    new.append((u, seen[u]))
        frontier = new
    suffixes = [SKIP]
    for fam in seen.values():
        suffixes.append(
            choice(
                Player.EVE,
                1,
                [
                    choice(Player.ADAM, 1, [word_term(m.representative(c)) for c in s])
                    for s in fam
                ],
            )
        )
    return suffixes


def bruteforce_preorder(g: Grammar, t1, t2, o: Dfa, m: SynMonoid, suffixes=None) -> bool:
    """Exhaustive contextual check at maximal urgency 1 via the exact solver."""
    if suffixes is None:
        suffixes = contextual_suffix_family(m)
    for cls in m.class_ids:
        w = word_term(m.representative(cls))
        for y in suffixes:
            ctx = concat(w, HOLE, y)
            if solve_exact(g, plug(ctx, t1), o).is_win and not solve_exact(
                g, plug(ctx, t2), o
            ).is_win:
                return False
    return True
