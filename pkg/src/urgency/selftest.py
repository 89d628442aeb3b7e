"""Randomized self-checks: axiom soundness and solver agreement.

Each rewrite law is turned into a generator of instances (left term, right
term, expected relation). An instance is checked by plugging both sides
into a random context and comparing exact game verdicts under a random
objective: equational laws need equal verdicts, inequational ones an
implication. The generators double as the package's test fixtures.

A mutation hook deliberately mis-generates one law (widening the side
condition of the right-distributivity rule by one urgency level) so the
suite's ability to catch unsound rewrites can itself be checked.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from .arena import solve_exact
from .dfa import Dfa
from .terms import (
    ERR,
    HOLE,
    SKIP,
    Choice,
    Concat,
    Grammar,
    Letter,
    Player,
    Term,
    choice,
    concat,
    flatten_word,
    plug,
    term_size,
    urgency_of,
    word_term,
)

DEFAULT_ALPHABET = ("a", "b", "c")


# -- random generators ------------------------------------------------------


def random_dfa(rng: random.Random, max_states: int = 4, alphabet=DEFAULT_ALPHABET) -> Dfa:
    n = rng.randint(1, max_states)
    states = tuple(f"q{i}" for i in range(n))
    delta = {(q, a): rng.choice(states) for q in states for a in alphabet}
    finals = frozenset(q for q in states if rng.random() < 0.45)
    return Dfa(states, states[0], tuple(alphabet), delta, finals)


def random_word_term(rng: random.Random, alphabet=DEFAULT_ALPHABET, max_len: int = 3) -> Term:
    if rng.random() < 0.08:
        return ERR
    return word_term(tuple(rng.choice(alphabet) for _ in range(rng.randint(0, max_len))))


def random_term(
    rng: random.Random,
    max_urgency: int,
    alphabet=DEFAULT_ALPHABET,
    depth: int = 3,
    max_nodes: int = 12,
) -> Term:
    def build(d):
        r = rng.random()
        if d <= 0 or r < 0.3:
            return rng.choice(
                [Letter(rng.choice(alphabet)), Letter(rng.choice(alphabet)), SKIP, ERR]
            )
        if r < 0.62:
            return Concat(build(d - 1), build(d - 1))
        ops = [build(d - 1) for _ in range(rng.randint(1, 3))]
        return choice(rng.choice((Player.EVE, Player.ADAM)), rng.randint(1, max_urgency), ops)

    t = build(depth)
    while term_size(t) > max_nodes:
        t = build(depth - 1)
    return t


def random_context(
    rng: random.Random, max_urgency: int, alphabet=DEFAULT_ALPHABET, depth: int = 3
) -> Term:
    """A random term with exactly one hole at a random position."""
    base = random_term(rng, max_urgency, alphabet, depth)
    positions = []

    def collect(t, path):
        positions.append(path)
        if isinstance(t, Concat):
            collect(t.left, path + ("L",))
            collect(t.right, path + ("R",))
        elif isinstance(t, Choice):
            for i, s in enumerate(t.operands):
                collect(s, path + (("C", i),))

    collect(base, ())
    target = rng.choice(positions)

    def rebuild(t, path):
        if path == target:
            return HOLE
        if isinstance(t, Concat):
            return Concat(rebuild(t.left, path + ("L",)), rebuild(t.right, path + ("R",)))
        if isinstance(t, Choice):
            return choice(
                t.player,
                t.urgency,
                [rebuild(s, path + (("C", i),)) for i, s in enumerate(t.operands)],
            )
        return t

    return rebuild(base, ())


# -- axiom instance generators -----------------------------------------------

Instance = Tuple[Term, Term, str]  # lhs, rhs, "eq" | "leq"


def _urgency_at_least(rng, low, max_urgency):
    if low > max_urgency:
        return None
    return rng.randint(low, max_urgency)


def _gen_monotonicity(rng, n, alphabet) -> Instance:
    # Premise pairs lhs_i <= rhs_i from the err law and choice widening.
    player = rng.choice((Player.EVE, Player.ADAM))
    shared = [random_term(rng, n, alphabet, 1) for _ in range(rng.randint(0, 2))]
    t = random_term(rng, n, alphabet, 1)
    u = rng.randint(max(1, urgency_of(t, n)), n)
    if rng.random() < 0.5:
        low, high = ERR, t
    else:
        low, high = t, choice(Player.EVE, u, [t, random_term(rng, n, alphabet, 1)])
    return (
        choice(player, u, [low] + shared),
        choice(player, u, [high] + shared),
        "leq",
    )


def _gen_distributivity_lattice(rng, n, alphabet) -> Instance:
    u = rng.randint(1, n)
    sets = [
        [random_term(rng, n, alphabet, 1) for _ in range(rng.randint(1, 2))]
        for _ in range(rng.randint(1, 2))
    ]
    lhs = choice(Player.EVE, u, [choice(Player.ADAM, u, s) for s in sets])
    functions = list(itertools.product(*sets))
    rhs = choice(Player.ADAM, u, [choice(Player.EVE, u, list(f)) for f in functions])
    return (lhs, rhs, "eq")


def _gen_absorption(rng, n, alphabet) -> Instance:
    t = random_term(rng, n, alphabet, 1)
    u = _urgency_at_least(rng, max(1, urgency_of(t, n)), n)
    t2 = random_term(rng, n, alphabet, 1)
    if rng.random() < 0.5:
        lhs = choice(Player.ADAM, u, [t, choice(Player.EVE, u, [t, t2])])
    else:
        lhs = choice(Player.EVE, u, [t, choice(Player.ADAM, u, [t, t2])])
    return (lhs, t, "eq")


def _gen_flattening(rng, n, alphabet) -> Instance:
    u = rng.randint(1, n)
    player = rng.choice((Player.EVE, Player.ADAM))
    sets = [
        [random_term(rng, n, alphabet, 1) for _ in range(rng.randint(1, 2))]
        for _ in range(rng.randint(1, 2))
    ]
    lhs = choice(player, u, [choice(player, u, s) for s in sets])
    rhs = choice(player, u, [t for s in sets for t in s])
    return (lhs, rhs, "eq")


def _gen_choice_widening(rng, n, alphabet) -> Instance:
    t = random_term(rng, n, alphabet, 1)
    u = _urgency_at_least(rng, max(1, urgency_of(t, n)), n)
    return (t, choice(Player.EVE, u, [t, random_term(rng, n, alphabet, 1)]), "leq")


def _gen_dist_left(rng, n, alphabet) -> Instance:
    # t . P_u S == P_u { t . s } for urgency(t) < u
    while True:
        t = random_term(rng, n, alphabet, 1)
        u = _urgency_at_least(rng, urgency_of(t, n) + 1, n)
        if u is not None:
            break
    player = rng.choice((Player.EVE, Player.ADAM))
    s = [random_term(rng, n, alphabet, 1) for _ in range(rng.randint(1, 3))]
    lhs = Concat(t, choice(player, u, s))
    rhs = choice(player, u, [Concat(t, x) for x in s])
    return (lhs, rhs, "eq")


def _gen_dist_right(rng, n, alphabet, widen: bool = False) -> Instance:
    # P_u S . t == P_u { s . t } for urgency(t) <= u (the mutant drops this)
    if widen:
        # Deliberately unsound: t's urgency exceeds the choice's, so the
        # rewrite reorders genuinely dependent choices.
        u = rng.randint(1, n - 1) if n > 1 else 1
        t = choice(
            rng.choice((Player.EVE, Player.ADAM)),
            u + 1,
            [Letter(alphabet[0]), Letter(alphabet[1 % len(alphabet)])],
        )
        s = [Letter(a) for a in alphabet[:2]]
    else:
        while True:
            t = random_term(rng, n, alphabet, 1)
            u = _urgency_at_least(rng, max(1, urgency_of(t, n)), n)
            if u is not None:
                break
        s = [random_term(rng, n, alphabet, 1) for _ in range(rng.randint(1, 3))]
    player = rng.choice((Player.EVE, Player.ADAM))
    lhs = Concat(choice(player, u, s), t)
    rhs = choice(player, u, [Concat(x, t) for x in s])
    return (lhs, rhs, "eq")


def _gen_urgency_retag(rng, n, alphabet) -> Instance:
    # E_v { P_u S } == E_v { P_v S } for v < u
    if n < 2:
        v, u = 1, 1
    else:
        v = rng.randint(1, n - 1)
        u = rng.randint(v + 1, n)
    player = rng.choice((Player.EVE, Player.ADAM))
    s = [random_term(rng, n, alphabet, 1) for _ in range(rng.randint(1, 3))]
    lhs = choice(Player.EVE, v, [choice(player, u, s)])
    rhs = choice(Player.EVE, v, [choice(player, v, s)])
    return (lhs, rhs, "eq")


def _gen_urgency_retag_dual(rng, n, alphabet) -> Instance:
    if n < 2:
        v, u = 1, 1
    else:
        v = rng.randint(1, n - 1)
        u = rng.randint(v + 1, n)
    player = rng.choice((Player.EVE, Player.ADAM))
    s = [random_term(rng, n, alphabet, 1) for _ in range(rng.randint(1, 3))]
    lhs = choice(Player.ADAM, v, [choice(player, u, s)])
    rhs = choice(Player.ADAM, v, [choice(player, v, s)])
    return (lhs, rhs, "eq")


def _gen_err_bottom(rng, n, alphabet) -> Instance:
    return (ERR, random_term(rng, n, alphabet, 2), "leq")


def _gen_monoid(rng, n, alphabet) -> Instance:
    word = random_word_term(rng, alphabet, 4)
    flat = flatten_word(word)
    pieces = list(flat) if flat != ("err",) else None
    if pieces is None:
        variants = [ERR, Concat(ERR, Letter(rng.choice(alphabet))), Concat(Letter(rng.choice(alphabet)), ERR)]
        return (word, rng.choice(variants), "eq")
    rebracketed = SKIP
    for sym in pieces:
        part = Letter(sym)
        if rng.random() < 0.4:
            part = Concat(part, SKIP)
        rebracketed = Concat(rebracketed, part) if rng.random() < 0.5 else concat(rebracketed, part)
    return (word, rebracketed, "eq")


def _gen_singleton(rng, n, alphabet) -> Instance:
    t = random_term(rng, n, alphabet, 1)
    u = _urgency_at_least(rng, max(1, urgency_of(t, n)), n)
    player = rng.choice((Player.EVE, Player.ADAM))
    return (t, choice(player, u, [t]), "eq")


AXIOM_GENERATORS: Dict[str, Callable] = {
    "L1-monotonicity": _gen_monotonicity,
    "L2-distributivity": _gen_distributivity_lattice,
    "L3-absorption": _gen_absorption,
    "L4-flattening": _gen_flattening,
    "L5-choice-widening": _gen_choice_widening,
    "D1-left-distributivity": _gen_dist_left,
    "D2-right-distributivity": _gen_dist_right,
    "N-urgency-retag": _gen_urgency_retag,
    "NA-urgency-retag-dual": _gen_urgency_retag_dual,
    "B-err-bottom": _gen_err_bottom,
    "M-monoid": _gen_monoid,
    "S-singleton-choice": _gen_singleton,
}


@dataclass
class SuiteReport:
    name: str
    cases: int
    failures: int
    examples: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failures == 0


def check_axiom_instance(lhs, rhs, relation, ctx, o, max_urgency) -> bool:
    g = Grammar.empty(max_urgency)
    left = solve_exact(g, plug(ctx, lhs), o).is_win
    right = solve_exact(g, plug(ctx, rhs), o).is_win
    if relation == "eq":
        return left == right
    return right or not left


def run_axiom_suite(
    cases: int = 200,
    seed: int = 0,
    max_urgency: int = 2,
    max_states: int = 4,
    alphabet=DEFAULT_ALPHABET,
    axioms: Optional[List[str]] = None,
    mutate: Optional[str] = None,
) -> List[SuiteReport]:
    """Check every axiom on random instances, contexts, and objectives.

    `mutate` names an axiom whose generator is replaced by an unsound
    variant; the suite is then expected to fail on it.
    """
    reports = []
    names = axioms or list(AXIOM_GENERATORS)
    for name in names:
        gen = AXIOM_GENERATORS[name]
        if mutate and name == mutate:
            if name != "D2-right-distributivity":
                raise ValueError("only the D2 side condition has a mutant")
            gen = lambda rng, n, al: _gen_dist_right(rng, n, al, widen=True)
        rng = random.Random(f"{seed}:{name}")  # string seeding is stable across runs
        failures = 0
        examples = []
        for _ in range(cases):
            lhs, rhs, relation = gen(rng, max_urgency, alphabet)
            ctx = random_context(rng, max_urgency, alphabet)
            o = random_dfa(rng, max_states, alphabet)
            if not check_axiom_instance(lhs, rhs, relation, HOLE, o, max_urgency) or not check_axiom_instance(lhs, rhs, relation, ctx, o, max_urgency):
                failures += 1
                if len(examples) < 3:
                    from .syntax import print_term

                    examples.append(
                        f"{print_term(lhs)}  vs  {print_term(rhs)}  in  {print_term(ctx)}"
                    )
        reports.append(SuiteReport(name, cases, failures, examples))
    return reports


def run_agreement_suite(
    cases: int = 150,
    seed: int = 0,
    max_urgency: int = 2,
    max_states: int = 3,
    alphabet=("a", "b"),
) -> SuiteReport:
    """Normal-form winner against the exact solver on random instances."""
    from .monoid import build_monoid
    from .normalform import NfAlgebra

    rng = random.Random(seed)
    failures = 0
    examples = []
    for _ in range(cases):
        o = random_dfa(rng, max_states, alphabet)
        t = random_term(rng, max_urgency, alphabet, 3)
        g = Grammar.empty(max_urgency)
        algebra = NfAlgebra(build_monoid(o), max_urgency)
        got = algebra.wins(algebra.normalize(g, t))
        want = solve_exact(g, t, o).is_win
        if got != want:
            failures += 1
            if len(examples) < 3:
                from .syntax import print_term

                examples.append(print_term(t))
    return SuiteReport("normalization-agreement", cases, failures, examples)


def run_selftest(
    suites: Optional[List[str]] = None,
    cases: int = 100,
    seed: int = 0,
    mutate: Optional[str] = None,
) -> List[SuiteReport]:
    chosen = suites or ["axioms", "agreement"]
    reports: List[SuiteReport] = []
    if "axioms" in chosen:
        reports.extend(run_axiom_suite(cases=cases, seed=seed, mutate=mutate))
    if "agreement" in chosen:
        reports.append(run_agreement_suite(cases=cases, seed=seed))
    return reports
