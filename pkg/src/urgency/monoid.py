"""The syntactic monoid of a regular objective.

Classes of the syntactic congruence on Sigma* + err are canonicalized as
state transformations of the Nerode-minimized reachable objective DFA; the
class of err (and of every word no two-sided extension of which is in the
objective) is the absorbing Zero. The two-sided precongruence, its right
variant, and the right-separating test live here as well.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from .dfa import Dfa
from .errors import AlphabetError, ResourceLimitError
from .terms import WORD_ERR, flatten_word

DEFAULT_CLASS_CAP = 100_000

ClassId = int


@dataclass
class SynMonoid:
    dfa: Dfa  # minimized reachable objective
    transformations: List[Optional[Tuple[int, ...]]]  # per class; None encodes Zero
    representatives: List[tuple]  # shortest word found, or WORD_ERR for Zero
    generators: Dict[str, ClassId]
    table: List[List[ClassId]]
    identity: ClassId
    zero: ClassId
    _state_index: Dict[str, int] = field(default_factory=dict)
    _leq: Optional[List[List[bool]]] = None
    _rleq: Optional[List[List[bool]]] = None

    def __len__(self) -> int:
        return len(self.transformations)

    @property
    def class_ids(self) -> range:
        return range(len(self.transformations))

    def multiply(self, x: ClassId, y: ClassId) -> ClassId:
        return self.table[x][y]

    def class_of_letter(self, a: str) -> ClassId:
        try:
            return self.generators[a]
        except KeyError:
            raise AlphabetError(f"letter {a!r} outside the objective alphabet") from None

    def class_of_word(self, w) -> ClassId:
        """Class of a word term or of a raw letter tuple / WORD_ERR."""
        if isinstance(w, (tuple, list)):
            word = WORD_ERR if tuple(w) == WORD_ERR else tuple(w)
        else:
            word = flatten_word(w)
        if word == WORD_ERR:
            return self.zero
        out = self.identity
        for a in word:
            out = self.table[out][self.class_of_letter(a)]
        return out

    def representative(self, x: ClassId):
        return self.representatives[x]

    def class_wins(self, x: ClassId) -> bool:
        """Whether the class's words belong to the objective."""
        trans = self.transformations[x]
        if trans is None:
            return False
        states = self.dfa.states
        q0 = self._state_index[self.dfa.initial]
        return states[trans[q0]] in self.dfa.finals

    def _inclusion_matrix(self):
        incl = self.dfa.residual_inclusion()
        states = self.dfa.states
        n = len(states)
        out = [[(states[i], states[j]) in incl for j in range(n)] for i in range(n)]
        return out

    def _ensure_orders(self):
        if self._leq is not None:
            return
        incl = self._inclusion_matrix()
        q0 = self._state_index[self.dfa.initial]
        dead = self.dfa.dead_states()
        dead_idx = {i for i, q in enumerate(self.dfa.states) if q in dead}
        n = len(self.transformations)
        leq = [[False] * n for _ in range(n)]
        rleq = [[False] * n for _ in range(n)]
        for x in range(n):
            tx = self.transformations[x]
            for y in range(n):
                ty = self.transformations[y]
                if tx is None:
                    leq[x][y] = rleq[x][y] = True
                    continue
                if ty is None:
                    leq[x][y] = False  # Zero-like x was folded into Zero already
                    rleq[x][y] = tx[q0] in dead_idx
                    continue
                leq[x][y] = all(incl[tx[q]][ty[q]] for q in range(len(tx)))
                rleq[x][y] = incl[tx[q0]][ty[q0]]
        self._leq = leq
        self._rleq = rleq

    def class_leq(self, x: ClassId, y: ClassId) -> bool:
        """Two-sided syntactic precongruence on classes."""
        self._ensure_orders()
        return self._leq[x][y]

    def class_right_leq(self, x: ClassId, y: ClassId) -> bool:
        """Right syntactic precongruence on classes."""
        self._ensure_orders()
        return self._rleq[x][y]

    def is_right_separating(self) -> bool:
        """Whether the two-sided and the right precongruence coincide."""
        self._ensure_orders()
        n = len(self.transformations)
        return all(self._leq[x][y] == self._rleq[x][y] for x in range(n) for y in range(n))


def build_monoid(objective: Dfa, class_cap: int = DEFAULT_CLASS_CAP) -> SynMonoid:
    """Close the letter transformations of the minimized objective under composition."""
    canon = objective.minimize()
    states = list(canon.states)
    index = {q: i for i, q in enumerate(states)}
    dead = {index[q] for q in canon.dead_states()}
    n = len(states)

    def fold(trans: Tuple[int, ...]) -> Optional[Tuple[int, ...]]:
        if all(t in dead for t in trans):
            return None
        return trans

    classes: List[Optional[Tuple[int, ...]]] = [None]  # Zero first
    reps: List[tuple] = [WORD_ERR]
    by_trans: Dict[Optional[Tuple[int, ...]], int] = {None: 0}

    def intern(trans, rep) -> int:
        trans = fold(trans) if trans is not None else None
        if trans in by_trans:
            return by_trans[trans]
        if len(classes) >= class_cap:
            raise ResourceLimitError("monoid-classes", class_cap, len(classes) + 1)
        by_trans[trans] = len(classes)
        classes.append(trans)
        reps.append(rep)
        return by_trans[trans]

    identity = intern(tuple(range(n)), ())
    gen_trans = {}
    generators = {}
    for a in canon.alphabet:
        trans = tuple(index[canon.delta[(states[i], a)]] for i in range(n))
        gen_trans[a] = trans
        generators[a] = intern(trans, (a,))

    # BFS closure over right-multiplication by generators.
    frontier = list(range(len(classes)))
    while frontier:
        new_frontier = []
        for x in frontier:
            tx = classes[x]
            for a in canon.alphabet:
                if tx is None:
                    continue
                ta = gen_trans[a]
                composed = tuple(ta[tx[i]] for i in range(n))
                before = len(classes)
                y = intern(composed, reps[x] + (a,))
                if y == before:
                    new_frontier.append(y)
        frontier = new_frontier

    size = len(classes)
    table = [[0] * size for _ in range(size)]
    for x in range(size):
        tx = classes[x]
        for y in range(size):
            ty = classes[y]
            if tx is None or ty is None:
                table[x][y] = 0
                continue
            composed = fold(tuple(ty[tx[i]] for i in range(n)))
            table[x][y] = by_trans[composed]
    return SynMonoid(
        dfa=canon,
        transformations=classes,
        representatives=reps,
        generators=generators,
        table=table,
        identity=identity,
        zero=0,
        _state_index=index,
    )


def is_right_separating_bounded(
    membership: Callable[[tuple], bool],
    alphabet: Iterable[str],
    max_len: int,
) -> bool:
    """Bounded right-separation check for objectives given only by membership.

    Sound only up to the bound: pairs of words up to max_len are compared
    with two-sided extensions up to max_len; whenever the two-sided order
    separates a pair, a right witness is searched up to a derived bound
    ((2*max_len+1)^2 for unary alphabets, max_len+2 otherwise).
    """
    alphabet = list(dict.fromkeys(alphabet))
    if max_len < 1:
        raise ValueError("max_len must be at least 1")

    def words_upto(k):
        for length in range(k + 1):
            yield from itertools.product(alphabet, repeat=length)

    ext_bound = (2 * max_len + 1) ** 2 if len(alphabet) == 1 else max_len + 2
    contexts = list(words_upto(max_len))
    candidates = list(words_upto(max_len)) + [WORD_ERR]
    extensions = list(words_upto(ext_bound))

    def two_sided_leq(w, wp) -> bool:
        for u in contexts:
            for v in contexts:
                if w == WORD_ERR:
                    left = False
                else:
                    left = membership(u + w + v)
                if left and (wp == WORD_ERR or not membership(u + wp + v)):
                    return False
        return True

    for w in candidates:
        for wp in candidates:
            if w == wp or two_sided_leq(w, wp):
                continue
            found = False
            for v in extensions:
                win_w = w != WORD_ERR and membership(w + v)
                win_wp = wp != WORD_ERR and membership(wp + v)
                if win_w and not win_wp:
                    found = True
                    break
            if not found:
                return False
    return True
