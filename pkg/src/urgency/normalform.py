"""Objective-specialized normal forms.

A normal form of level u is a strict alternation tree: an Eve-set of
Adam-sets of level-(u-1) normal forms, with syntactic-congruence classes at
level 0. Urgency is encoded purely by tree depth; the urgency tag a choice
carried syntactically only determines at which level its alternatives enter
the tree. Normalization of arbitrary finitary terms (grammars included, via
ascending fixed-point iteration over the finite lattice of normal forms),
the winner evaluation, and the domination preorder all live on one algebra
object that owns the caches and the node-count guard.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .errors import GrammarError, ResourceLimitError
from .monoid import ClassId, SynMonoid
from .terms import (
    Choice,
    Concat,
    Err,
    Grammar,
    Letter,
    NonTerminal,
    Player,
    Skip,
    Term,
    WORD_ERR,
    choice,
    concat,
    word_term,
)

DEFAULT_NODE_CAP = 1_000_000
DEFAULT_ENUM_CAP = 10_000


@dataclass(frozen=True, eq=False, repr=False)
class NormalForm:
    level: int
    leaf: Optional[ClassId]
    esets: Optional[FrozenSet[FrozenSet["NormalForm"]]]
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.level, self.leaf, self.esets)))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or (
            isinstance(other, NormalForm)
            and self._hash == other._hash
            and self.level == other.level
            and self.leaf == other.leaf
            and self.esets == other.esets
        )

    def __repr__(self):
        if self.level == 0:
            return f"NF0({self.leaf})"
        return f"NF{self.level}({len(self.esets)} options)"

    def node_count(self) -> int:
        if self.level == 0:
            return 1
        return 1 + sum(c.node_count() for s in self.esets for c in s)


def _nf_key(nf: NormalForm):
    if nf.level == 0:
        return (0, nf.leaf)
    return (1, tuple(sorted(tuple(sorted(map(_nf_key, s))) for s in nf.esets)))


def nf_sort_key(nf: NormalForm):
    """Stable structural sort key for normal forms."""
    return _nf_key(nf)


class NfAlgebra:
    """Normal-form operations specialized to one objective monoid."""

    def __init__(
        self,
        monoid: SynMonoid,
        max_urgency: int,
        max_nodes: int = DEFAULT_NODE_CAP,
        prune: bool = False,
    ):
        if max_urgency < 1:
            raise GrammarError("max urgency must be at least 1")
        self.monoid = monoid
        self.max_urgency = max_urgency
        self.max_nodes = max_nodes
        self.prune = prune
        self._intern: Dict[NormalForm, NormalForm] = {}
        self._leaves: Dict[ClassId, NormalForm] = {}
        self._concat: Dict[Tuple[NormalForm, NormalForm], NormalForm] = {}
        self._wins: Dict[NormalForm, bool] = {}
        self._dom: Dict[Tuple[NormalForm, NormalForm], bool] = {}
        self._dom_adam: Dict[Tuple[FrozenSet, FrozenSet], bool] = {}

    # -- construction ----------------------------------------------------

    def _mk(self, level: int, esets) -> NormalForm:
        nf = NormalForm(level, None, frozenset(map(frozenset, esets)))
        if not nf.esets or any(not s for s in nf.esets):
            raise GrammarError("normal-form sets must be non-empty")
        cached = self._intern.get(nf)
        if cached is not None:
            return cached
        if len(self._intern) >= self.max_nodes:
            raise ResourceLimitError("nf-nodes", self.max_nodes, len(self._intern) + 1)
        if self.prune and level > 0:
            pruned = self._prune_esets(nf.esets)
            if pruned != nf.esets:
                nf = NormalForm(level, None, pruned)
                cached = self._intern.get(nf)
                if cached is not None:
                    return cached
        self._intern[nf] = nf
        return nf

    def eset_nf(self, level: int, adam_sets) -> NormalForm:
        """Normal form from explicit Adam-sets of level-(level-1) members."""
        return self._mk(level, adam_sets)

    def leaf(self, cls: ClassId) -> NormalForm:
        nf = self._leaves.get(cls)
        if nf is None:
            nf = NormalForm(0, cls, None)
            self._leaves[cls] = nf
            self._intern[nf] = nf
        return nf

    def nf_of_class(self, cls: ClassId, level: Optional[int] = None) -> NormalForm:
        """Singleton alternation tower over one congruence class."""
        return self.lift(self.leaf(cls), self.max_urgency if level is None else level)

    def lift(self, nf: NormalForm, level: int) -> NormalForm:
        while nf.level < level:
            nf = self._mk(nf.level + 1, [[nf]])
        return nf

    def bottom(self, level: Optional[int] = None) -> NormalForm:
        return self.nf_of_class(self.monoid.zero, level)

    # -- pruning (optional, winner- and domination-invariant) -------------

    def _prune_esets(self, esets):
        """Antichain reduction: Adam keeps dominated members, Eve dominating sets."""

        def select(items, better, key):
            # Keep one representative per domination cluster, canonical by key.
            items = sorted(items, key=key)
            kept = []
            for y in items:
                drop = False
                for x in items:
                    if x is y:
                        continue
                    if better(x, y) and (not better(y, x) or key(x) < key(y)):
                        drop = True
                        break
                if not drop:
                    kept.append(y)
            return kept

        slim = [
            frozenset(select(s, lambda x, y: self.dominates(x, y), _nf_key)) for s in esets
        ]
        kept_sets = select(
            slim,
            lambda s, t: self._adamset_dominates(t, s),
            lambda s: tuple(sorted(map(_nf_key, s))),
        )
        return frozenset(kept_sets)

    # -- combination -----------------------------------------------------

    def combine_eve(self, operands: Iterable[NormalForm]) -> NormalForm:
        """Eve choice over same-level normal forms: union of the Eve-sets."""
        operands = list(operands)
        level = self._common_level(operands)
        esets = set()
        for nf in operands:
            esets |= nf.esets
        return self._mk(level, esets)

    def combine_adam(self, operands: Iterable[NormalForm]) -> NormalForm:
        """Adam choice over same-level normal forms.

        Folded pairwise: each step forms the unions of one Adam-set from
        each side, deduplicating as it goes, instead of enumerating all
        choice functions at once.
        """
        operands = list(operands)
        level = self._common_level(operands)
        acc = set(operands[0].esets)
        for nf in operands[1:]:
            if len(acc) * len(nf.esets) > self.max_nodes:
                raise ResourceLimitError(
                    "nf-nodes", self.max_nodes, len(acc) * len(nf.esets)
                )
            acc = {s1 | s2 for s1 in acc for s2 in nf.esets}
        return self._mk(level, acc)

    @staticmethod
    def _common_level(operands) -> int:
        if not operands:
            raise GrammarError("choice over the empty set is not a term")
        level = operands[0].level
        if any(nf.level != level for nf in operands) or level < 1:
            raise GrammarError("combination requires equal levels of at least 1")
        return level

    def collapse(self, nf: NormalForm, level: int) -> NormalForm:
        """Retag a normal form down to a lower level.

        Choices hidden below a level-`level` choice resolve consecutively
        once it fires, so the alternation layers above `level` flatten into
        it: each Adam-set combines by choice functions, the Eve layers by
        union.
        """
        if nf.level == level:
            return nf
        if nf.level < level or level < 1:
            raise GrammarError("collapse target must be a lower, positive level")
        esets = set()
        for s in nf.esets:
            combined = self.combine_adam([self.collapse(c, level) for c in s])
            esets |= combined.esets
        return self._mk(level, esets)

    def choice_nf(self, player: Player, urgency: int, operands: Iterable[NormalForm]) -> NormalForm:
        """Normal form of a choice of the given urgency over normalized operands."""
        if not 1 <= urgency <= self.max_urgency:
            raise GrammarError(f"urgency {urgency} outside 1..{self.max_urgency}")
        ops = [self.collapse(nf, urgency) for nf in operands]
        combined = self.combine_eve(ops) if player is Player.EVE else self.combine_adam(ops)
        return self.lift(combined, self.max_urgency)

    def nf_concat(self, x: NormalForm, y: NormalForm) -> NormalForm:
        """Concatenation of equal-level normal forms.

        At level 0 this is class multiplication. At level u, Eve first picks
        an Adam-set of x; each element u' then prefixes y, whose own Eve
        choice is made after u' is revealed, so the elements' copies of y
        combine as an Adam choice over level-u normal forms.
        """
        if x.level != y.level:
            raise GrammarError("concatenation requires equal levels")
        if x.level == 0:
            return self.leaf(self.monoid.multiply(x.leaf, y.leaf))
        key = (x, y)
        cached = self._concat.get(key)
        if cached is not None:
            return cached
        esets = set()
        for sx in x.esets:
            parts = []
            for u in sx:
                parts.append(
                    self._mk(
                        x.level,
                        [{self.nf_concat(u, v) for v in sy} for sy in y.esets],
                    )
                )
            esets |= self.combine_adam(parts).esets
        out = self._mk(x.level, esets)
        self._concat[key] = out
        return out

    # -- normalization ---------------------------------------------------

    def normalize(self, g: Grammar, t: Term, env: Optional[Mapping[str, NormalForm]] = None) -> NormalForm:
        """Normal form of a finitary term; non-terminals via Kleene iteration."""
        if env is None:
            env = self.grammar_normal_forms(g)
        return self._normalize_term(t, env)

    def _normalize_term(self, t: Term, env: Mapping[str, NormalForm]) -> NormalForm:
        if isinstance(t, (Letter, Skip, Err)):
            return self.nf_of_class(self.monoid.class_of_word(t))
        if isinstance(t, NonTerminal):
            try:
                return env[t.name]
            except KeyError:
                raise GrammarError(f"undefined non-terminal @{t.name}") from None
        if isinstance(t, Concat):
            return self.nf_concat(
                self._normalize_term(t.left, env), self._normalize_term(t.right, env)
            )
        assert isinstance(t, Choice)
        return self.choice_nf(
            t.player, t.urgency, [self._normalize_term(s, env) for s in t.operands]
        )

    def grammar_normal_forms(
        self, g: Grammar, check_ascending: bool = False
    ) -> Dict[str, NormalForm]:
        """Least fixed point of the defining equations over the normal-form lattice.

        Every component starts at the normal form of err and joins in the
        body's normal form under the previous assignment until stable.
        """
        env = {name: self.bottom() for name in g.defs}
        while True:
            new_env = {}
            for name, body in g.defs.items():
                step = self.combine_eve([env[name], self._normalize_term(body, env)])
                if check_ascending and not self.dominates(env[name], step):
                    raise AssertionError(f"fixed-point iteration not ascending at @{name}")
                new_env[name] = step
            if new_env == env:
                return env
            env = new_env

    # -- evaluation ------------------------------------------------------

    def wins(self, nf: NormalForm) -> bool:
        """Winner of a normal form: exists an Adam-set all of whose members win."""
        cached = self._wins.get(nf)
        if cached is not None:
            return cached
        if nf.level == 0:
            result = self.monoid.class_wins(nf.leaf)
        else:
            result = any(all(self.wins(c) for c in s) for s in nf.esets)
        self._wins[nf] = result
        return result

    # -- domination preorder ----------------------------------------------

    def dominates(self, x: NormalForm, y: NormalForm) -> bool:
        """Structural forall/exists comparison; sound for the contextual preorder."""
        if x.level != y.level:
            raise GrammarError("domination compares equal levels only")
        if x.level == 0:
            return self.monoid.class_leq(x.leaf, y.leaf)
        key = (x, y)
        cached = self._dom.get(key)
        if cached is not None:
            return cached
        self._dom[key] = result = all(
            any(self._adamset_dominates(sx, sy) for sy in y.esets) for sx in x.esets
        )
        return result

    def _adamset_dominates(self, sx: FrozenSet[NormalForm], sy: FrozenSet[NormalForm]) -> bool:
        key = (sx, sy)
        cached = self._dom_adam.get(key)
        if cached is None:
            cached = all(any(self.dominates(u, v) for u in sx) for v in sy)
            self._dom_adam[key] = cached
        return cached

    # -- rendering and inspection -----------------------------------------

    def render_term(self, nf: NormalForm) -> Term:
        """A term whose normal form the given one is: choices over representatives."""
        if nf.level == 0:
            return word_term(self.monoid.representative(nf.leaf))
        return choice(
            Player.EVE,
            nf.level,
            [
                choice(Player.ADAM, nf.level, [self.render_term(c) for c in s])
                for s in nf.esets
            ],
        )

    def render_text(self, nf: NormalForm) -> str:
        if nf.level == 0:
            rep = self.monoid.representative(nf.leaf)
            if rep == WORD_ERR:
                return "err"
            return "skip" if not rep else ".".join(rep)
        inner = sorted(
            "A{" + ", ".join(sorted((self.render_text(c) for c in s))) + "}" for s in nf.esets
        )
        return "E{" + ", ".join(inner) + "}"

    def level_stats(self, nf: NormalForm) -> Dict[int, int]:
        counts: Dict[int, int] = {}

        def walk(n):
            counts[n.level] = counts.get(n.level, 0) + 1
            if n.level > 0:
                for s in n.esets:
                    for c in s:
                        walk(c)

        walk(nf)
        return counts


def enumerate_nf_level(
    algebra: NfAlgebra, level: int, cap: int = DEFAULT_ENUM_CAP
) -> List[NormalForm]:
    """All canonical normal forms at a level over the algebra's class set.

    The doubly exponential count is checked arithmetically before anything
    is materialized; exceeding the cap raises with the required count.
    """
    count = len(algebra.monoid)
    for _ in range(level):
        count = 2 ** min(count, 64) - 1  # Adam-sets
        if count > cap:
            raise ResourceLimitError("nf-enumeration", cap, count)
        count = 2 ** min(count, 64) - 1  # Eve-sets
        if count > cap:
            raise ResourceLimitError("nf-enumeration", cap, count)
    if count > cap:
        raise ResourceLimitError("nf-enumeration", cap, count)
    current = [algebra.leaf(c) for c in algebra.monoid.class_ids]
    for lvl in range(1, level + 1):
        adam_sets = [
            frozenset(s)
            for r in range(1, len(current) + 1)
            for s in itertools.combinations(current, r)
        ]
        current = [
            algebra._mk(lvl, list(es))
            for r in range(1, len(adam_sets) + 1)
            for es in itertools.combinations(adam_sets, r)
        ]
    return current
