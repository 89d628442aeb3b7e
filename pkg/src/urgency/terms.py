"""Program terms, grammars, contexts, and the leading-subterm machinery.

Terms are immutable trees built from letters, skip, err, non-terminals,
concatenation, and player-owned choices annotated with an urgency. Choice
operands have set semantics: they are stored deduplicated in a canonical
order, so structural equality decides set equality.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Tuple, Union

from .errors import GrammarError

HOLE_NAME = "_"


class Player(enum.Enum):
    EVE = "E"
    ADAM = "A"

    @property
    def opponent(self) -> "Player":
        return Player.ADAM if self is Player.EVE else Player.EVE


class _Node:
    """Shared plumbing: precomputed hash, fast equality."""

    __slots__ = ()

    def __hash__(self):
        return self._hash  # type: ignore[attr-defined]

    def _set_hash(self, value):
        object.__setattr__(self, "_hash", value)


@dataclass(frozen=True, eq=False, repr=False)
class Letter(_Node):
    symbol: str
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        self._set_hash(hash(("let", self.symbol)))

    __hash__ = _Node.__hash__

    def __eq__(self, other):
        return isinstance(other, Letter) and self.symbol == other.symbol

    def __repr__(self):
        return f"Letter({self.symbol!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Skip(_Node):
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        self._set_hash(hash("skip"))

    __hash__ = _Node.__hash__

    def __eq__(self, other):
        return isinstance(other, Skip)

    def __repr__(self):
        return "Skip()"


@dataclass(frozen=True, eq=False, repr=False)
class Err(_Node):
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        self._set_hash(hash("err"))

    __hash__ = _Node.__hash__

    def __eq__(self, other):
        return isinstance(other, Err)

    def __repr__(self):
        return "Err()"


@dataclass(frozen=True, eq=False, repr=False)
class NonTerminal(_Node):
    name: str
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        self._set_hash(hash(("nt", self.name)))

    __hash__ = _Node.__hash__

    def __eq__(self, other):
        return isinstance(other, NonTerminal) and self.name == other.name

    def __repr__(self):
        return f"NonTerminal({self.name!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Concat(_Node):
    left: "Term"
    right: "Term"
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        self._set_hash(hash(("cat", self.left._hash, self.right._hash)))

    __hash__ = _Node.__hash__

    def __eq__(self, other):
        return (
            isinstance(other, Concat)
            and self._hash == other._hash
            and self.left == other.left
            and self.right == other.right
        )

    def __repr__(self):
        return f"Concat({self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Choice(_Node):
    player: Player
    urgency: int
    operands: Tuple["Term", ...]  # canonical order, deduplicated
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        self._set_hash(
            hash(("ch", self.player, self.urgency, tuple(t._hash for t in self.operands)))
        )

    __hash__ = _Node.__hash__

    def __eq__(self, other):
        return (
            isinstance(other, Choice)
            and self._hash == other._hash
            and self.player == other.player
            and self.urgency == other.urgency
            and self.operands == other.operands
        )

    def __repr__(self):
        return f"Choice({self.player}, {self.urgency}, {self.operands!r})"


Term = Union[Letter, Skip, Err, NonTerminal, Concat, Choice]

SKIP = Skip()
ERR = Err()
HOLE = NonTerminal(HOLE_NAME)


def sort_key(t: Term):
    """Total structural order on terms, used to canonicalize choice operands."""
    if isinstance(t, Skip):
        return (0,)
    if isinstance(t, Err):
        return (1,)
    if isinstance(t, Letter):
        return (2, t.symbol)
    if isinstance(t, NonTerminal):
        return (3, t.name)
    if isinstance(t, Concat):
        return (4, sort_key(t.left), sort_key(t.right))
    return (5, t.player.value, t.urgency, tuple(sort_key(s) for s in t.operands))


def letter(symbol: str) -> Letter:
    return Letter(symbol)


def nt(name: str) -> NonTerminal:
    return NonTerminal(name)


def concat(*parts: Term) -> Term:
    """Left-associated concatenation; no parts gives skip."""
    if not parts:
        return SKIP
    out = parts[0]
    for p in parts[1:]:
        out = Concat(out, p)
    return out


def choice(player: Player, urgency: int, operands: Iterable[Term]) -> Choice:
    ops = sorted(set(operands), key=sort_key)
    if not ops:
        raise GrammarError("choice over the empty set is not a term")
    if urgency < 1:
        raise GrammarError(f"choice urgency must be positive, got {urgency}")
    return Choice(player, urgency, tuple(ops))


def eve(urgency: int, *operands: Term) -> Choice:
    return choice(Player.EVE, urgency, operands)


def adam(urgency: int, *operands: Term) -> Choice:
    return choice(Player.ADAM, urgency, operands)


def subterms(t: Term):
    """All subterm nodes, preorder."""
    yield t
    if isinstance(t, Concat):
        yield from subterms(t.left)
        yield from subterms(t.right)
    elif isinstance(t, Choice):
        for s in t.operands:
            yield from subterms(s)


def term_size(t: Term) -> int:
    if isinstance(t, Concat):
        return 1 + term_size(t.left) + term_size(t.right)
    if isinstance(t, Choice):
        return 1 + sum(term_size(s) for s in t.operands)
    return 1


def nonterminals_of(t: Term) -> frozenset:
    return frozenset(s.name for s in subterms(t) if isinstance(s, NonTerminal))


def letters_of(t: Term) -> frozenset:
    return frozenset(s.symbol for s in subterms(t) if isinstance(s, Letter))


def is_word_term(t: Term) -> bool:
    """Word terms contain neither choices nor non-terminals."""
    return all(not isinstance(s, (Choice, NonTerminal)) for s in subterms(t))


def max_choice_urgency(t: Term) -> int:
    """Highest urgency annotation occurring anywhere in the term, 0 if none."""
    return max((s.urgency for s in subterms(t) if isinstance(s, Choice)), default=0)


WORD_ERR = ("err",)  # sentinel monoid zero


def flatten_word(t: Term):
    """Monoid view of a word term: a letter tuple, or WORD_ERR if err occurs."""
    out = []

    def walk(s):
        if isinstance(s, Err):
            return False
        if isinstance(s, Letter):
            out.append(s.symbol)
            return True
        if isinstance(s, Skip):
            return True
        if isinstance(s, Concat):
            return walk(s.left) and walk(s.right)
        raise GrammarError(f"not a word term: {s!r}")

    if not walk(t):
        return WORD_ERR
    return tuple(out)


def word_term(word) -> Term:
    """Inverse of flatten_word, producing the canonical flat rendering."""
    if word == WORD_ERR:
        return ERR
    if not word:
        return SKIP
    return concat(*[Letter(a) for a in word])


def urgency_of(t: Term, max_urgency: int) -> int:
    """Urgency of a term; 0 exactly on word terms."""
    if isinstance(t, (Letter, Skip, Err)):
        return 0
    if isinstance(t, NonTerminal):
        return max_urgency
    if isinstance(t, Choice):
        return t.urgency
    u = urgency_of(t.left, max_urgency)
    if u == max_urgency:
        return u
    return max(u, urgency_of(t.right, max_urgency))


@dataclass(frozen=True)
class Leading:
    subterm: Term
    context: Term  # t with the leading subterm replaced by the hole
    path: Tuple[str, ...]  # 'L'/'R' steps through concatenations


def leading_subterm(t: Term, max_urgency: int) -> Optional[Leading]:
    """Leftmost outermost action of maximal urgency, with its enclosing context.

    Word terms are passive and have no leading subterm.
    """
    if isinstance(t, (Letter, Skip, Err)):
        return None
    if isinstance(t, (NonTerminal, Choice)):
        return Leading(t, HOLE, ())
    lu = urgency_of(t.left, max_urgency)
    ru = urgency_of(t.right, max_urgency)
    if lu == 0 and ru == 0:
        return None
    if lu >= ru and lu > 0:
        inner = leading_subterm(t.left, max_urgency)
        assert inner is not None
        return Leading(inner.subterm, Concat(inner.context, t.right), ("L",) + inner.path)
    inner = leading_subterm(t.right, max_urgency)
    assert inner is not None
    return Leading(inner.subterm, Concat(t.left, inner.context), ("R",) + inner.path)


def count_holes(c: Term) -> int:
    return sum(1 for s in subterms(c) if s == HOLE)


def hole_path(c: Term) -> Optional[tuple]:
    """Path to the hole; steps are 'L', 'R', or ('C', operand index)."""
    if c == HOLE:
        return ()
    if isinstance(c, Concat):
        p = hole_path(c.left)
        if p is not None:
            return ("L",) + p
        p = hole_path(c.right)
        if p is not None:
            return ("R",) + p
        return None
    if isinstance(c, Choice):
        for i, s in enumerate(c.operands):
            p = hole_path(s)
            if p is not None:
                return (("C", i),) + p
    return None


def plug(c: Term, t: Term) -> Term:
    """Replace the hole in context c by t; identity when c has no hole."""
    if c == HOLE:
        return t
    if isinstance(c, Concat):
        return Concat(plug(c.left, t), plug(c.right, t))
    if isinstance(c, Choice):
        return choice(c.player, c.urgency, (plug(s, t) for s in c.operands))
    return c


class InsertionKind(enum.Enum):
    IMMEDIATE = "immediate"
    PAUSED = "paused"


def classify_insertion(c: Term, t: Term, max_urgency: int) -> InsertionKind:
    """Whether t, inserted into c, is rewritten by the next move.

    Immediate means the composed term is a word term or its leading subterm
    lies inside the inserted t; paused otherwise.
    """
    hp = hole_path(c)
    if hp is None:
        raise GrammarError("classify_insertion requires a context with a hole")
    composed = plug(c, t)
    lead = leading_subterm(composed, max_urgency)
    if lead is None:
        return InsertionKind.IMMEDIATE
    p = lead.path
    if len(hp) <= len(p) and tuple(hp) == tuple(p[: len(hp)]):
        return InsertionKind.IMMEDIATE
    return InsertionKind.PAUSED


@dataclass(frozen=True)
class Grammar:
    """Defining equations for non-terminals plus the maximal urgency."""

    defs: Mapping[str, Term]
    max_urgency: int

    def __post_init__(self):
        if self.max_urgency < 1:
            raise GrammarError("max urgency must be at least 1")
        object.__setattr__(self, "defs", dict(self.defs))
        if HOLE_NAME in self.defs:
            raise GrammarError(f"non-terminal name {HOLE_NAME!r} is reserved for the hole")
        for name, body in self.defs.items():
            self.validate_term(body, where=f"definition of @{name}")

    @staticmethod
    def empty(max_urgency: int) -> "Grammar":
        return Grammar({}, max_urgency)

    @property
    def nonterminals(self) -> frozenset:
        return frozenset(self.defs)

    def validate_term(self, t: Term, where: str = "term") -> None:
        for s in subterms(t):
            if isinstance(s, NonTerminal) and s.name != HOLE_NAME and s.name not in self.defs:
                raise GrammarError(f"undefined non-terminal @{s.name} in {where}")
            if isinstance(s, Choice) and s.urgency > self.max_urgency:
                raise GrammarError(
                    f"choice urgency {s.urgency} exceeds maximum {self.max_urgency} in {where}"
                )

    def alphabet(self) -> frozenset:
        out = set()
        for body in self.defs.values():
            out |= letters_of(body)
        return frozenset(out)
