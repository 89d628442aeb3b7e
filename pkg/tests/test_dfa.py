import itertools
import random

import pytest

from urgency.dfa import (
    Dfa,
    builtin_dfa,
    dfa_from_json,
    finite_language_dfa,
    reach_dfa,
    terminate_dfa,
)
from urgency.errors import AlphabetError, ParseError
from urgency.selftest import random_dfa


def words_upto(alphabet, k):
    for n in range(k + 1):
        yield from itertools.product(alphabet, repeat=n)


def test_builtins():
    t = terminate_dfa(["a", "b"])
    assert t.member(("a", "b", "a")) and t.member(())
    r = reach_dfa("#", ["a"])
    assert r.member(("a", "#", "a")) and not r.member(("a", "a"))
    f = finite_language_dfa([("a", "b"), ("c",)], ["a", "b", "c"])
    assert f.member(("a", "b")) and f.member(("c",)) and not f.member(("a",))
    assert builtin_dfa("terminate:a,b").member(("b",))
    assert builtin_dfa("reach:#:a").member(("#",))
    assert builtin_dfa("words:a.b|c:a,b,c").member(("c",))
    with pytest.raises(ParseError):
        builtin_dfa("nope:x")


def test_member_err_word():
    assert not terminate_dfa(["a"]).member(("err",))


def test_totality_validation():
    with pytest.raises(ParseError):
        Dfa(("q",), "q", ("a",), {}, frozenset())


def test_unknown_letter():
    t = terminate_dfa(["a"])
    with pytest.raises(AlphabetError):
        t.member(("z",))


def test_complement_involution_and_products():
    rng = random.Random(10)
    for _ in range(30):
        o = random_dfa(rng, 3, ("a", "b"))
        o2 = random_dfa(rng, 3, ("a", "b"))
        comp = o.complement()
        inter = o.intersect(o2)
        union = o.union(o2)
        for w in words_upto(("a", "b"), 4):
            assert comp.member(w) == (not o.member(w))
            assert inter.member(w) == (o.member(w) and o2.member(w))
            assert union.member(w) == (o.member(w) or o2.member(w))
        assert o.includes(o.intersect(o2))
        assert o.union(o2).includes(o)


def test_minimize_preserves_language():
    rng = random.Random(11)
    for _ in range(40):
        o = random_dfa(rng, 4, ("a", "b"))
        m = o.minimize()
        assert len(m.states) <= len(o.states)
        for w in words_upto(("a", "b"), 4):
            assert m.member(w) == o.member(w)
        assert len(m.minimize().states) == len(m.states)


def test_residual_inclusion_is_reflexive_and_semantic():
    rng = random.Random(12)
    o = random_dfa(rng, 4, ("a", "b"))
    incl = o.residual_inclusion()
    for q in o.states:
        assert (q, q) in incl
    for q, p in itertools.product(o.states, repeat=2):
        semantic = all(
            (o.run(w, q) in o.finals) <= (o.run(w, p) in o.finals)
            for w in words_upto(("a", "b"), 5)
        )
        if (q, p) in incl:
            assert semantic


def test_dead_states():
    f = finite_language_dfa([("a",)], ["a"])
    dead = f.dead_states()
    assert f.run(("a", "a")) in dead and f.run(("a",)) not in dead


def test_json_roundtrip():
    o = finite_language_dfa([("a", "b")], ["a", "b"])
    data = o.to_json()
    assert data["schema_version"] == 1
    o2 = dfa_from_json(data)
    assert o2.to_json() == data
    with pytest.raises(ParseError):
        dfa_from_json({"states": ["q"]})
