"""Shared encoder output shape."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict

from ..dfa import Dfa
from ..terms import Grammar, Term


def triple_symbol(q, x, q2) -> str:
    return f"({q},{x},{q2})"


@dataclass
class EncodedGame:
    grammar: Grammar
    term: Term
    dfa: Dfa
    meta: Dict = field(default_factory=dict)
