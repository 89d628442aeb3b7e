"""Text syntax for terms and grammars.

    term   := seq { ("E"|"A") INT seq }        (infix choice, binds loosest)
    seq    := factor { "." factor }
    factor := atom | choice | "(" term ")"
    choice := ("E"|"A") INT "{" term { "," term } "}"
    atom   := IDENT | QUOTED | "skip" | "err" | "_" | "@" (IDENT | QUOTED)

Identifiers are bare words like a, a_l, q0'. Symbols that are not bare
identifiers (the encoders use tuples such as (q,a,q') as single letters)
are written single-quoted: '(q,a,q')'. A chain of infix choices with one
player and urgency parses as a single flat choice; mixed chains associate
to the right. Grammar files: a header line `maxurg <N>;` followed by lines
`@X = <term>;`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Tuple

from .errors import GrammarError, ParseError
from .terms import (
    ERR,
    HOLE,
    HOLE_NAME,
    SKIP,
    Concat,
    Err,
    Grammar,
    Letter,
    NonTerminal,
    Player,
    Skip,
    Term,
    choice,
    nt,
)

_IDENT = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_']*")
_CHOICEOP = re.compile(r"[EA][0-9]+$")
_BARE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_']*$")


@dataclass
class _Token:
    kind: str  # IDENT QUOTED CHOICEOP AT PUNCT EOF
    text: str
    line: int
    column: int


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in ".,{}()=;@":
            tokens.append(_Token("AT" if ch == "@" else "PUNCT", ch, line, col))
            i += 1
            col += 1
            continue
        if ch == "'":
            j = text.find("'", i + 1)
            if j < 0:
                raise ParseError("unterminated quoted symbol", line, col)
            tokens.append(_Token("QUOTED", text[i + 1 : j], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        m = _IDENT.match(text, i)
        if m:
            word = m.group(0)
            kind = "CHOICEOP" if _CHOICEOP.match(word) else "IDENT"
            tokens.append(_Token(kind, word, line, col))
            i = m.end()
            col += len(word)
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.line, tok.column)
        return tok

    def fail(self, message: str):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.column)

    # term := seq { CHOICEOP seq }
    def term(self) -> Term:
        first = self.seq()
        parts: List[Tuple[Tuple[Player, int], Term]] = []
        while self.peek().kind == "CHOICEOP" and not self._choice_braced():
            op = self._choice_op(self.next())
            parts.append((op, self.seq()))
        if not parts:
            return first
        ops = {op for op, _ in parts}
        if len(ops) == 1:
            player, urg = parts[0][0]
            return self._mk_choice(player, urg, [first] + [t for _, t in parts], self.peek())
        out = parts[-1][1]
        items = [first] + [t for _, t in parts[:-1]]
        for (player, urg), left in zip(reversed([op for op, _ in parts]), reversed(items)):
            out = self._mk_choice(player, urg, [left, out], self.peek())
        return out

    def _choice_braced(self) -> bool:
        return self.tokens[self.pos + 1].text == "{"

    @staticmethod
    def _choice_op(tok: _Token) -> Tuple[Player, int]:
        player = Player.EVE if tok.text[0] == "E" else Player.ADAM
        return player, int(tok.text[1:])

    def _mk_choice(self, player, urg, operands, tok) -> Term:
        if urg < 1:
            raise ParseError("choice urgency must be at least 1", tok.line, tok.column)
        try:
            return choice(player, urg, operands)
        except GrammarError as exc:
            raise ParseError(str(exc), tok.line, tok.column) from exc

    def seq(self) -> Term:
        out = self.factor()
        while self.peek().text == ".":
            self.next()
            out = Concat(out, self.factor())
        return out

    def factor(self) -> Term:
        tok = self.peek()
        if tok.text == "(":
            self.next()
            inner = self.term()
            self.expect(")")
            return inner
        if tok.kind == "CHOICEOP":
            if not self._choice_braced():
                self.fail("infix choice needs a left operand")
            op = self.next()
            player, urg = self._choice_op(op)
            self.expect("{")
            operands = [self.term()]
            while self.peek().text == ",":
                self.next()
                operands.append(self.term())
            self.expect("}")
            if self.peek().text == "{" or self.peek().kind in ("IDENT", "QUOTED", "AT"):
                self.fail("missing '.' between factors")
            return self._mk_choice(player, urg, operands, op)
        return self.atom()

    def atom(self) -> Term:
        tok = self.next()
        if tok.kind == "AT":
            name = self.next()
            if name.kind not in ("IDENT", "QUOTED", "CHOICEOP"):
                raise ParseError("expected non-terminal name after '@'", name.line, name.column)
            return nt(name.text)
        if tok.kind == "QUOTED":
            return Letter(tok.text)
        if tok.kind == "IDENT":
            if tok.text == "skip":
                return SKIP
            if tok.text == "err":
                return ERR
            if tok.text == HOLE_NAME:
                return HOLE
            return Letter(tok.text)
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.line, tok.column)


def parse_term(text: str) -> Term:
    parser = _Parser(text)
    out = parser.term()
    tok = parser.peek()
    if tok.kind != "EOF":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.column)
    return out


def _print_symbol(symbol: str) -> str:
    if _BARE.match(symbol) and symbol not in ("skip", "err") and not _CHOICEOP.match(symbol):
        return symbol
    return f"'{symbol}'"


def print_term(t: Term) -> str:
    if isinstance(t, Skip):
        return "skip"
    if isinstance(t, Err):
        return "err"
    if isinstance(t, Letter):
        return _print_symbol(t.symbol)
    if isinstance(t, NonTerminal):
        return t.name if t.name == HOLE_NAME else "@" + _print_symbol(t.name)
    if isinstance(t, Concat):
        left = print_term(t.left)
        right = print_term(t.right)
        if isinstance(t.right, Concat):
            right = f"({right})"
        return f"{left} . {right}"
    ops = ", ".join(print_term(s) for s in t.operands)
    return f"{t.player.value}{t.urgency}{{{ops}}}"


def parse_grammar(text: str) -> Grammar:
    """Grammar file: `maxurg <N>;` then `@X = <term>;` lines."""
    parser = _Parser(text)
    head = parser.next()
    if head.text != "maxurg":
        raise ParseError("grammar file must start with 'maxurg <N>;'", head.line, head.column)
    num = parser.next()
    if not num.text.isdigit():
        raise ParseError("expected a number after 'maxurg'", num.line, num.column)
    parser.expect(";")
    defs = {}
    while parser.peek().kind != "EOF":
        at = parser.next()
        if at.kind != "AT":
            raise ParseError("expected '@<name> = <term>;'", at.line, at.column)
        name = parser.next()
        if name.kind not in ("IDENT", "QUOTED", "CHOICEOP"):
            raise ParseError("expected non-terminal name", name.line, name.column)
        if name.text in defs:
            raise ParseError(f"duplicate definition of @{name.text}", name.line, name.column)
        parser.expect("=")
        defs[name.text] = parser.term()
        parser.expect(";")
    try:
        return Grammar(defs, int(num.text))
    except GrammarError as exc:
        raise ParseError(str(exc)) from exc


def print_grammar(g: Grammar) -> str:
    lines = [f"maxurg {g.max_urgency};"]
    for name in sorted(g.defs):
        lines.append(f"@{_print_symbol(name)} = {print_term(g.defs[name])};")
    return "\n".join(lines) + "\n"
