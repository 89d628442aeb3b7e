"""Monotone circuit evaluation as a contextual-preorder query.

Each gate becomes a non-terminal: constants expand to a fixed winning word
or err, conjunctions to demonic and disjunctions to angelic choices over
their input gates. The circuit evaluates to true exactly when the winning
word is below the output gate in the specialized contextual preorder.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, Tuple

from ..dfa import finite_language_dfa
from ..errors import ParseError
from ..terms import ERR, Grammar, Letter, Player, Term, choice, nt
from .common import EncodedGame

WITNESS_LETTER = "w"


@dataclass(frozen=True)
class Gate:
    name: str
    kind: str  # true | false | and | or
    inputs: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Circuit:
    gates: Tuple[Gate, ...]
    output: str

    def __post_init__(self):
        seen = set()
        names = {g.name for g in self.gates}
        if self.output not in names:
            raise ParseError(f"output gate {self.output!r} is not defined")
        for gate in self.gates:
            if gate.name in seen:
                raise ParseError(f"duplicate gate {gate.name!r}")
            if gate.kind in ("true", "false"):
                if gate.inputs:
                    raise ParseError(f"constant gate {gate.name!r} takes no inputs")
            elif gate.kind in ("and", "or"):
                if not gate.inputs:
                    raise ParseError(f"gate {gate.name!r} needs inputs")
                for ref in gate.inputs:
                    if ref not in seen:
                        raise ParseError(
                            f"gate {gate.name!r} uses {ref!r} before its definition"
                        )
            else:
                raise ParseError(f"unknown gate kind {gate.kind!r}")
            seen.add(gate.name)

    def evaluate(self) -> bool:
        """Direct evaluation (test oracle)."""
        values: Dict[str, bool] = {}
        for gate in self.gates:
            if gate.kind == "true":
                values[gate.name] = True
            elif gate.kind == "false":
                values[gate.name] = False
            elif gate.kind == "and":
                values[gate.name] = all(values[r] for r in gate.inputs)
            else:
                values[gate.name] = any(values[r] for r in gate.inputs)
        return values[self.output]


def circuit_from_json(data) -> Circuit:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        gates = tuple(
            Gate(str(g["name"]), str(g["kind"]), tuple(str(i) for i in g.get("inputs", [])))
            for g in data["gates"]
        )
        return Circuit(gates, str(data["output"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed circuit JSON: {exc}") from exc


def encode_mcvp(circuit: Circuit) -> EncodedGame:
    """The circuit value is the answer to: witness word below output gate?"""
    defs: Dict[str, Term] = {}
    for gate in circuit.gates:
        if gate.kind == "true":
            defs[gate.name] = Letter(WITNESS_LETTER)
        elif gate.kind == "false":
            defs[gate.name] = ERR
        elif gate.kind == "and":
            defs[gate.name] = choice(Player.ADAM, 1, [nt(r) for r in gate.inputs])
        else:
            defs[gate.name] = choice(Player.EVE, 1, [nt(r) for r in gate.inputs])
    grammar = Grammar(defs, 1)
    objective = finite_language_dfa([(WITNESS_LETTER,)], [WITNESS_LETTER])
    game = EncodedGame(grammar, nt(circuit.output), objective)
    game.meta = {
        "problem": "mcvp",
        "query": {"left": WITNESS_LETTER, "right": f"@{circuit.output}"},
    }
    return game
