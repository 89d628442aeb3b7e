"""Reductions from classic verification problems into urgency games."""

from .common import EncodedGame
from .nfa import Nfa, nfa_from_json
from .inclusion import encode_inclusion, encode_simulation
from .iig import encode_imperfect_info
from .pushdown import Pds, encode_pushdown, extract_summaries, pds_from_json
from .hyper import HyperSpec, encode_hyper, hyper_from_json
from .mcvp import Circuit, circuit_from_json, encode_mcvp

__all__ = [
    "EncodedGame",
    "Nfa",
    "nfa_from_json",
    "encode_inclusion",
    "encode_simulation",
    "encode_imperfect_info",
    "Pds",
    "pds_from_json",
    "encode_pushdown",
    "extract_summaries",
    "HyperSpec",
    "hyper_from_json",
    "encode_hyper",
    "Circuit",
    "circuit_from_json",
    "encode_mcvp",
]
