"""Request and response models of the HTTP service.

Every response carries schema_version and an ok flag; domain failures
(parse errors, resource caps) are reported in the error field with a kind
the client can map to an exit code, not as transport-level errors.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

SCHEMA_VERSION = 1


class ErrorInfo(BaseModel):
    kind: str  # parse | grammar | alphabet | resource-limit | internal
    message: str
    limit: Optional[int] = None
    needed: Optional[int] = None


class Envelope(BaseModel):
    schema_version: int = SCHEMA_VERSION
    ok: bool = True
    error: Optional[ErrorInfo] = None


class DfaInput(BaseModel):
    """Either an inline automaton object or a built-in spec string."""

    dfa: Optional[Dict[str, Any]] = None
    builtin: Optional[str] = None


class ParseRequest(BaseModel):
    term: str
    grammar: Optional[str] = None
    max_urgency: Optional[int] = None


class ParseResponse(Envelope):
    canonical: Optional[str] = None
    size: Optional[int] = None
    urgency: Optional[int] = None
    word_term: Optional[bool] = None


class SolveRequest(BaseModel):
    term: str
    objective: DfaInput
    grammar: Optional[str] = None
    mode: str = "exact"  # exact | bounded
    budget: int = 10_000
    cycle_detection: bool = True
    strategy: bool = False


class SolveResponse(Envelope):
    verdict: Optional[str] = None  # WIN | LOSE | UNKNOWN
    strategy: Optional[List[Dict[str, Any]]] = None


class NormalizeRequest(BaseModel):
    term: str
    objective: DfaInput
    grammar: Optional[str] = None
    prune: bool = False
    max_nodes: Optional[int] = None
    stats: bool = False


class NormalizeResponse(Envelope):
    normal_form: Optional[str] = None
    wins: Optional[bool] = None
    stats: Optional[Dict[int, int]] = None


class PreorderRequest(BaseModel):
    left: str
    right: str
    objective: DfaInput
    grammar: Optional[str] = None
    method: str = "auto"  # auto | rightsep | char | enum
    equivalence: bool = False
    witness: bool = False
    max_nodes: Optional[int] = None
    max_contexts: Optional[int] = None


class PreorderResponse(Envelope):
    holds: Optional[bool] = None
    method: Optional[str] = None
    witness: Optional[str] = None


class MonoidRequest(BaseModel):
    objective: DfaInput
    list_classes: bool = True
    class_cap: Optional[int] = None


class MonoidClassInfo(BaseModel):
    id: int
    representative: str
    is_zero: bool = False
    is_identity: bool = False
    wins: bool = False


class MonoidResponse(Envelope):
    count: Optional[int] = None
    right_separating: Optional[bool] = None
    classes: Optional[List[MonoidClassInfo]] = None


class EncodeRequest(BaseModel):
    kind: str  # inclusion | simulation | iig | pushdown | hyper | mcvp
    payload: Dict[str, Any]


class EncodeResponse(Envelope):
    term: Optional[str] = None
    grammar: Optional[str] = None
    dfa: Optional[Dict[str, Any]] = None
    meta: Optional[Dict[str, Any]] = None


class SummariesRequest(BaseModel):
    pds: Dict[str, Any]
    observation: Optional[DfaInput] = None


class SummaryEntry(BaseModel):
    nonterminal: str
    options: List[List[List[str]]]  # per option: list of (entry, class rep, exit)


class SummariesResponse(Envelope):
    summaries: Optional[List[SummaryEntry]] = None


class SelftestRequest(BaseModel):
    suites: Optional[List[str]] = None
    cases: int = 100
    seed: int = 0


class SuiteResult(BaseModel):
    name: str
    cases: int
    failures: int
    examples: List[str] = Field(default_factory=list)


class SelftestResponse(Envelope):
    suites: Optional[List[SuiteResult]] = None
