"""FastAPI service exposing the solver, normalizer, decider, and encoders."""

from __future__ import annotations

import functools
from typing import Optional

from fastapi import FastAPI

from .. import __version__
from ..arena import solve_bounded, solve_exact
from ..decision import Caps, PreorderDecider
from ..dfa import Dfa, builtin_dfa, dfa_from_json
from ..encoders import (
    circuit_from_json,
    encode_hyper,
    encode_imperfect_info,
    encode_inclusion,
    encode_mcvp,
    encode_pushdown,
    encode_simulation,
    extract_summaries,
    hyper_from_json,
    nfa_from_json,
    pds_from_json,
)
from ..errors import AlphabetError, GrammarError, ParseError, ResourceLimitError
from ..monoid import DEFAULT_CLASS_CAP, build_monoid
from ..normalform import DEFAULT_NODE_CAP, NfAlgebra
from ..selftest import run_selftest
from ..syntax import parse_grammar, parse_term, print_grammar, print_term
from ..terms import Grammar, WORD_ERR, is_word_term, max_choice_urgency, term_size, urgency_of
from . import models as m

app = FastAPI(title="urgency", version=__version__)


def _load_grammar(text: Optional[str], *terms_in_scope, floor: int = 1) -> Grammar:
    """Parse the grammar, or derive one from the urgencies the terms use."""
    if text:
        return parse_grammar(text)
    needed = max([floor] + [max_choice_urgency(t) for t in terms_in_scope])
    return Grammar.empty(needed)


def _load_dfa(spec: m.DfaInput) -> Dfa:
    if spec.builtin:
        return builtin_dfa(spec.builtin)
    if spec.dfa is None:
        raise ParseError("an objective needs either an inline automaton or a builtin spec")
    return dfa_from_json(spec.dfa)


def _guarded(response_type):
    """Wrap an endpoint body so domain errors land in the response envelope."""

    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except ResourceLimitError as exc:
                return response_type(
                    ok=False,
                    error=m.ErrorInfo(
                        kind="resource-limit",
                        message=str(exc),
                        limit=exc.limit,
                        needed=int(min(exc.needed, 10**15)),
                    ),
                )
            except ParseError as exc:
                return response_type(ok=False, error=m.ErrorInfo(kind="parse", message=str(exc)))
            except AlphabetError as exc:
                return response_type(ok=False, error=m.ErrorInfo(kind="alphabet", message=str(exc)))
            except GrammarError as exc:
                return response_type(ok=False, error=m.ErrorInfo(kind="grammar", message=str(exc)))

        return wrapper

    return decorate


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/parse", response_model=m.ParseResponse)
@_guarded(m.ParseResponse)
def parse(req: m.ParseRequest):
    t = parse_term(req.term)
    g = _load_grammar(req.grammar, t, floor=req.max_urgency or 1)
    n = req.max_urgency or g.max_urgency
    g.validate_term(t)
    return m.ParseResponse(
        canonical=print_term(t),
        size=term_size(t),
        urgency=urgency_of(t, n),
        word_term=is_word_term(t),
    )


@app.post("/solve", response_model=m.SolveResponse)
@_guarded(m.SolveResponse)
def solve(req: m.SolveRequest):
    t = parse_term(req.term)
    o = _load_dfa(req.objective)
    g = _load_grammar(req.grammar, t)
    g.validate_term(t)
    if req.mode == "exact":
        verdict = solve_exact(g, t, o)
    elif req.mode == "bounded":
        verdict = solve_bounded(g, t, o, req.budget, req.cycle_detection)
    else:
        raise ParseError(f"unknown solve mode {req.mode!r}")
    strategy = None
    if req.strategy and verdict.strategy is not None:
        strategy = [
            {"position": print_term(pos), "move": print_term(succ)}
            for pos, succ in sorted(
                verdict.strategy.items(), key=lambda kv: print_term(kv[0])
            )
        ]
    return m.SolveResponse(verdict=verdict.status.value, strategy=strategy)


@app.post("/normalize", response_model=m.NormalizeResponse)
@_guarded(m.NormalizeResponse)
def normalize(req: m.NormalizeRequest):
    t = parse_term(req.term)
    o = _load_dfa(req.objective)
    g = _load_grammar(req.grammar, t)
    g.validate_term(t)
    algebra = NfAlgebra(
        build_monoid(o),
        g.max_urgency,
        max_nodes=req.max_nodes or DEFAULT_NODE_CAP,
        prune=req.prune,
    )
    nf = algebra.normalize(g, t)
    return m.NormalizeResponse(
        normal_form=algebra.render_text(nf),
        wins=algebra.wins(nf),
        stats=algebra.level_stats(nf) if req.stats else None,
    )


@app.post("/preorder", response_model=m.PreorderResponse)
@_guarded(m.PreorderResponse)
def preorder(req: m.PreorderRequest):
    left = parse_term(req.left)
    right = parse_term(req.right)
    o = _load_dfa(req.objective)
    g = _load_grammar(req.grammar, left, right)
    g.validate_term(left)
    g.validate_term(right)
    caps = Caps()
    if req.max_nodes:
        caps.nf_nodes = req.max_nodes
    if req.max_contexts:
        caps.contexts = req.max_contexts
    decider = PreorderDecider(g, o, caps)
    if req.equivalence:
        outcome = decider.decide_equiv(left, right, req.method, req.witness)
    else:
        outcome = decider.decide(left, right, req.method, req.witness)
    witness = print_term(outcome.witness) if outcome.witness is not None else None
    return m.PreorderResponse(holds=outcome.holds, method=outcome.method, witness=witness)


@app.post("/monoid", response_model=m.MonoidResponse)
@_guarded(m.MonoidResponse)
def monoid(req: m.MonoidRequest):
    o = _load_dfa(req.objective)
    syn = build_monoid(o, req.class_cap or DEFAULT_CLASS_CAP)
    classes = None
    if req.list_classes:
        classes = []
        for cls in syn.class_ids:
            rep = syn.representative(cls)
            classes.append(
                m.MonoidClassInfo(
                    id=cls,
                    representative="err" if rep == WORD_ERR else ".".join(rep) or "skip",
                    is_zero=cls == syn.zero,
                    is_identity=cls == syn.identity,
                    wins=syn.class_wins(cls),
                )
            )
    return m.MonoidResponse(
        count=len(syn),
        right_separating=syn.is_right_separating(),
        classes=classes,
    )


@app.post("/encode", response_model=m.EncodeResponse)
@_guarded(m.EncodeResponse)
def encode(req: m.EncodeRequest):
    kind = req.kind
    payload = req.payload
    if kind == "inclusion":
        game = encode_inclusion(nfa_from_json(payload["a"]), nfa_from_json(payload["b"]))
    elif kind == "simulation":
        game = encode_simulation(nfa_from_json(payload["a"]), nfa_from_json(payload["b"]))
    elif kind == "iig":
        nfa = nfa_from_json(payload["nfa"])
        hd = {str(k): str(v) for k, v in payload["hd"].items()}
        game = encode_imperfect_info(nfa, hd)
    elif kind == "pushdown":
        observation = _load_dfa(m.DfaInput(**payload["observation"])) if payload.get("observation") else None
        game = encode_pushdown(pds_from_json(payload["pds"]), observation)
    elif kind == "hyper":
        game = encode_hyper(hyper_from_json(payload))
    elif kind == "mcvp":
        game = encode_mcvp(circuit_from_json(payload))
    else:
        raise ParseError(f"unknown encoder {kind!r}")
    return m.EncodeResponse(
        term=print_term(game.term),
        grammar=print_grammar(game.grammar),
        dfa=game.dfa.to_json(),
        meta={
            k: v
            for k, v in game.meta.items()
            if k not in ("state_decode", "obs_decode", "observation")
        },
    )


@app.post("/summaries", response_model=m.SummariesResponse)
@_guarded(m.SummariesResponse)
def summaries(req: m.SummariesRequest):
    pds = pds_from_json(req.pds)
    observation = _load_dfa(req.observation) if req.observation else None
    result = extract_summaries(pds, observation)
    entries = []
    for name in sorted(result):
        summary = result[name]
        options = []
        for option in summary.options:
            rows = []
            for (src, cls, dst) in sorted(option):
                rep = summary.class_representatives.get(cls, ())
                rep_text = "err" if rep == WORD_ERR else ".".join(rep) or "skip"
                rows.append([src, rep_text, dst])
            options.append(rows)
        entries.append(m.SummaryEntry(nonterminal=name, options=options))
    return m.SummariesResponse(summaries=entries)


@app.post("/selftest", response_model=m.SelftestResponse)
@_guarded(m.SelftestResponse)
def selftest(req: m.SelftestRequest):
    reports = run_selftest(suites=req.suites, cases=req.cases, seed=req.seed)
    return m.SelftestResponse(
        ok=all(r.ok for r in reports),
        suites=[
            m.SuiteResult(name=r.name, cases=r.cases, failures=r.failures, examples=r.examples)
            for r in reports
        ],
    )
