"""Command-line client for the urgency service.

The CLI never computes anything itself: it reads input files, sends
requests to the HTTP service (an in-process instance by default, a remote
one with --server), and maps the response onto the exit-code contract:

    0  success; for boolean queries the answer is true / WIN
    1  boolean answer false / LOSE
    2  usage or input error
    3  a resource cap was exceeded

File arguments containing a term may also be given inline; arguments
naming an objective accept a JSON file or a built-in spec such as
'terminate:a,b' or 'reach:#:a,b' or 'words:a.b|c:a,b,c'.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import httpx

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

ERROR_EXIT_CODES = {
    "parse": EXIT_USAGE,
    "grammar": EXIT_USAGE,
    "alphabet": EXIT_USAGE,
    "resource-limit": EXIT_RESOURCE,
}


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # The synchronous ASGI wrapper doubles as the in-process transport.
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service.app import app

    return TestClient(app)


def _read_maybe_file(arg: str) -> str:
    path = Path(arg)
    if path.is_file():
        return path.read_text()
    return arg


def _objective_input(arg: str) -> dict:
    path = Path(arg)
    if path.is_file():
        return {"dfa": json.loads(path.read_text())}
    if ":" in arg:
        return {"builtin": arg}
    raise SystemExit(f"objective {arg!r}: no such file and not a builtin spec")


def _grammar_text(arg: str | None) -> str | None:
    if arg in (None, "-"):
        return None
    return _read_maybe_file(arg)


def _emit(payload: dict, as_json: bool, lines) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _fail(payload: dict, as_json: bool) -> int:
    error = payload.get("error") or {"kind": "internal", "message": "unknown error"}
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True), file=sys.stderr)
    else:
        print(f"error ({error['kind']}): {error['message']}", file=sys.stderr)
    return ERROR_EXIT_CODES.get(error["kind"], EXIT_USAGE)


def _post(args, path: str, body: dict) -> dict:
    with _client(args.server) as client:
        response = client.post(path, json=body)
        if response.status_code != 200:
            raise SystemExit(f"service error {response.status_code}: {response.text}")
        return response.json()


def _default_max_nodes() -> int | None:
    value = os.environ.get("URGENCY_MAX_NODES")
    return int(value) if value else None


def cmd_parse(args) -> int:
    payload = _post(args, "/parse", {
        "term": _read_maybe_file(args.term),
        "grammar": _grammar_text(args.grammar),
        "max_urgency": args.max_urgency,
    })
    if not payload["ok"]:
        return _fail(payload, args.json)
    _emit(payload, args.json, [
        payload["canonical"],
        f"size {payload['size']}, urgency {payload['urgency']}, word term: {payload['word_term']}",
    ])
    return EXIT_OK


def cmd_solve(args) -> int:
    body = {
        "term": _read_maybe_file(args.term),
        "objective": _objective_input(args.dfa),
        "grammar": _grammar_text(args.grammar),
        "mode": "bounded" if args.budget is not None else "exact",
        "budget": args.budget or 10_000,
        "cycle_detection": not args.no_cycle_detection,
        "strategy": args.strategy is not None,
    }
    payload = _post(args, "/solve", body)
    if not payload["ok"]:
        return _fail(payload, args.json)
    if args.strategy and payload.get("strategy") is not None:
        Path(args.strategy).write_text(json.dumps(payload["strategy"], indent=2))
    _emit(payload, args.json, [payload["verdict"]])
    return EXIT_FALSE if payload["verdict"] == "LOSE" else EXIT_OK


def cmd_normalize(args) -> int:
    payload = _post(args, "/normalize", {
        "term": _read_maybe_file(args.term),
        "objective": _objective_input(args.dfa),
        "grammar": _grammar_text(args.grammar),
        "prune": args.prune,
        "max_nodes": args.max_nodes or _default_max_nodes(),
        "stats": args.stats,
    })
    if not payload["ok"]:
        return _fail(payload, args.json)
    lines = [payload["normal_form"], f"winner: {'WIN' if payload['wins'] else 'LOSE'}"]
    if args.stats and payload.get("stats"):
        for level in sorted(payload["stats"], key=int):
            lines.append(f"level {level}: {payload['stats'][level]} nodes")
    _emit(payload, args.json, lines)
    return EXIT_OK


def _preorder_common(args, equivalence: bool) -> int:
    payload = _post(args, "/preorder", {
        "left": _read_maybe_file(args.left),
        "right": _read_maybe_file(args.right),
        "objective": _objective_input(args.dfa),
        "grammar": _grammar_text(args.grammar),
        "method": args.method,
        "equivalence": equivalence,
        "witness": args.witness,
        "max_nodes": _default_max_nodes(),
        "max_contexts": args.max_contexts,
    })
    if not payload["ok"]:
        return _fail(payload, args.json)
    lines = [f"{'true' if payload['holds'] else 'false'}  (method: {payload['method']})"]
    if payload.get("witness"):
        lines.append(f"separating context: {payload['witness']}")
    _emit(payload, args.json, lines)
    return EXIT_OK if payload["holds"] else EXIT_FALSE


def cmd_preorder(args) -> int:
    return _preorder_common(args, equivalence=False)


def cmd_equiv(args) -> int:
    return _preorder_common(args, equivalence=True)


def cmd_monoid(args) -> int:
    payload = _post(args, "/monoid", {
        "objective": _objective_input(args.dfa),
        "list_classes": args.list,
        "class_cap": args.class_cap,
    })
    if not payload["ok"]:
        return _fail(payload, args.json)
    lines = [
        f"{payload['count']} classes, right-separating: {payload['right_separating']}",
    ]
    if args.list and payload.get("classes"):
        for info in payload["classes"]:
            tags = []
            if info["is_identity"]:
                tags.append("identity")
            if info["is_zero"]:
                tags.append("zero")
            if info["wins"]:
                tags.append("in objective")
            suffix = f"  [{', '.join(tags)}]" if tags else ""
            lines.append(f"  [{info['id']}] {info['representative']}{suffix}")
    _emit(payload, args.json, lines)
    return EXIT_OK


def cmd_encode(args) -> int:
    payload_in = json.loads(Path(args.input).read_text())
    payload = _post(args, "/encode", {"kind": args.kind, "payload": payload_in})
    if not payload["ok"]:
        return _fail(payload, args.json)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    (out / "start.term").write_text(payload["term"] + "\n")
    (out / "grammar.gram").write_text(payload["grammar"])
    (out / "objective.dfa.json").write_text(json.dumps(payload["dfa"], indent=2, sort_keys=True))
    (out / "meta.json").write_text(json.dumps(
        {"schema_version": payload["schema_version"], "kind": args.kind, **(payload.get("meta") or {})},
        indent=2, sort_keys=True,
    ))
    _emit(payload, args.json, [f"wrote {out}/start.term, grammar.gram, objective.dfa.json, meta.json"])
    return EXIT_OK


def cmd_summaries(args) -> int:
    body = {"pds": json.loads(Path(args.pds).read_text())}
    if args.observation:
        body["observation"] = _objective_input(args.observation)
    payload = _post(args, "/summaries", body)
    if not payload["ok"]:
        return _fail(payload, args.json)
    lines = []
    for entry in payload["summaries"]:
        lines.append(entry["nonterminal"])
        for i, option in enumerate(entry["options"]):
            rows = ", ".join(f"({src}, [{rep}], {dst})" for src, rep, dst in option)
            lines.append(f"  option {i}: {{{rows}}}")
    _emit(payload, args.json, lines)
    return EXIT_OK


def cmd_selftest(args) -> int:
    payload = _post(args, "/selftest", {
        "suites": args.suite or None,
        "cases": args.cases,
        "seed": args.seed,
    })
    if not payload["ok"] and payload.get("error"):
        return _fail(payload, args.json)
    lines = []
    for suite in payload["suites"]:
        status = "ok" if suite["failures"] == 0 else "FAIL"
        lines.append(f"{suite['name']}: {suite['cases']} cases, {suite['failures']} failures [{status}]")
        for example in suite["examples"]:
            lines.append(f"    {example}")
    _emit(payload, args.json, lines)
    return EXIT_OK if payload["ok"] else EXIT_FALSE


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="urgency", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--server", help="base URL of a running service (default: in-process)")
    parser.add_argument("--format", dest="format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse and canonically print a term")
    p.add_argument("term")
    p.add_argument("--grammar")
    p.add_argument("--max-urgency", type=int)
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("solve", help="solve a game exactly or with a move budget")
    p.add_argument("term")
    p.add_argument("dfa")
    p.add_argument("--grammar")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true", default=True)
    group.add_argument("--budget", type=int)
    p.add_argument("--no-cycle-detection", action="store_true")
    p.add_argument("--strategy", metavar="OUT_JSON")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("normalize", help="compute the objective-specialized normal form")
    p.add_argument("term")
    p.add_argument("grammar", help="grammar file, or - for none")
    p.add_argument("dfa")
    p.add_argument("--prune", action="store_true")
    p.add_argument("--max-nodes", type=int)
    p.add_argument("--stats", action="store_true")
    p.set_defaults(fn=cmd_normalize)

    for name, fn in (("preorder", cmd_preorder), ("equiv", cmd_equiv)):
        p = sub.add_parser(name, help=f"decide the contextual {name}")
        p.add_argument("left")
        p.add_argument("right")
        p.add_argument("--grammar")
        p.add_argument("--dfa", required=True)
        p.add_argument("--method", choices=("auto", "rightsep", "char", "enum"), default="auto")
        p.add_argument("--witness", action="store_true")
        p.add_argument("--max-contexts", type=int)
        p.set_defaults(fn=fn)

    p = sub.add_parser("monoid", help="print the syntactic monoid of an objective")
    p.add_argument("dfa")
    p.add_argument("--list", action="store_true")
    p.add_argument("--class-cap", type=int)
    p.set_defaults(fn=cmd_monoid)

    p = sub.add_parser("encode", help="encode a verification problem as a game bundle")
    p.add_argument("kind", choices=("inclusion", "simulation", "iig", "pushdown", "hyper", "mcvp"))
    p.add_argument("input", help="problem description (JSON file)")
    p.add_argument("-o", "--output", required=True, help="bundle directory")
    p.set_defaults(fn=cmd_encode)

    p = sub.add_parser("summaries", help="procedure summaries of a pushdown game")
    p.add_argument("pds", help="pushdown description (JSON file)")
    p.add_argument("--observation", help="observation objective (JSON file or builtin)")
    p.set_defaults(fn=cmd_summaries)

    p = sub.add_parser("selftest", help="run the randomized self-checks")
    p.add_argument("--suite", action="append", choices=("axioms", "agreement"))
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_selftest)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    args.json = args.format == "json"
    try:
        return args.fn(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return EXIT_USAGE
        return exc.code if exc.code is not None else EXIT_OK
    except (json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
