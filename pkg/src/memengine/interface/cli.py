"""Command-line entry points: init, ingest, query, eval, audit, stats, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from ..core.config import ConfigError, EngineConfig, config_from_dict
from ..evaluation.harness import qa_from_jsonl, run_eval
from ..ingest.events import EventError
from ..orchestrator.engine import MemoryEngine
from ..storage.audit import audit_store
from ..storage.hot import StorageError
from .service import RESPONSE_VERSION

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2

ABLATE_CHOICES = ("disable_bm25", "disable_pyramid", "disable_graph",
                  "disable_summarization")


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here reserves 2 for
    runtime failures, so usage problems remap to 1."""

    def error(self, message: str) -> Any:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args: argparse.Namespace, payload: dict[str, Any]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
        return
    for key, value in payload.items():
        if isinstance(value, dict):
            print(f"{key}:")
            for sub, val in value.items():
                print(f"  {sub}: {val}")
        else:
            print(f"{key}: {value}")


def _cmd_init(args: argparse.Namespace) -> int:
    cfg = EngineConfig()
    if args.config:
        with open(args.config, encoding="utf-8") as handle:
            cfg = config_from_dict(json.load(handle))
    engine = MemoryEngine.create(args.store, cfg)
    engine.close()
    _emit(args, {"store": str(args.store), "initialized": True})
    return EXIT_OK


def _cmd_ingest(args: argparse.Namespace) -> int:
    overrides = {"disable_graph": True} if args.no_graph else None
    with MemoryEngine.open(args.store, overrides=overrides) as engine:
        stats = engine.ingest_jsonl(args.input)
        commit = engine.commit()
    payload = stats.to_dict()
    payload.update(commit)
    _emit(args, payload)
    return EXIT_OK


def _cmd_query(args: argparse.Namespace) -> int:
    traces: list[dict[str, Any]] = []
    sink = traces.append if args.trace else None
    with MemoryEngine.open(args.store, writer=False,
                           trace_sink=sink) as engine:
        overrides: dict[str, Any] = {}
        if args.top_k is not None:
            overrides["top_k_override"] = args.top_k
        if args.budget is not None:
            overrides["budget_B_tokens"] = args.budget
        cfg = engine.cfg.replace(**overrides) if overrides else None
        answer = engine.answer_question(args.question, cfg=cfg)
    payload = answer.to_dict()
    payload["version"] = RESPONSE_VERSION
    if args.trace:
        payload["trace"] = traces[0] if traces else None
    _emit(args, payload)
    return EXIT_OK


def _cmd_eval(args: argparse.Namespace) -> int:
    overrides = {flag: True for flag in args.ablate or []}
    with MemoryEngine.open(args.store, writer=False,
                           overrides=overrides or None) as engine:
        items = qa_from_jsonl(args.qa)
        report = run_eval(engine, items, workers=args.workers,
                          partition_by=args.partition_by,
                          report_path=args.report)
    payload = {
        "overall": report["overall"],
        "hit_rate": report["hit_rate"],
        "failures": report["failures"],
        "throughput": report["throughput"],
    }
    if args.report:
        payload["report"] = str(args.report)
    _emit(args, payload)
    return EXIT_OK


def _cmd_audit(args: argparse.Namespace) -> int:
    report = audit_store(args.store)
    _emit(args, report.to_dict())
    return EXIT_OK if report.ok else EXIT_RUNTIME


def _cmd_stats(args: argparse.Namespace) -> int:
    with MemoryEngine.open(args.store, writer=False) as engine:
        _emit(args, engine.stats())
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    host, _, port = args.addr.rpartition(":")
    if not host or not port.isdigit():
        raise EventError(f"bad --addr {args.addr!r}, expected HOST:PORT")
    app = create_app(args.store)
    uvicorn.run(app, host=host, port=int(port), log_level="warning")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="memengine",
                     description="Lifelong multimodal memory engine")
    parser.add_argument("--json", action="store_true",
                        help="emit machine-readable JSON on stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p_init = sub.add_parser("init", help="create an empty store")
    p_init.add_argument("--store", required=True)
    p_init.add_argument("--config", help="JSON config file")
    p_init.set_defaults(func=_cmd_init)

    p_ingest = sub.add_parser("ingest", help="ingest an events JSONL file")
    p_ingest.add_argument("--store", required=True)
    p_ingest.add_argument("--input", required=True)
    p_ingest.add_argument("--no-graph", action="store_true")
    p_ingest.set_defaults(func=_cmd_ingest)

    p_query = sub.add_parser("query", help="answer one question")
    p_query.add_argument("--store", required=True)
    p_query.add_argument("--question", required=True)
    p_query.add_argument("--top-k", type=int, dest="top_k")
    p_query.add_argument("--budget", type=int)
    p_query.add_argument("--trace", action="store_true")
    p_query.set_defaults(func=_cmd_query)

    p_eval = sub.add_parser("eval", help="run a QA file and score it")
    p_eval.add_argument("--store", required=True)
    p_eval.add_argument("--qa", required=True)
    p_eval.add_argument("--workers", type=int, default=1)
    p_eval.add_argument("--report")
    p_eval.add_argument("--ablate", action="append", default=None,
                        choices=ABLATE_CHOICES)
    p_eval.add_argument("--partition-by", choices=("conversation_id",),
                        dest="partition_by",
                        help="answer each question against only its own "
                             "conversation's memories")
    p_eval.set_defaults(func=_cmd_eval)

    p_audit = sub.add_parser("audit", help="check store integrity")
    p_audit.add_argument("--store", required=True)
    p_audit.set_defaults(func=_cmd_audit)

    p_stats = sub.add_parser("stats", help="store counters")
    p_stats.add_argument("--store", required=True)
    p_stats.set_defaults(func=_cmd_stats)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--store", required=True)
    p_serve.add_argument("--addr", default="127.0.0.1:8080")
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (StorageError, ConfigError, EventError, OSError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
