"""Command-line interface.

Thin client over the session engine: every subcommand delegates either to an
in-process file-backed session (default) or to a running service via
--server.  Data goes to stdout as JSON; diagnostics go to stderr.  Exit
codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import httpx

from .errors import SceneSplatError
from .scene_model.serialize import load_scenario, scenario_to_document

DEFAULT_SESSION_DIR = ".scenesplat-session"
SESSION_ENV = "SCENESPLAT_SESSION"


def _emit(doc) -> None:
    json.dump(doc, sys.stdout, indent=1)
    sys.stdout.write("\n")


class LocalBackend:
    """In-process engine over a file-backed session directory."""

    def __init__(self, session_dir: Path):
        from .service import engine as _engine
        from .service.config import load_engine_config
        from .service.session import SessionStore

        self.engine = _engine
        self.store = SessionStore(session_dir)
        self.config = load_engine_config()
        self._models = None

    @property
    def models(self):
        if self._models is None:
            from .service.models import default_models

            self._models = default_models(training=self.config.training,
                                          temperature=self.config.temperature)
        return self._models

    def load(self, path: str):
        scenario = load_scenario(path)
        return self.engine.do_load_scenario(self.store, scenario)

    def query(self, text: str, kind: str | None):
        return self.engine.do_query(
            self.store, self.models, self.config, text, kind
        )

    def edit(self, command: str):
        return self.engine.do_edit(
            self.store, self.models, self.config, command
        )

    def refine(self, bypass: bool):
        overrides = {"bypass": True} if bypass else {}
        return self.engine.do_refine(self.store, self.config, overrides=overrides)

    def undo(self):
        return {"version": self.store.undo()}

    def export(self, frame: int):
        return self.engine.do_export(self.store, frame)


class HttpBackend:
    """Pass-through to a running service."""

    def __init__(self, client: httpx.Client):
        self.client = client

    def _call(self, method: str, path: str, **kwargs):
        response = self.client.request(method, path, **kwargs)
        if response.status_code >= 400:
            try:
                body = response.json()
                message = body.get("message") or body.get("detail") or response.text
            except ValueError:
                message = response.text
            raise SceneSplatError(f"{response.status_code}: {message}")
        return response.json()

    def load(self, path: str):
        doc = scenario_to_document(load_scenario(path))
        return self._call("POST", "/load", json={"scenario": doc})

    def query(self, text: str, kind: str | None):
        return self._call(
            "POST", "/query", json={"text": text, "kind_hint": kind}
        )

    def edit(self, command: str):
        return self._call("POST", "/edit", json={"command": command})

    def refine(self, bypass: bool):
        return self._call("POST", "/refine", json={"bypass": bypass})

    def undo(self):
        return self._call("POST", "/undo", json={})

    def export(self, frame: int):
        return self._call("GET", "/export", params={"frame": frame})


def _backend(args) -> LocalBackend | HttpBackend:
    if args.server:
        return HttpBackend(httpx.Client(base_url=args.server, timeout=60.0))
    session_dir = Path(
        args.session or os.environ.get(SESSION_ENV, DEFAULT_SESSION_DIR)
    )
    return LocalBackend(session_dir)


def _run_bench(args) -> int:
    from .eval_harness import (
        BenchmarkReport,
        ambiguity_suite,
        conflict_suite,
        generate_corpus,
        render_tables,
        run_motion_benchmark,
        run_query_benchmark,
        run_task_benchmark,
        task_command_suite,
    )
    from .eval_harness.generate import SyntheticSpec
    from .service.config import load_engine_config
    from .service.models import default_models

    config = load_engine_config()
    report = BenchmarkReport()
    if args.suite == "querying":
        models = default_models(training=config.training,
                                temperature=config.temperature)
        cases = ambiguity_suite()
        if args.spec:
            spec_doc = json.loads(Path(args.spec).read_text(encoding="utf-8"))
            corpus = generate_corpus(SyntheticSpec(**spec_doc))
            from .eval_harness.benchmarks import QueryCase

            cases = cases + [
                QueryCase(item.scenario, item.caption, item.agent_id, item.kind)
                for item in corpus
            ]
        report.querying = run_query_benchmark(
            cases, models.query_models(), config.query
        )
    elif args.suite == "tasks":
        models = default_models(training=config.training,
                                temperature=config.temperature)
        report.tasks = run_task_benchmark(
            task_command_suite(),
            models.query_models(),
            models.asset_bank,
            config.refinement,
        )
    else:
        report.motion = run_motion_benchmark(conflict_suite(), config.refinement)

    if args.emit == "table":
        sys.stdout.write(render_tables(report))
    else:
        sys.stdout.write(report.serialize())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scenesplat",
        description="Driving-scenario editing engine",
    )
    parser.add_argument(
        "--session", help=f"session directory (default ${SESSION_ENV} or "
        f"{DEFAULT_SESSION_DIR})"
    )
    parser.add_argument(
        "--server", help="base URL of a running service (thin-client mode)"
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("load", help="load a scenario file as version 0")
    p.add_argument("file")

    p = sub.add_parser("query", help="resolve a free-text object query")
    p.add_argument("text")
    p.add_argument("--kind", choices=["vehicle", "pedestrian", "any"],
                   default=None)

    p = sub.add_parser("edit", help="apply an edit command")
    p.add_argument("command")
    p.add_argument("--llm", action="store_true",
                   help="treat the text as free language and translate it "
                        "through the configured bridge")

    p = sub.add_parser("refine", help="roll out refined trajectories")
    p.add_argument("--bypass", action="store_true")

    p = sub.add_parser("bench", help="run a benchmark suite")
    p.add_argument("suite", choices=["querying", "tasks", "motion"])
    p.add_argument("--spec", help="SyntheticSpec JSON file (querying only)")
    p.add_argument("--emit", choices=["json", "table"], default="json")

    p = sub.add_parser("export", help="export bird's-eye geometry at a frame")
    p.add_argument("--frame", type=int, default=0)

    p = sub.add_parser("undo", help="move the active version back by one")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8787)
    p.add_argument("--host", default="127.0.0.1")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    try:
        if args.subcommand == "bench":
            return _run_bench(args)
        if args.subcommand == "serve":
            import uvicorn

            from .service import create_app
            from .service.session import SessionStore

            session_dir = Path(
                args.session or os.environ.get(SESSION_ENV, DEFAULT_SESSION_DIR)
            )
            app = create_app(store=SessionStore(session_dir))
            uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
            return 0

        backend = _backend(args)
        if args.subcommand == "load":
            _emit(backend.load(args.file))
        elif args.subcommand == "query":
            _emit(backend.query(args.text, args.kind))
        elif args.subcommand == "edit":
            command = args.command
            if args.llm:
                from .edit_engine.command import format_command
                from .edit_engine.llm_bridge import translate_freeform

                command = format_command(translate_freeform(command))
                print(f"translated: {command}", file=sys.stderr)
            _emit(backend.edit(command))
        elif args.subcommand == "refine":
            _emit(backend.refine(args.bypass))
        elif args.subcommand == "undo":
            _emit(backend.undo())
        elif args.subcommand == "export":
            _emit(backend.export(args.frame))
        return 0
    except SceneSplatError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except (OSError, httpx.HTTPError) as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
