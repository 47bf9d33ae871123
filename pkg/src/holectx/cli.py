"""Command-line entry point: check, retrieve, complete, bench, serve.

Exit codes: 0 success, 1 usage error, 2 domain error (parse or check
failure, bad task), 3 client or transport error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .assistant.chatlsp import serve
from .assistant.clients import ClientError, make_client
from .assistant.loop import complete
from .bench import load_tasks, parse_configs, run_matrix, summarize, summary_json, verify_report
from .contextualizer import contextualize
from .prompt import EXPECTED_PREFIX, MissingGenerativeHole, PromptConfig, dump_transcript, serialize_headers, serialize_types
from .statics import check_repo
from .syntax.parser import ParseError
from .syntax.printer import print_type
from .syntax.repo import HoleNotFound, ManifestError, generative_hole, load_manifest, parse_manifest, substitute_hole

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_CLIENT = 0, 1, 2, 3


class Usage(Exception):
    pass


class Domain(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> Parser:
    p = Parser(prog="holectx", description="Typed-hole contextualization for LLM code completion.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="report static errors")
    c.add_argument("manifest")
    c.add_argument("--fill", metavar="FILE", help="substitute this fragment at the hole first")
    c.add_argument("--hole", type=int, help="hole to fill (default: the ?? hole)")

    r = sub.add_parser("retrieve", help="show the static context at a hole")
    r.add_argument("manifest")
    r.add_argument("--hole", type=int)
    r.add_argument("--types", action="store_true")
    r.add_argument("--headers", action="store_true")
    r.add_argument("--format", choices=("text", "json"), default="text")

    k = sub.add_parser("complete", help="fill the ?? hole with a model")
    k.add_argument("manifest")
    k.add_argument("--hole", type=int)
    _client_flags(k)
    k.add_argument("--types", action="store_true")
    k.add_argument("--headers", action="store_true")
    k.add_argument("--error-rounds", type=int, default=2)
    k.add_argument("--record", metavar="FILE", help="write the transcript as JSON-Lines")
    k.add_argument("--seed", type=int)

    b = sub.add_parser("bench", help="run the ablation matrix")
    b.add_argument("tasks_dir")
    b.add_argument("--trials", type=int, required=True)
    _client_flags(b)
    b.add_argument("--out", required=True, metavar="FILE")
    b.add_argument("--configs", default="all")
    b.add_argument("--seed", type=int)
    b.add_argument("--error-rounds", type=int, default=2)
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--json", metavar="FILE", help="also write the summary as JSON")

    sub.add_parser("serve", help="run the ChatLSP server on stdio")
    return p


def _client_flags(p):
    p.add_argument("--client", required=True, help="http, replay:FILE, or script:FILE")
    p.add_argument("--temperature", type=float, default=0.6)
    p.add_argument("--api-base", metavar="URL")
    p.add_argument("--model", default="gpt-4")


def _load(manifest_path: str):
    try:
        manifest = load_manifest(manifest_path)
        return manifest, parse_manifest(manifest)
    except FileNotFoundError as e:
        raise Domain(str(e)) from None
    except (ManifestError, ParseError, OSError) as e:
        raise Domain(str(e)) from None


def _hole(repo, requested: Optional[int]) -> int:
    if requested is not None:
        if requested not in {h.id for h in repo.holes()}:
            raise Domain(str(HoleNotFound(requested)))
        return requested
    gen = generative_hole(repo)
    if gen is None:
        raise Domain("the program has no '??' hole; pass --hole")
    return gen.id


def _config(args, types: bool, headers: bool) -> PromptConfig:
    try:
        return PromptConfig(include_types=types, include_headers=headers,
                            max_error_rounds=args.error_rounds, temperature=args.temperature)
    except ValueError as e:
        raise Usage(str(e)) from None


def _client(args):
    try:
        return make_client(args.client, args.api_base, args.model)
    except ValueError as e:
        raise Usage(str(e)) from None


def cmd_check(args) -> int:
    _, repo = _load(args.manifest)
    if args.fill:
        try:
            fragment = Path(args.fill).read_text(encoding="utf-8")
        except OSError as e:
            raise Domain(str(e)) from None
        try:
            repo = substitute_hole(repo, _hole(repo, args.hole), fragment.strip())
        except ParseError as e:
            print(f"SyntaxError at {e.span}: {e.message}")
            return EXIT_DOMAIN
    errors = check_repo(repo)[1]
    for e in errors:
        print(e)
    return EXIT_DOMAIN if errors else EXIT_OK


def cmd_retrieve(args) -> int:
    _, repo = _load(args.manifest)
    hole_id = _hole(repo, args.hole)
    typed, _ = check_repo(repo)
    r = contextualize(typed, hole_id)
    if args.format == "json":
        data = r.to_json()
        if not args.types:
            data["typeDefs"] = []
        if not args.headers:
            data["headers"] = []
        print(json.dumps(data, indent=2, ensure_ascii=False))
        return EXIT_OK
    sections = [EXPECTED_PREFIX + print_type(r.expected)]
    if args.types and r.types.entries:
        sections.append(serialize_types(r.types))
    if args.headers and r.headers:
        sections.append(serialize_headers(r.headers))
    print("\n\n".join(sections))
    return EXIT_OK


def cmd_complete(args) -> int:
    _, repo = _load(args.manifest)
    hole_id = _hole(repo, args.hole)
    cfg = _config(args, args.types, args.headers)
    client = _client(args)
    try:
        result = complete(repo, hole_id, cfg, client, seed=args.seed)
    except MissingGenerativeHole as e:
        raise Domain(str(e)) from None
    if args.record:
        Path(args.record).write_text(dump_transcript(result.transcript), encoding="utf-8")
    print(result.final_fragment)
    for e in result.final_errors:
        print(f"residual: {e}", file=sys.stderr)
    print(f"rounds: {result.rounds_used}, errors per round: {result.errors_per_round}", file=sys.stderr)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.trials < 1:
        raise Usage("--trials must be at least 1")
    try:
        configs = parse_configs(args.configs)
    except ValueError as e:
        raise Usage(str(e)) from None
    if not configs:
        raise Usage("no configurations selected")
    try:
        tasks = load_tasks(args.tasks_dir)
    except (OSError, ManifestError) as e:
        raise Domain(str(e)) from None
    if not tasks:
        raise Domain(f"no tasks found under {args.tasks_dir}")
    for t in tasks:
        problems = verify_report(t)
        if problems:
            raise Domain(f"task {t.name} is invalid: {problems[0]}")
    base = _config(args, False, False)
    client = _client(args)
    with open(args.out, "w", encoding="utf-8", newline="") as out:
        records = run_matrix(tasks, configs, args.trials, client, args.seed, out, base, args.workers)
    print(summarize(records), end="")
    if args.json:
        Path(args.json).write_text(summary_json(records) + "\n", encoding="utf-8")
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "retrieve": cmd_retrieve,
    "complete": cmd_complete,
    "bench": cmd_bench,
    "serve": lambda args: serve(),
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except Usage as e:
        print(f"holectx: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Domain as e:
        print(f"holectx: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except ClientError as e:
        print(f"holectx: client error: {e}", file=sys.stderr)
        return EXIT_CLIENT


if __name__ == "__main__":
    sys.exit(main())
