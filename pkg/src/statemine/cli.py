"""Command-line entry point.

    statemine extract PATH... [--metamodel FILE] [--format json|dot|text]
                              [--out FILE] [--dedupe] [--strict]
    statemine gen-plan --metamodel FILE --target KIND [--collect K1,K2]
                       [--format json|dot]
    statemine parse FILE [--format json|java]
    statemine validate [--metamodel FILE] [MODEL.json]

Exit codes: 0 success, 1 usage error, 2 parse or validation error,
3 no class named ``State`` (extraction terminated).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import emit
from .diagnostics import Diagnostic
from .extractor import ExtractionError, extract
from .hotgen import generate_plan, render_plan_dot, render_plan_json
from .java import LexError, ParseError, SourceUnit, collect_sources, load_sources, print_unit
from .metamodel import MetamodelError, augment_opposites, read_metamodel, shipped_metamodel, validate_metamodel
from .model import ModelError, check_conformance, load_model, save_model

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NO_STATE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _color() -> bool:
    return os.environ.get("STATEMINE_NO_COLOR") != "1" and sys.stderr.isatty()


def report(diags: Sequence[Diagnostic | str]) -> None:
    color = _color()
    for d in diags:
        text = str(d)
        if color:
            text = text.replace(": warning:", ": \033[33mwarning\033[0m:", 1)
            text = text.replace(": error:", ": \033[31merror\033[0m:", 1)
            if text.startswith("warning:"):
                text = "\033[33mwarning\033[0m:" + text[len("warning:"):]
            elif text.startswith("error:"):
                text = "\033[31merror\033[0m:" + text[len("error:"):]
        print(text, file=sys.stderr)


def write_output(text: str, out: Optional[str]) -> None:
    data = text.encode("utf-8")
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.flush()
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()


def _metamodel(path: Optional[str]):
    return read_metamodel(path) if path else shipped_metamodel()


def cmd_extract(args) -> int:
    units = collect_sources(args.paths)
    m, diags = load_sources(units, _metamodel(args.metamodel), strict=args.strict)
    report(diags)
    x = extract(m, dedupe=args.dedupe)
    report(x.warnings)
    if args.format == "json":
        text = emit.render_json(x)
    elif args.format == "dot":
        text = emit.render_dot(x.machine) if x.machine else "digraph statemachine {\n}\n"
    else:
        text = emit.render_text(x.machine)
    write_output(text, args.out)
    return EXIT_OK if x.machine is not None else EXIT_NO_STATE


def cmd_gen_plan(args) -> int:
    mm = augment_opposites(read_metamodel(args.metamodel))
    collect = [k for k in (args.collect or "").split(",") if k]
    plan = generate_plan(mm, args.target, collect)
    text = render_plan_dot(plan) if args.format == "dot" else render_plan_json(plan)
    write_output(text, args.out)
    return EXIT_OK


def cmd_parse(args) -> int:
    path = Path(args.file)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {args.file}")
    unit = SourceUnit(path.name, path.read_text(encoding="utf-8"))
    m, diags = load_sources([unit], _metamodel(args.metamodel), strict=args.strict)
    report(diags)
    text = print_unit(m, unit.root) if args.format == "java" else save_model(m)
    write_output(text, args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    mm = _metamodel(args.metamodel)
    problems: list[str | Diagnostic] = list(validate_metamodel(mm))
    if not problems and args.model:
        model = load_model(Path(args.model).read_text(encoding="utf-8"), mm)
        problems.extend(check_conformance(model))
    report(problems)
    if problems:
        return EXIT_INPUT
    print("ok")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="statemine", description="Extract state machines from Java sources.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ex = sub.add_parser("extract", help="extract a state machine from .java files")
    ex.add_argument("paths", nargs="+", help=".java files or directories")
    ex.add_argument("--metamodel", help="Java metamodel file (default: bundled subset)")
    ex.add_argument("--format", choices=("json", "dot", "text"), default="json")
    ex.add_argument("--out", help="write output to FILE instead of stdout")
    ex.add_argument("--dedupe", action="store_true", help="merge identical transitions")
    ex.add_argument("--strict", action="store_true", help="unsupported constructs are errors")
    ex.set_defaults(func=cmd_extract)

    gp = sub.add_parser("gen-plan", help="generate an owner-search plan from a metamodel")
    gp.add_argument("--metamodel", required=True)
    gp.add_argument("--target", required=True, help="kind whose nearest instance is searched")
    gp.add_argument("--collect", help="comma-separated kinds collected along the way")
    gp.add_argument("--format", choices=("json", "dot"), default="json")
    gp.add_argument("--out")
    gp.set_defaults(func=cmd_gen_plan)

    pa = sub.add_parser("parse", help="dump the syntax-graph model of one file")
    pa.add_argument("file")
    pa.add_argument("--format", choices=("json", "java"), default="json")
    pa.add_argument("--metamodel")
    pa.add_argument("--strict", action="store_true")
    pa.add_argument("--out")
    pa.set_defaults(func=cmd_parse)

    va = sub.add_parser("validate", help="check a metamodel and optionally a model against it")
    va.add_argument("model", nargs="?")
    va.add_argument("--metamodel")
    va.set_defaults(func=cmd_validate)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (LexError, ParseError, MetamodelError, ModelError, ExtractionError, FileNotFoundError) as exc:
        report([f"error: {exc}"])
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
