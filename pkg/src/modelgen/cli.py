"""Command-line front end.

Exit codes are a stable contract: 0 ok, 1 no parse (lexical or syntactic),
2 model validation errors, 3 document syntax/schema errors, 4 I/O errors,
5 ambiguity or explicit-composition violations.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    AmbiguityError,
    DocumentSyntaxError,
    ExplicitViolationError,
    NoParseError,
    ScanError,
    SchemaError,
)
from .grammar import emit_bnf
from .instance import instance_to_dict
from .model import LanguageModel, load_model, validate_model
from .parser import enumerate_parses, require_unique
from .instance import instantiate
from .pipeline import Language
from .patterns import default_registry

EXIT_OK = 0
EXIT_NO_PARSE = 1
EXIT_MODEL_INVALID = 2
EXIT_DOCUMENT = 3
EXIT_IO = 4
EXIT_AMBIGUOUS = 5


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)


def _load(path: str) -> LanguageModel:
    try:
        return load_model(_read(path))
    except (DocumentSyntaxError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_DOCUMENT)


def _report_text(model: LanguageModel) -> tuple[str, bool]:
    report = validate_model(model)
    lines = []
    for issue in report.errors:
        lines.append(f"error {issue.code} at {issue.path}: {issue.message}")
    for issue in report.warnings:
        lines.append(f"warning {issue.code} at {issue.path}: {issue.message}")
    lines.append(f"{len(report.errors)} errors, {len(report.warnings)} warnings")
    return "\n".join(lines) + "\n", report.ok


def run_check(model_path: str) -> int:
    model = _load(model_path)
    text, ok = _report_text(model)
    sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_MODEL_INVALID


def run_grammar(model_path: str) -> int:
    model = _load(model_path)
    text, ok = _report_text(model)
    if not ok:
        sys.stderr.write(text)
        return EXIT_MODEL_INVALID
    language = Language.build(model, default_registry())
    sys.stdout.write(emit_bnf(language.grammar))
    return EXIT_OK


def _dump_tokens(graph) -> None:
    payload = {
        "start_offset": graph.start_offset,
        "candidates": [
            {"type": c.type, "start": c.start, "end": c.end, "text": c.text}
            for c in sorted(graph.candidates, key=lambda c: (c.start, c.end, c.type))
        ],
        "accepting": sorted(
            [[c.start, c.end, c.type] for c in graph.accepting]),
    }
    print(json.dumps(payload, indent=2), file=sys.stderr)


def _dump_forest(forest) -> None:
    index: dict[int, int] = {}
    nodes = []

    def number(node) -> int:
        if id(node) in index:
            return index[id(node)]
        n = len(nodes)
        index[id(node)] = n
        nodes.append(node)
        for _p, children in node.alts:
            for c in children:
                if hasattr(c, "alts"):
                    number(c)
        return n

    payload: dict = {"root": None, "nodes": []}
    if forest.root is not None:
        payload["root"] = number(forest.root)
        payload["nodes"] = [
            {
                "symbol": node.symbol.text,
                "span": [node.start, node.end],
                "alternatives": [
                    {
                        "production": p.index,
                        "children": [
                            {"node": index[id(c)]} if hasattr(c, "alts")
                            else {"token": [c.start, c.end, c.type]}
                            for c in children
                        ],
                    }
                    for p, children in node.alts
                ],
            }
            for node in nodes
        ]
    print(json.dumps(payload, indent=2), file=sys.stderr)


def run_parse(model_path: str, input_path: str, *, all_parses: bool = False,
              limit: int = 16, dump_tokens: bool = False, dump_forest: bool = False,
              output: str | None = None) -> int:
    model = _load(model_path)
    text, ok = _report_text(model)
    if not ok:
        sys.stderr.write(text)
        return EXIT_MODEL_INVALID
    language = Language.build(model, default_registry())
    source = _read(input_path)
    try:
        graph = language.tokenize(source)
        if dump_tokens:
            _dump_tokens(graph)
        from .parser import parse as _parse, disambiguate_composition, filter_priority

        forest = _parse(language.grammar, graph)
        forest = disambiguate_composition(forest, model)
        forest = filter_priority(forest, model)
        if dump_forest:
            _dump_forest(forest)
        if all_parses:
            result = enumerate_parses(forest, limit)
            instances = [instance_to_dict(instantiate(t, model)) for t in result.trees]
            payload = {
                "total": result.total,
                "overflow": result.overflow,
                "instances": instances,
            }
        else:
            tree = require_unique(forest)
            payload = instance_to_dict(instantiate(tree, model))
    except ScanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_PARSE
    except NoParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_PARSE
    except (AmbiguityError, ExplicitViolationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    rendered = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if output is None:
        sys.stdout.write(rendered)
    else:
        try:
            with open(output, "w", encoding="utf-8") as fh:
                fh.write(rendered)
        except OSError as exc:
            print(f"error: cannot write {output}: {exc}", file=sys.stderr)
            return EXIT_IO
    return EXIT_OK


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modelgen",
                                 description="Model-based parser generator")
    sub = ap.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="validate a model document")
    p_check.add_argument("model")

    p_grammar = sub.add_parser("grammar", help="emit the synthesized grammar as BNF")
    p_grammar.add_argument("model")

    p_parse = sub.add_parser("parse", help="parse an input file against a model")
    p_parse.add_argument("model")
    p_parse.add_argument("input")
    mode = p_parse.add_mutually_exclusive_group()
    mode.add_argument("--all-parses", action="store_true",
                      help="emit up to --limit instances plus the total count")
    mode.add_argument("--require-unique", action="store_true",
                      help="require exactly one surviving parse (default)")
    p_parse.add_argument("--limit", type=int, default=16)
    p_parse.add_argument("--dump-tokens", action="store_true",
                         help="dump the token graph as JSON to stderr")
    p_parse.add_argument("--dump-forest", action="store_true",
                         help="dump the packed forest as JSON to stderr")
    p_parse.add_argument("-o", "--output", default=None)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        if args.command == "check":
            return run_check(args.model)
        if args.command == "grammar":
            return run_grammar(args.model)
        if args.command == "parse":
            if args.limit < 1:
                print("error: --limit must be positive", file=sys.stderr)
                return EXIT_IO
            return run_parse(args.model, args.input, all_parses=args.all_parses,
                             limit=args.limit, dump_tokens=args.dump_tokens,
                             dump_forest=args.dump_forest, output=args.output)
        raise AssertionError(args.command)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
