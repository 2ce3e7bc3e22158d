"""Command-line front end.

    amr-intens FILE --mode int
    amr-intens --mode ext --entails premise.amr conclusion.amr --worlds 2 --individuals 3

Exit status: 0 on success, 1 when a graph has no translation, 2 on
unreadable or malformed Penman input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .amr import InvalidGraph, free
from .determiners import EXT, INT, DeterminerTable, load_table
from .evaluator import EnumerationBound, EvalError, entails
from .penman import NormalizationError, PenmanError, normalize_inverse_roles, parse, parse_batch, to_triples
from .scope import derive_reading
from .stlc import TypeMismatch, pretty, to_json
from .translate_ext import TranslationError, close_v1, translate_ext
from .translate_int import translate_int_closed

MODES = ("ext", "int", "scope-ext", "scope-int", "triples")
FORMATS = ("ascii", "json")


@dataclass
class RunConfig:
    mode: str = "int"
    input: Optional[str] = None  # path, or None / "-" for stdin
    format: str = "ascii"
    entails: Optional[Tuple[str, str]] = None
    worlds: int = 2
    individuals: int = 3
    actual: Optional[str] = None
    unicode: bool = False
    batch: bool = False
    determiners: Optional[DeterminerTable] = None
    stdin_text: Optional[str] = field(default=None, repr=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")
        if self.entails is not None and (len(self.entails) != 2 or self.mode == "triples"):
            raise ValueError("entailment needs two inputs and a translating mode")


def translate(graph, mode: str, determiners: DeterminerTable):
    if mode == "ext":
        return close_v1(translate_ext(graph), free(normalize_inverse_roles(graph)))
    if mode == "int":
        return translate_int_closed(graph)
    if mode == "scope-ext":
        return derive_reading(graph, EXT, determiners)
    if mode == "scope-int":
        return derive_reading(graph, INT, determiners)
    raise ValueError(mode)


def _read(path: Optional[str], config: RunConfig) -> str:
    if path is None or path == "-":
        return config.stdin_text if config.stdin_text is not None else sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _error(exc: Exception, config: RunConfig) -> Tuple[int, str, str]:
    code = 2 if isinstance(exc, (PenmanError, OSError)) else 1
    if config.format == "json":
        payload = {"error": type(exc).__name__, "message": str(exc)}
        span = getattr(exc, "span", None)
        if span is not None:
            payload["span"] = [span.start, span.end]
        var = getattr(exc, "var", None)
        if var is not None:
            payload["var"] = var
        return code, "", json.dumps(payload, sort_keys=True) + "\n"
    return code, "", f"error: {exc}\n"


def _formula_out(term, config: RunConfig):
    if config.format == "json":
        return {"formula": pretty(term), "type": str(term.type), "ast": to_json(term)}
    return pretty(term, unicode=config.unicode)


def run(config: RunConfig) -> Tuple[int, str, str]:
    """Execute one invocation; returns (exit status, stdout text, stderr text)."""
    dets = config.determiners or load_table()
    try:
        if config.entails:
            terms = [translate(parse(_read(p, config)), config.mode, dets) for p in config.entails]
            bound = EnumerationBound(config.worlds, config.individuals)
            verdict = entails(terms[0], terms[1], bound, actual=config.actual, determiners=dets)
            if config.format == "json":
                return 0, json.dumps(verdict.to_json(), sort_keys=True) + "\n", ""
            out = [str(verdict)]
            if verdict.counterexample is not None:
                out.append(f"actual world: {verdict.actual}")
                out.append(verdict.counterexample.dumps())
            return 0, "\n".join(out) + "\n", ""

        text = _read(config.input, config)
        graphs = parse_batch(text) if config.batch else [parse(text)]
        results = []
        for graph in graphs:
            if config.mode == "triples":
                triples = to_triples(graph)
                if config.format == "json":
                    results.append([list(t) for t in triples])
                else:
                    results.append("\n".join(str(t) for t in triples))
            else:
                results.append(_formula_out(translate(graph, config.mode, dets), config))
    except (PenmanError, TranslationError, InvalidGraph, NormalizationError, TypeMismatch, EvalError, OSError) as exc:
        return _error(exc, config)

    if config.format == "json":
        payload = results if config.batch else results[0]
        return 0, json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n", ""
    sep = "\n\n" if config.mode == "triples" else "\n"
    return 0, sep.join(results) + "\n", ""


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="amr-intens", description="Translate AMR graphs into lambda-calculus formulas.")
    p.add_argument("input", nargs="?", default="-", help="Penman file (default: standard input)")
    p.add_argument("--mode", choices=MODES, default="int")
    p.add_argument("--format", choices=FORMATS, default="ascii")
    p.add_argument("--entails", nargs=2, metavar=("PREMISE", "CONCLUSION"))
    p.add_argument("--worlds", type=int, default=2)
    p.add_argument("--individuals", type=int, default=3)
    p.add_argument("--actual", help="designated actual world (default: the first world)")
    p.add_argument("--unicode", action="store_true", help="print λ, ∃, ∧ instead of ASCII")
    p.add_argument("--batch", action="store_true", help="input holds several graphs")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            mode=args.mode,
            input=args.input,
            format=args.format,
            entails=tuple(args.entails) if args.entails else None,
            worlds=args.worlds,
            individuals=args.individuals,
            actual=args.actual,
            unicode=args.unicode,
            batch=args.batch,
        )
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    code, out, err = run(config)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
