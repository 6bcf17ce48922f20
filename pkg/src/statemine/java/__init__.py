"""Java-subset frontend: tokenize, parse into a syntax-graph model, resolve names."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Optional

from ..diagnostics import Diagnostic
from ..metamodel import MetaModel, shipped_metamodel
from ..model import Model
from .parser import ParseError, Parser, UnsupportedConstruct, parse_unit
from .printer import print_unit
from .resolve import resolve_names
from .tokens import LexError, Token, tokenize

__all__ = [
    "LexError",
    "ParseError",
    "Parser",
    "SourceUnit",
    "Token",
    "UnsupportedConstruct",
    "collect_sources",
    "load_sources",
    "parse_source",
    "parse_unit",
    "print_unit",
    "resolve_names",
    "tokenize",
]


class SourceUnit:
    def __init__(self, path: str, text: str):
        self.path = path
        self.text = text
        self.root: Optional[str] = None

    def __repr__(self) -> str:
        return f"SourceUnit({self.path!r}, root={self.root!r})"


def parse_source(
    text: str,
    m: Model,
    file: str = "<input>",
    strict: bool = False,
    diagnostics: Optional[list[Diagnostic]] = None,
) -> str:
    return parse_unit(tokenize(text, file), m, file, strict, diagnostics)


def collect_sources(paths: Iterable[str | Path]) -> list[SourceUnit]:
    """Gather ``.java`` files, recursing into directories.

    Each unit is named by its path relative to the argument it came from
    (a bare file keeps its file name), and units are sorted by that name so
    enumeration order never affects results.
    """
    units: dict[str, SourceUnit] = {}
    for arg in paths:
        p = Path(arg)
        if p.is_dir():
            files = [(f, f.relative_to(p).as_posix()) for f in p.rglob("*.java") if f.is_file()]
        elif p.is_file():
            files = [(p, p.name)]
        else:
            raise FileNotFoundError(f"no such file or directory: {arg}")
        for f, name in files:
            key = name
            n = 2
            while key in units:
                key = f"{name}#{n}"
                n += 1
            units[key] = SourceUnit(key, f.read_text(encoding="utf-8"))
    return [units[k] for k in sorted(units)]


def load_sources(
    units: list[SourceUnit],
    metamodel: Optional[MetaModel] = None,
    strict: bool = False,
) -> tuple[Model, list[Diagnostic]]:
    """Parse every unit into one model (in the given order) and resolve names."""
    m = Model(metamodel if metamodel is not None else shipped_metamodel())
    diags: list[Diagnostic] = []
    for u in units:
        u.root = parse_source(u.text, m, u.path, strict, diags)
    diags.extend(resolve_names(m))
    return m, diags
