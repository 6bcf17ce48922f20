"""Tokenizer for the supported Java subset."""

from __future__ import annotations

import re
from dataclasses import dataclass

KEYWORDS = frozenset(
    """class enum extends abstract public private protected static void return
    if else switch case default break try catch new throws""".split()
)

# Java keywords outside the subset; the parser reports them as unsupported.
UNSUPPORTED_WORDS = frozenset(
    """interface implements import package for while do throw finally final
    synchronized this super instanceof assert native transient volatile strictfp
    continue goto const var record yield sealed permits""".split()
)

IDENTIFIER = "identifier"
KEYWORD = "keyword"
PUNCT = "punctuation"
LITERAL = "literal"
EOF = "eof"


class LexError(SyntaxError):
    def __init__(self, message: str, file: str, line: int, column: int):
        super().__init__(f"{file}:{line}:{column}: {message}")
        self.file, self.line, self.column = file, line, column


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    def is_(self, text: str) -> bool:
        return self.text == text and self.kind in (KEYWORD, PUNCT)

    def __str__(self) -> str:
        return "end of file" if self.kind == EOF else repr(self.text)


_PUNCT = sorted(
    """{ } ( ) [ ] ; , . : = @ < > ! ~ ? + - * / % & | ^
    == != <= >= && || ++ -- -> :: += -= *= /= &= |= ^= %= << >> >>> ...""".split(),
    key=len,
    reverse=True,
)
_NUMBER = re.compile(
    r"0[xX][0-9a-fA-F_]+[lL]?|\d[\d_]*\.\d*(?:[eE][+-]?\d+)?[fFdD]?|\.\d+(?:[eE][+-]?\d+)?[fFdD]?"
    r"|\d[\d_]*(?:[eE][+-]?\d+)[fFdD]?|\d[\d_]*[fFdDlL]?"
)


_MASTER = re.compile(
    r"(?P<skip>[ \t\r\n\f]+|//[^\n]*|/\*.*?\*/)"
    r'|(?P<string>"(?:[^"\\\n]|\\[\s\S])*"|\'(?:[^\'\\\n]|\\[\s\S])*\')'
    r"|(?P<ident>[A-Za-z_$][A-Za-z0-9_$]*)"
    rf"|(?P<number>{_NUMBER.pattern})"
    r"|(?P<punct>" + "|".join(re.escape(p) for p in _PUNCT) + ")",
    re.DOTALL,
)


def tokenize(text: str, file: str = "<input>") -> list[Token]:
    """Split ``text`` into tokens; comments and whitespace are dropped.

    Positions are 1-based.  Unterminated comments, strings and character
    literals raise :class:`LexError` at their opening position.
    """
    out: list[Token] = []
    append = out.append
    line, line_start, pos, n = 1, 0, 0, len(text)
    match = _MASTER.match
    while pos < n:
        m = match(text, pos)
        col = pos - line_start + 1
        if m is None or (m.lastgroup == "punct" and text.startswith("/*", pos)):
            ch = text[pos]
            if text.startswith("/*", pos):
                raise LexError("unterminated comment", file, line, col)
            if ch == '"':
                raise LexError("unterminated string", file, line, col)
            if ch == "'":
                raise LexError("unterminated character literal", file, line, col)
            raise LexError(f"unexpected character {ch!r}", file, line, col)
        group, value = m.lastgroup, m.group()
        if group == "skip":
            nl = value.count("\n")
            if nl:
                line += nl
                line_start = pos + value.rfind("\n") + 1
        elif group == "ident":
            append(Token(KEYWORD if value in KEYWORDS else IDENTIFIER, value, line, col))
        elif group == "punct":
            append(Token(PUNCT, value, line, col))
        else:
            append(Token(LITERAL, value, line, col))
            if group == "string" and "\n" in value:
                # an escaped line break inside a literal
                line += value.count("\n")
                line_start = pos + value.rfind("\n") + 1
        pos = m.end()
    append(Token(EOF, "", line, pos - line_start + 1))
    return out
