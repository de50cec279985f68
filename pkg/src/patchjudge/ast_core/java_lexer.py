"""Tokenizer for the shipped Java grammar adapter.

Comments and whitespace are dropped, which also makes the token stream the
normalization used for duplicate-patch detection.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import SourceSyntaxError

KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while true false null""".split()
)

PRIMITIVE_TYPES = frozenset(
    {"boolean", "byte", "char", "short", "int", "long", "float", "double"}
)

MODIFIERS = frozenset(
    """public private protected static final abstract synchronized native
    transient volatile strictfp""".split()
)

# longest first so maximal munch works with a simple scan
OPERATORS = (
    ">>>=", ">>>", ">>=", "<<=", "->", "::",
    "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", "&", "|", "^", "?", ":",
)

SEPARATORS = "(){}[];,.@"


@dataclass(frozen=True)
class Token:
    type: str  # ident | keyword | int | float | char | string | op | sep | eof
    text: str
    start: int
    end: int


def tokenize(source: str, source_path: str = "<memory>") -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch in " \t\r\n\f":
            i += 1
            continue
        if ch == "/" and i + 1 < n and source[i + 1] == "/":
            j = source.find("\n", i)
            i = n if j == -1 else j + 1
            continue
        if ch == "/" and i + 1 < n and source[i + 1] == "*":
            j = source.find("*/", i + 2)
            if j == -1:
                raise SourceSyntaxError("unterminated comment", (i, n), source_path)
            i = j + 2
            continue
        if ch.isalpha() or ch == "_" or ch == "$":
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] in "_$"):
                j += 1
            text = source[i:j]
            ttype = "keyword" if text in KEYWORDS else "ident"
            tokens.append(Token(ttype, text, i, j))
            i = j
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            tokens.append(_scan_number(source, i, source_path))
            i = tokens[-1].end
            continue
        if ch == '"':
            tokens.append(_scan_quoted(source, i, '"', "string", source_path))
            i = tokens[-1].end
            continue
        if ch == "'":
            tokens.append(_scan_quoted(source, i, "'", "char", source_path))
            i = tokens[-1].end
            continue
        matched = False
        for op in OPERATORS:
            if source.startswith(op, i):
                tokens.append(Token("op", op, i, i + len(op)))
                i += len(op)
                matched = True
                break
        if matched:
            continue
        if ch in SEPARATORS:
            tokens.append(Token("sep", ch, i, i + 1))
            i += 1
            continue
        raise SourceSyntaxError(f"unexpected character {ch!r}", (i, i + 1), source_path)
    tokens.append(Token("eof", "", n, n))
    return tokens


def _scan_number(source: str, start: int, source_path: str) -> Token:
    n = len(source)
    i = start
    is_float = False
    if source.startswith(("0x", "0X", "0b", "0B"), i):
        i += 2
        while i < n and (source[i].isalnum() or source[i] == "_"):
            i += 1
        if i < n and source[i] in "lL":
            i += 1
        return Token("int", source[start:i], start, i)
    while i < n and (source[i].isdigit() or source[i] == "_"):
        i += 1
    if i < n and source[i] == ".":
        is_float = True
        i += 1
        while i < n and (source[i].isdigit() or source[i] == "_"):
            i += 1
    if i < n and source[i] in "eE":
        is_float = True
        i += 1
        if i < n and source[i] in "+-":
            i += 1
        while i < n and source[i].isdigit():
            i += 1
    if i < n and source[i] in "fFdD":
        is_float = True
        i += 1
    elif i < n and source[i] in "lL":
        i += 1
    return Token("float" if is_float else "int", source[start:i], start, i)


def _scan_quoted(source: str, start: int, quote: str, ttype: str, source_path: str) -> Token:
    i = start + 1
    n = len(source)
    while i < n:
        if source[i] == "\\":
            i += 2
            continue
        if source[i] == quote:
            return Token(ttype, source[start : i + 1], start, i + 1)
        if source[i] == "\n":
            break
        i += 1
    raise SourceSyntaxError("unterminated literal", (start, min(i, n)), source_path)
