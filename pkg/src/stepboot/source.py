"""Tokenizer for the supported Python subset.

Produces a flat token stream with INDENT/DEDENT tokens inserted per the
block rules, every token carrying an exact source span (1-based lines,
0-based column offsets counted in code points).
"""

from __future__ import annotations

from .errors import SubsetSyntaxError

# token kinds
NAME = "NAME"
NUMBER = "NUMBER"
STRING = "STRING"
OP = "OP"
KEYWORD = "KEYWORD"
NEWLINE = "NEWLINE"
INDENT = "INDENT"
DEDENT = "DEDENT"
ENDMARKER = "ENDMARKER"

KEYWORDS = frozenset(
    """
    False None True and as assert async await break class continue def del
    elif else except finally for from global if import in is lambda nonlocal
    not or pass raise return try while with yield
    """.split()
)

OPERATORS = (
    "**=", "//=", "<<=", ">>=", "...",
    "**", "//", "<<", ">>", "<=", ">=", "==", "!=", "->", ":=",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=",
    "+", "-", "*", "/", "%", "@", "<", ">", "=", "(", ")", "[", "]",
    "{", "}", ",", ":", ".", ";", "&", "|", "^", "~",
)

_STRING_PREFIX_NAMES = {
    "f": "f-strings",
    "b": "byte strings",
    "r": "raw strings",
    "u": "u-prefixed strings",
    "rb": "byte strings",
    "br": "byte strings",
    "fr": "f-strings",
    "rf": "f-strings",
}

_ESCAPES = {"n": "\n", "t": "\t", "\\": "\\", "'": "'", '"': '"'}


class SourceFile:
    """A named piece of source text; spans index into it."""

    def __init__(self, file_id: str, text: str):
        self.file_id = file_id
        self.text = text
        # offset of the start of each 1-based line
        offsets = [0]
        for i, ch in enumerate(text):
            if ch == "\n":
                offsets.append(i + 1)
        self.line_offsets = offsets

    def index(self, line: int, col: int) -> int:
        return self.line_offsets[line - 1] + col

    def __repr__(self):
        return f"SourceFile({self.file_id!r})"


class SourceSpan:
    __slots__ = ("file", "start_line", "start_col", "end_line", "end_col")

    def __init__(self, file, start_line, start_col, end_line, end_col):
        self.file = file
        self.start_line = start_line
        self.start_col = start_col
        self.end_line = end_line
        self.end_col = end_col

    @property
    def file_id(self):
        return self.file.file_id

    def text(self) -> str:
        return self.file.text[
            self.file.index(self.start_line, self.start_col) : self.file.index(
                self.end_line, self.end_col
            )
        ]

    def to(self, other: "SourceSpan") -> "SourceSpan":
        """Span covering self through other (both in the same file)."""
        return SourceSpan(
            self.file, self.start_line, self.start_col, other.end_line, other.end_col
        )

    def contains(self, other: "SourceSpan") -> bool:
        return (self.start_line, self.start_col) <= (
            other.start_line,
            other.start_col,
        ) and (other.end_line, other.end_col) <= (self.end_line, self.end_col)

    def as_tuple(self):
        return (self.start_line, self.start_col, self.end_line, self.end_col)

    def __eq__(self, other):
        return (
            isinstance(other, SourceSpan)
            and self.file is other.file
            and self.as_tuple() == other.as_tuple()
        )

    def __hash__(self):
        return hash((id(self.file),) + self.as_tuple())

    def __repr__(self):
        return (
            f"{self.file.file_id}:{self.start_line}:{self.start_col}"
            f"-{self.end_line}:{self.end_col}"
        )


class Token:
    __slots__ = ("kind", "text", "span")

    def __init__(self, kind, text, span):
        self.kind = kind
        self.text = text
        self.span = span

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r})"


class _Lexer:
    def __init__(self, source: str, file_id: str):
        self.file = SourceFile(file_id, source)
        self.text = source
        self.pos = 0
        self.line = 1
        self.col = 0
        self.paren_depth = 0
        self.indents = [0]
        self.tokens: list[Token] = []
        self.line_has_content = False

    def error(self, message, start=None):
        span = self.span_from(start if start is not None else (self.line, self.col))
        raise SubsetSyntaxError(message, span)

    def span_from(self, start):
        line, col = start
        return SourceSpan(self.file, line, col, self.line, self.col)

    def emit(self, kind, text, start):
        self.tokens.append(Token(kind, text, self.span_from(start)))

    def peek(self, ahead=0):
        i = self.pos + ahead
        return self.text[i] if i < len(self.text) else ""

    def advance(self):
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 0
        else:
            self.col += 1
        return ch

    def tokenize(self):
        while self.pos < len(self.text):
            if self.col == 0 and self.paren_depth == 0:
                self.handle_indentation()
                if self.pos >= len(self.text):
                    break
            ch = self.peek()
            if ch == "\n":
                start = (self.line, self.col)
                self.advance()
                if self.line_has_content and self.paren_depth == 0:
                    self.emit(NEWLINE, "\n", start)
                    self.line_has_content = False
                continue
            if ch in " \t":
                self.advance()
                continue
            if ch == "#":
                while self.pos < len(self.text) and self.peek() != "\n":
                    self.advance()
                continue
            if ch == "\\" and self.peek(1) == "\n":
                self.advance()
                self.advance()
                # explicit line join: the next line's leading whitespace is
                # ordinary spacing, not indentation
                while self.peek() in (" ", "\t"):
                    self.advance()
                continue
            self.read_token()
        # close the final logical line, then outstanding blocks
        if self.line_has_content:
            self.emit(NEWLINE, "", (self.line, self.col))
        while len(self.indents) > 1:
            self.indents.pop()
            self.emit(DEDENT, "", (self.line, self.col))
        self.emit(ENDMARKER, "", (self.line, self.col))
        return self.tokens

    def handle_indentation(self):
        start = (self.line, self.col)
        width = 0
        while self.pos < len(self.text):
            ch = self.peek()
            if ch == " ":
                width += 1
                self.advance()
            elif ch == "\t":
                self.advance()
                self.error("tabs are not allowed in indentation", start)
            else:
                break
        if self.pos >= len(self.text) or self.peek() in "\n#":
            return  # blank or comment-only line: no indent tokens
        if width > self.indents[-1]:
            self.indents.append(width)
            self.emit(INDENT, " " * width, start)
        else:
            while width < self.indents[-1]:
                self.indents.pop()
                self.emit(DEDENT, "", start)
            if width != self.indents[-1]:
                self.error("unindent does not match any outer indentation level", start)

    def read_token(self):
        self.line_has_content = True
        start = (self.line, self.col)
        ch = self.peek()
        if ch.isdigit() or (ch == "." and self.peek(1).isdigit()):
            return self.read_number(start)
        if ch == '"' or ch == "'":
            return self.read_string(start)
        if ch.isidentifier() or ch == "_":
            return self.read_name(start)
        for op in OPERATORS:
            if self.text.startswith(op, self.pos):
                for _ in op:
                    self.advance()
                if op in "([{":
                    self.paren_depth += 1
                elif op in ")]}":
                    self.paren_depth = max(0, self.paren_depth - 1)
                return self.emit(OP, op, start)
        self.advance()
        self.error(f"illegal character {ch!r}", start)

    def read_name(self, start):
        chars = []
        while self.pos < len(self.text):
            ch = self.peek()
            if ch.isalnum() or ch == "_" or (ch.isidentifier() and ord(ch) > 127):
                chars.append(self.advance())
            else:
                break
        name = "".join(chars)
        if self.peek() in ('"', "'") and name.lower() in _STRING_PREFIX_NAMES:
            self.error(f"{_STRING_PREFIX_NAMES[name.lower()]} are not supported", start)
        kind = KEYWORD if name in KEYWORDS else NAME
        self.emit(kind, name, start)

    def read_number(self, start):
        chars = []

        def digits():
            while self.peek().isdigit():
                chars.append(self.advance())

        if self.peek() == "0" and self.peek(1) and self.peek(1) in "xXoObB":
            self.advance()
            kind = {"x": "hex", "o": "octal", "b": "binary"}[self.advance().lower()]
            self.error(f"{kind} literals are not supported", start)
        digits()
        is_float = False
        if self.peek() == ".":
            is_float = True
            chars.append(self.advance())
            digits()
        if self.peek() in ("e", "E") and (
            self.peek(1).isdigit() or (self.peek(1) in "+-" and self.peek(2).isdigit())
        ):
            is_float = True
            chars.append(self.advance())
            if self.peek() in "+-":
                chars.append(self.advance())
            digits()
        text = "".join(chars)
        if self.peek() == "_" or (self.peek().isdigit()):
            self.error("invalid number literal", start)
        if self.peek().isidentifier():
            self.error("invalid number literal", start)
        if not is_float and len(text) > 1 and text[0] == "0" and set(text) != {"0"}:
            self.error("leading zeros in decimal integer literals are not supported", start)
        self.emit(NUMBER, text, start)

    def read_string(self, start):
        quote = self.advance()
        if self.peek() == quote and self.peek(1) == quote:
            self.error("triple-quoted strings are not supported", start)
        chars = []
        while True:
            if self.pos >= len(self.text) or self.peek() == "\n":
                self.error("unterminated string literal", start)
            ch = self.advance()
            if ch == quote:
                break
            if ch == "\\":
                chars.append(self.read_escape(start))
            else:
                chars.append(ch)
        self.emit(STRING, "".join(chars), start)

    def read_escape(self, start):
        if self.pos >= len(self.text):
            self.error("unterminated string literal", start)
        ch = self.advance()
        if ch in _ESCAPES:
            return _ESCAPES[ch]
        if ch == "x" or ch == "u":
            width = 2 if ch == "x" else 4
            code = ""
            for _ in range(width):
                if self.peek() and self.peek() in "0123456789abcdefABCDEF":
                    code += self.advance()
            if len(code) != width:
                self.error(f"malformed \\{ch} escape", start)
            return chr(int(code, 16))
        if ch == "\n":
            return ""  # line continuation inside a string
        return "\\" + ch  # unknown escapes keep the backslash, like reference Python


def tokenize(source: str, file_id: str = "<string>") -> list[Token]:
    """Tokenize `source`, ending with ENDMARKER; raises SubsetSyntaxError."""
    return _Lexer(source, file_id).tokenize()
