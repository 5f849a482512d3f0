"""Regex parser for the password-policy subset.

Supported: literals, escapes, `.`, character classes with ranges and
negation, alternation, groups, `*` `+` `?` `{m}` `{m,n}` `{m,}`, and `^`/`$`
anchors at the ends only (matching is whole-string regardless). The alphabet
is printable ASCII 0x20-0x7E. Backreferences and lookaround are rejected:
they take the language outside the regular set the DFA machinery handles.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import RegexSyntaxError, UnsupportedFeature

ALPHABET = "".join(chr(c) for c in range(0x20, 0x7F))
_ALPHASET = frozenset(ALPHABET)

_DIGITS = frozenset("0123456789")
_WORD = frozenset("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_")
_SPACE = frozenset(" ")  # tab/newline fall outside the printable alphabet


@dataclass(frozen=True)
class Literal:
    char: str


@dataclass(frozen=True)
class CharClass:
    chars: frozenset


@dataclass(frozen=True)
class Concat:
    parts: tuple


@dataclass(frozen=True)
class Alternate:
    options: tuple


@dataclass(frozen=True)
class Repeat:
    node: "Node"
    min: int
    max: int | None  # None = unbounded


@dataclass(frozen=True)
class Group:
    node: "Node"


Node = Union[Literal, CharClass, Concat, Alternate, Repeat, Group]


def parse_regex(src: str) -> Node:
    return _Parser(src).parse()


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0
        # Anchors are only legal at the absolute ends; strip them up front.
        if src.startswith("^"):
            self.src = self.src[1:]
        if self.src.endswith("$") and not _escaped_tail(self.src):
            self.src = self.src[:-1]

    def parse(self) -> Node:
        node = self._alternation()
        if self.pos != len(self.src):
            self._fail(f"unexpected {self.src[self.pos]!r}")
        return node

    # --- grammar ------------------------------------------------------------

    def _alternation(self) -> Node:
        options = [self._concat()]
        while self._peek() == "|":
            self.pos += 1
            options.append(self._concat())
        if len(options) == 1:
            return options[0]
        return Alternate(tuple(options))

    def _concat(self) -> Node:
        parts = []
        while self._peek() not in ("", "|", ")"):
            parts.append(self._repeat())
        if len(parts) == 1:
            return parts[0]
        return Concat(tuple(parts))

    def _repeat(self) -> Node:
        node = self._atom()
        while True:
            ch = self._peek()
            if ch == "*":
                self.pos += 1
                node = Repeat(node, 0, None)
            elif ch == "+":
                self.pos += 1
                node = Repeat(node, 1, None)
            elif ch == "?":
                self.pos += 1
                node = Repeat(node, 0, 1)
            elif ch == "{":
                node = self._braced_repeat(node)
            else:
                return node

    def _braced_repeat(self, node: Node) -> Node:
        self.pos += 1  # consume '{'
        lo = self._number()
        hi: int | None
        if self._peek() == ",":
            self.pos += 1
            hi = self._number() if self._peek().isdigit() else None
        else:
            hi = lo
        if self._peek() != "}":
            self._fail("expected '}' in repetition")
        self.pos += 1
        if hi is not None and hi < lo:
            self._fail(f"repetition bounds reversed ({lo},{hi})")
        return Repeat(node, lo, hi)

    def _number(self) -> int:
        start = self.pos
        while self._peek().isdigit():
            self.pos += 1
        if self.pos == start:
            self._fail("expected a number")
        return int(self.src[start:self.pos])

    def _atom(self) -> Node:
        ch = self._peek()
        if ch == "":
            self._fail("unexpected end of pattern")
        if ch in "*+?{":
            self._fail(f"quantifier {ch!r} with nothing to repeat")
        if ch in "^$":
            self._fail(f"anchor {ch!r} only permitted at the ends")
        if ch == "(":
            return self._group()
        if ch == "[":
            return self._char_class()
        if ch == ".":
            self.pos += 1
            return CharClass(_ALPHASET)
        if ch == "\\":
            return self._escape()
        self.pos += 1
        self._require_in_alphabet(ch)
        return Literal(ch)

    def _group(self) -> Node:
        self.pos += 1  # consume '('
        if self._peek() == "?":
            raise UnsupportedFeature(
                "lookaround / special groups are not supported")
        inner = self._alternation()
        if self._peek() != ")":
            self._fail("unbalanced '('")
        self.pos += 1
        return Group(inner)

    def _escape(self) -> Node:
        self.pos += 1  # consume '\'
        ch = self._peek()
        if ch == "":
            self._fail("dangling escape")
        self.pos += 1
        if ch.isdigit():
            raise UnsupportedFeature("backreferences are not supported")
        shorthand = self._class_shorthand(ch)
        if shorthand is not None:
            return CharClass(shorthand)
        self._require_in_alphabet(ch)
        return Literal(ch)

    def _char_class(self) -> Node:
        opening = self.pos
        self.pos += 1  # consume '['
        negate = False
        if self._peek() == "^":
            negate = True
            self.pos += 1
        chars: set = set()
        first = True
        while True:
            ch = self._peek()
            if ch == "":
                self.pos = opening
                self._fail("unbalanced '['")
            if ch == "]" and not first:
                self.pos += 1
                break
            first = False
            lo = self._class_char(chars)
            if lo is None:
                continue
            if self._peek() == "-" and self._peek(1) not in ("]", ""):
                self.pos += 1
                hi = self._class_char(None)
                if hi is None:
                    self._fail("shorthand class cannot bound a range")
                if ord(hi) < ord(lo):
                    self._fail(f"reversed range {lo}-{hi}")
                chars.update(chr(c) for c in range(ord(lo), ord(hi) + 1))
            else:
                chars.add(lo)
        if negate:
            chars = _ALPHASET - chars
        else:
            chars &= _ALPHASET
        return CharClass(frozenset(chars))

    def _class_char(self, sink: set | None) -> str | None:
        """One class member; expands shorthand escapes into `sink`."""
        ch = self._peek()
        if ch != "\\":
            self.pos += 1
            return ch
        self.pos += 1
        esc = self._peek()
        if esc == "":
            self._fail("dangling escape in class")
        self.pos += 1
        shorthand = self._class_shorthand(esc)
        if shorthand is not None:
            if sink is None:
                return None
            sink.update(shorthand)
            return None
        self._require_in_alphabet(esc)
        return esc

    @staticmethod
    def _class_shorthand(ch: str) -> frozenset | None:
        if ch == "d":
            return _DIGITS
        if ch == "D":
            return _ALPHASET - _DIGITS
        if ch == "w":
            return _WORD
        if ch == "W":
            return _ALPHASET - _WORD
        if ch == "s":
            return _SPACE
        if ch == "S":
            return _ALPHASET - _SPACE
        return None

    # --- plumbing -----------------------------------------------------------

    def _peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.src[i] if i < len(self.src) else ""

    def _require_in_alphabet(self, ch: str) -> None:
        if ch not in _ALPHASET:
            raise UnsupportedFeature(
                f"character {ch!r} outside the printable ASCII alphabet")

    def _fail(self, message: str) -> None:
        raise RegexSyntaxError(message, self.pos)


def _escaped_tail(src: str) -> bool:
    """True if the final character is escaped by an odd backslash run."""
    backslashes = 0
    for ch in reversed(src[:-1]):
        if ch != "\\":
            break
        backslashes += 1
    return backslashes % 2 == 1
