"""Structured element names for diagrams and operator outputs.

Operator inputs are plain atoms carrying a natural-number value. Operator
outputs are named over their input names: pairs, tuples, and tagged copies.
The textual encoding is canonical and injective:

    Atom(5)           ->  5
    Pair(a, b)        ->  P(a,b)
    Tup(a, (b, c))    ->  T(a,[b,c])
    Copy(2, a)        ->  C(2,a)

Encodings are ASCII and contain no whitespace, so a name is always a single
token in line-based fact files.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


class NameSyntaxError(ValueError):
    """Raised when a textual name does not follow the canonical encoding."""

    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


@dataclass(frozen=True)
class Atom:
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ValueError(f"atom value must be a natural number, got {self.value}")

    def encode(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Pair:
    first: "ElementName"
    second: "ElementName"

    def encode(self) -> str:
        return f"P({self.first.encode()},{self.second.encode()})"


@dataclass(frozen=True)
class Tup:
    head: "ElementName"
    rest: tuple

    def encode(self) -> str:
        inner = ",".join(x.encode() for x in self.rest)
        return f"T({self.head.encode()},[{inner}])"


@dataclass(frozen=True)
class Copy:
    index: int
    inner: "ElementName"

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"copy index must be a natural number, got {self.index}")

    def encode(self) -> str:
        return f"C({self.index},{self.inner.encode()})"


ElementName = Union[Atom, Pair, Tup, Copy]


def canonical_key(name: ElementName) -> str:
    """Deterministic tie-break key: the canonical encoding."""
    return name.encode()


def atom_value(name: ElementName) -> int:
    """The natural-number value of an atom; raises for structured names."""
    if not isinstance(name, Atom):
        raise ValueError(f"expected an atom name, got {name.encode()}")
    return name.value


def parse_name(text: str) -> ElementName:
    """Parse a canonical name encoding back into an ElementName."""
    name, pos = _parse_at(text, 0)
    if pos != len(text):
        raise NameSyntaxError("trailing characters", text, pos)
    return name


def _parse_int(text: str, pos: int) -> tuple[int, int]:
    start = pos
    while pos < len(text) and text[pos].isdigit():
        pos += 1
    if pos == start:
        raise NameSyntaxError("expected a number", text, pos)
    return int(text[start:pos]), pos


def _expect(text: str, pos: int, ch: str) -> int:
    if pos >= len(text) or text[pos] != ch:
        raise NameSyntaxError(f"expected {ch!r}", text, pos)
    return pos + 1


def _parse_at(text: str, pos: int) -> tuple[ElementName, int]:
    if pos >= len(text):
        raise NameSyntaxError("unexpected end of name", text, pos)
    ch = text[pos]
    if ch.isdigit():
        value, pos = _parse_int(text, pos)
        return Atom(value), pos
    if ch == "P":
        pos = _expect(text, pos + 1, "(")
        first, pos = _parse_at(text, pos)
        pos = _expect(text, pos, ",")
        second, pos = _parse_at(text, pos)
        pos = _expect(text, pos, ")")
        return Pair(first, second), pos
    if ch == "C":
        pos = _expect(text, pos + 1, "(")
        index, pos = _parse_int(text, pos)
        pos = _expect(text, pos, ",")
        inner, pos = _parse_at(text, pos)
        pos = _expect(text, pos, ")")
        return Copy(index, inner), pos
    if ch == "T":
        pos = _expect(text, pos + 1, "(")
        head, pos = _parse_at(text, pos)
        pos = _expect(text, pos, ",")
        pos = _expect(text, pos, "[")
        rest = []
        if pos < len(text) and text[pos] != "]":
            while True:
                item, pos = _parse_at(text, pos)
                rest.append(item)
                if pos < len(text) and text[pos] == ",":
                    pos += 1
                    continue
                break
        pos = _expect(text, pos, "]")
        pos = _expect(text, pos, ")")
        return Tup(head, tuple(rest)), pos
    raise NameSyntaxError(f"unexpected character {ch!r}", text, pos)
