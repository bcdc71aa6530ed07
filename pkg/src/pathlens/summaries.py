"""Declarative stand-ins for builtins and library classes.

Line-based format, ``#`` starts a comment::

    fn len/1 -> INT
    class str { upper -> STR, lower -> STR, startswith -> BOOL, count }

A class attribute without ``-> TYPE`` yields any primitive when called or read.
Later entries override earlier ones.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

PRIMITIVE_TYPES = ("BOOL", "INT", "FLOAT", "STR", "NONE")

# builtin type name for each primitive type
BUILTIN_CLASS = {"BOOL": "bool", "INT": "int", "FLOAT": "float", "STR": "str", "NONE": "NoneType"}

DEFAULT_SUMMARIES = """
fn len/1 -> INT
fn str/1 -> STR
fn int/1 -> INT
fn float/1 -> FLOAT
fn print/1 -> NONE
class str { upper -> STR, lower -> STR, strip -> STR, startswith -> BOOL, endswith -> BOOL, find -> INT, replace -> STR, join -> STR, count -> INT, isdigit -> BOOL }
class int { bit_length -> INT }
class float { is_integer -> BOOL }
class bool { }
class NoneType { }
"""


class SummaryFormatError(ValueError):
    def __init__(self, line: int, message: str, path: str = "<summaries>"):
        super().__init__(f"{path}:{line}: {message}")
        self.line = line
        self.message = message


@dataclass(frozen=True)
class FunctionSummary:
    name: str
    arity: int
    returns: str  # a primitive type name or a summary class name


@dataclass
class SummaryTable:
    functions: dict = field(default_factory=dict)  # name -> FunctionSummary
    classes: dict = field(default_factory=dict)  # name -> {attr: return type or None}

    def has_function(self, name: str) -> bool:
        return name in self.functions

    def has_class(self, name: str) -> bool:
        return name in self.classes

    def class_attrs(self, name: str) -> Optional[dict]:
        return self.classes.get(name)

    def merge(self, other: "SummaryTable") -> "SummaryTable":
        out = SummaryTable(dict(self.functions), {k: dict(v) for k, v in self.classes.items()})
        out.functions.update(other.functions)
        out.classes.update({k: dict(v) for k, v in other.classes.items()})
        return out


_FN = re.compile(r"^fn\s+([A-Za-z_]\w*)\s*/\s*(\d+)\s*->\s*([A-Za-z_]\w*)$")
_CLASS = re.compile(r"^class\s+([A-Za-z_]\w*)\s*\{(.*)\}$")
_ATTR = re.compile(r"^([A-Za-z_]\w*)(?:\s*->\s*([A-Za-z_]\w*))?$")


def parse_summaries(text: str, path: str = "<summaries>") -> SummaryTable:
    table = SummaryTable()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _FN.match(line)
        if m:
            name, arity, ret = m.group(1), int(m.group(2)), m.group(3)
            table.functions[name] = FunctionSummary(name, arity, ret)
            continue
        m = _CLASS.match(line)
        if m:
            attrs: dict = {}
            for part in m.group(2).split(","):
                part = part.strip()
                if not part:
                    continue
                am = _ATTR.match(part)
                if not am:
                    raise SummaryFormatError(lineno, f"bad attribute entry {part!r}", path)
                attrs[am.group(1)] = am.group(2)
            table.classes[m.group(1)] = attrs
            continue
        raise SummaryFormatError(lineno, f"unrecognized summary line {line!r}", path)
    return table


def default_summaries() -> SummaryTable:
    return parse_summaries(DEFAULT_SUMMARIES, "<builtin>")


def load_summaries(*paths) -> SummaryTable:
    """Built-in defaults overridden by each file in order."""
    table = default_summaries()
    for p in paths:
        text = Path(p).read_text(encoding="utf-8")
        table = table.merge(parse_summaries(text, str(p)))
    for fs in table.functions.values():
        if fs.returns not in PRIMITIVE_TYPES and fs.returns not in table.classes:
            raise SummaryFormatError(0, f"function {fs.name} returns unknown type {fs.returns!r}")
    return table
