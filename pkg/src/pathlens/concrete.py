"""Concrete value semantics shared by the interpreter, constant folding and the solver."""

from __future__ import annotations

import operator

_MAX_REPEAT = 10_000


class FoldError(Exception):
    """An operation that is well-defined but too costly to fold."""


def type_name(value) -> str:
    """Abstract type name of a concrete primitive (objects carry their class name)."""
    if value is None:
        return "NONE"
    if isinstance(value, bool):
        return "BOOL"
    if isinstance(value, int):
        return "INT"
    if isinstance(value, float):
        return "FLOAT"
    if isinstance(value, str):
        return "STR"
    cls = getattr(value, "cls", None)
    if cls is None:
        raise TypeError(f"not a subset value: {value!r}")
    return cls


def is_primitive(value) -> bool:
    return value is None or isinstance(value, (bool, int, float, str))


def truthy(value) -> bool:
    if is_primitive(value):
        return bool(value)
    return True  # subset classes cannot define __bool__ or __len__


_ARITH = {"+": operator.add, "-": operator.sub, "*": operator.mul, "//": operator.floordiv}


def apply_binop(op: str, a, b):
    """Evaluate ``a op b`` with Python semantics restricted to the subset.

    Raises TypeError / ZeroDivisionError exactly where Python would, and
    :class:`FoldError` for results too large to be worth materialising.
    """
    if op == "and":
        return b if truthy(a) else a
    if op == "or":
        return a if truthy(a) else b
    if op == "==":
        return _eq(a, b)
    if op == "!=":
        return not _eq(a, b)
    if not (is_primitive(a) and is_primitive(b)):
        raise TypeError(f"unsupported operand types for {op}")
    if op == "<":
        return a < b
    if op == "*" and (isinstance(a, str) or isinstance(b, str)):
        n = b if isinstance(a, str) else a
        if isinstance(n, int) and abs(n) > _MAX_REPEAT:
            raise FoldError("string repetition too large")
    if op in ("*",) and isinstance(a, int) and isinstance(b, int):
        if a.bit_length() + b.bit_length() > 4096:
            raise FoldError("integer too large")
    return _ARITH[op](a, b)


def _eq(a, b) -> bool:
    if is_primitive(a) and is_primitive(b):
        return a == b
    return a is b


def values_equal_strict(a, b) -> bool:
    """Identity of concrete values: same type and same value (objects by identity)."""
    if is_primitive(a) and is_primitive(b):
        return type(a) is type(b) and a == b
    return a is b
