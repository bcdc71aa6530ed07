"""Parsing and lowering of the supported Python subset.

The subset (documented in ``docs/subset.md``) is parsed with the stdlib
:mod:`ast` module, checked node by node, then lowered to the flat IR of
:mod:`pathlens.ir`. Anything outside the subset is rejected with a
:class:`SubsetSyntaxError`; nothing is silently skipped.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import ir
from .ir import Span
from .summaries import SummaryTable, default_summaries


class SubsetSyntaxError(SyntaxError):
    """Source text outside the supported subset."""

    def __init__(self, span: Span, message: str):
        super().__init__(f"{span}: {message}")
        self.span = span
        self.message = message


class LoweringError(Exception):
    def __init__(self, span: Span, message: str):
        super().__init__(f"{span}: {message}")
        self.span = span
        self.message = message


@dataclass
class SourceProgram:
    files: list  # [(path, text)]
    entry: str

    @classmethod
    def from_paths(cls, paths, entry: str) -> "SourceProgram":
        return cls([(str(p), Path(p).read_text(encoding="utf-8")) for p in paths], entry)

    @classmethod
    def from_text(cls, text: str, entry: str, path: str = "<input>") -> "SourceProgram":
        return cls([(path, text)], entry)


@dataclass
class Ast:
    modules: list  # [(path, ast.Module)]
    entry: str
    classes: dict = field(default_factory=dict)  # name -> (path, ast.ClassDef)
    functions: dict = field(default_factory=dict)  # qualname -> (path, ast.FunctionDef, class name or None)
    constants: dict = field(default_factory=dict)  # name -> (path, ast.Assign, value)


# -- parsing ------------------------------------------------------------------

_UNSUPPORTED = {
    ast.ListComp: "list comprehension",
    ast.SetComp: "set comprehension",
    ast.DictComp: "dict comprehension",
    ast.GeneratorExp: "generator expression",
    ast.Lambda: "lambda",
    ast.Try: "try statement",
    ast.With: "with statement",
    ast.For: "for loop",
    ast.Raise: "raise statement",
    ast.Assert: "assert statement",
    ast.Import: "import",
    ast.ImportFrom: "import",
    ast.Global: "global declaration",
    ast.Nonlocal: "nonlocal declaration",
    ast.Delete: "del statement",
    ast.Break: "break",
    ast.Continue: "continue",
    ast.Yield: "yield",
    ast.YieldFrom: "yield",
    ast.Await: "await",
    ast.AsyncFunctionDef: "async function",
    ast.List: "list literal",
    ast.Tuple: "tuple",
    ast.Dict: "dict literal",
    ast.Set: "set literal",
    ast.Subscript: "subscript",
    ast.Slice: "slice",
    ast.Starred: "starred argument",
    ast.JoinedStr: "f-string",
    ast.IfExp: "conditional expression",
    ast.NamedExpr: "assignment expression",
    ast.AnnAssign: "annotated assignment",
}

_BINOPS = {ast.Add: "+", ast.Sub: "-", ast.Mult: "*", ast.FloorDiv: "//"}
_CMPOPS = (ast.Eq, ast.NotEq, ast.Lt, ast.Gt, ast.LtE, ast.GtE, ast.Is, ast.IsNot)
_CONST_TYPES = (bool, int, float, str, type(None))


def _span(path: str, node) -> Span:
    return Span(path, getattr(node, "lineno", 0), getattr(node, "col_offset", 0))


class _Validator(ast.NodeVisitor):
    def __init__(self, path: str):
        self.path = path

    def fail(self, node, what: str):
        raise SubsetSyntaxError(_span(self.path, node), f"{what} unsupported")

    def generic_visit(self, node):
        kind = _UNSUPPORTED.get(type(node))
        if kind:
            self.fail(node, kind)
        if isinstance(node, ast.stmt) and not isinstance(
            node, (ast.FunctionDef, ast.ClassDef, ast.Assign, ast.AugAssign, ast.Expr,
                   ast.If, ast.While, ast.Return, ast.Pass)
        ):
            self.fail(node, type(node).__name__)
        if isinstance(node, ast.expr) and not isinstance(
            node, (ast.Name, ast.Constant, ast.Attribute, ast.BinOp, ast.UnaryOp,
                   ast.Compare, ast.BoolOp, ast.Call)
        ):
            self.fail(node, type(node).__name__)
        super().generic_visit(node)

    def visit_FunctionDef(self, node):
        if node.decorator_list:
            self.fail(node.decorator_list[0], "decorator")
        a = node.args
        if a.vararg or a.kwarg or a.kwonlyargs or a.posonlyargs:
            self.fail(node, "variadic or keyword-only parameter")
        if a.defaults:
            self.fail(node, "default argument")
        for stmt in node.body:
            if isinstance(stmt, (ast.FunctionDef, ast.ClassDef)):
                self.fail(stmt, "nested definition")
            self.visit(stmt)

    def visit_ClassDef(self, node):
        if node.bases or node.keywords:
            self.fail(node, "class inheritance")
        if node.decorator_list:
            self.fail(node.decorator_list[0], "decorator")
        for stmt in node.body:
            if isinstance(stmt, ast.FunctionDef):
                self.visit(stmt)
            elif isinstance(stmt, ast.Pass) or _is_docstring(stmt):
                continue
            else:
                self.fail(stmt, "non-method class member")

    def visit_While(self, node):
        if node.orelse:
            self.fail(node, "while-else")
        self.generic_visit(node)

    def visit_Assign(self, node):
        if len(node.targets) != 1 or not isinstance(node.targets[0], (ast.Name, ast.Attribute)):
            self.fail(node, "multiple or destructuring assignment")
        self.generic_visit(node)

    def visit_AugAssign(self, node):
        if type(node.op) not in _BINOPS:
            self.fail(node, f"operator {type(node.op).__name__}")
        self.generic_visit(node)

    def visit_BinOp(self, node):
        if type(node.op) not in _BINOPS:
            self.fail(node, f"operator {type(node.op).__name__}")
        self.generic_visit(node)

    def visit_UnaryOp(self, node):
        if not isinstance(node.op, (ast.Not, ast.USub)):
            self.fail(node, f"operator {type(node.op).__name__}")
        self.generic_visit(node)

    def visit_Compare(self, node):
        if len(node.ops) != 1:
            self.fail(node, "chained comparison")
        if not isinstance(node.ops[0], _CMPOPS):
            self.fail(node, f"operator {type(node.ops[0]).__name__}")
        if isinstance(node.ops[0], (ast.Is, ast.IsNot)) and not (
            _is_none(node.left) or _is_none(node.comparators[0])
        ):
            self.fail(node, "identity comparison other than with None")
        self.generic_visit(node)

    def visit_Call(self, node):
        if node.keywords:
            self.fail(node, "keyword argument")
        if not isinstance(node.func, (ast.Name, ast.Attribute)):
            self.fail(node, "computed callee")
        self.generic_visit(node)

    def visit_Constant(self, node):
        if not isinstance(node.value, _CONST_TYPES) and node.value is not Ellipsis:
            self.fail(node, f"{type(node.value).__name__} literal")


def _is_docstring(stmt) -> bool:
    return isinstance(stmt, ast.Expr) and isinstance(stmt.value, ast.Constant) and (
        isinstance(stmt.value.value, str) or stmt.value.value is Ellipsis
    )


def _is_none(node) -> bool:
    return isinstance(node, ast.Constant) and node.value is None


def _const_value(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, _CONST_TYPES):
        return True, node.value
    if (
        isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub)
        and isinstance(node.operand, ast.Constant)
        and type(node.operand.value) in (int, float)
    ):
        return True, -node.operand.value
    return False, None


def parse(source: SourceProgram) -> Ast:
    """Parse and check every file; raises :class:`SubsetSyntaxError`."""
    result = Ast([], source.entry)
    for path, text in source.files:
        try:
            tree = ast.parse(text, filename=path)
        except SyntaxError as exc:
            raise SubsetSyntaxError(Span(path, exc.lineno or 0, exc.offset or 0), exc.msg) from None
        _Validator(path).visit(tree)
        result.modules.append((path, tree))
        for stmt in tree.body:
            sp = _span(path, stmt)
            if isinstance(stmt, ast.ClassDef):
                _declare(result, stmt.name, sp)
                result.classes[stmt.name] = (path, stmt)
                for m in stmt.body:
                    if isinstance(m, ast.FunctionDef):
                        if not m.args.args:
                            raise SubsetSyntaxError(_span(path, m), "method without self parameter unsupported")
                        result.functions[f"{stmt.name}.{m.name}"] = (path, m, stmt.name)
            elif isinstance(stmt, ast.FunctionDef):
                _declare(result, stmt.name, sp)
                result.functions[stmt.name] = (path, stmt, None)
            elif isinstance(stmt, ast.Assign):
                target = stmt.targets[0]
                ok, value = _const_value(stmt.value)
                if not isinstance(target, ast.Name) or not ok:
                    raise SubsetSyntaxError(sp, "module-level statement other than a constant definition unsupported")
                _declare(result, target.id, sp)
                result.constants[target.id] = (path, stmt, value)
            elif isinstance(stmt, ast.Pass) or _is_docstring(stmt):
                continue
            else:
                raise SubsetSyntaxError(sp, "module-level statement other than a definition unsupported")
    matches = [q for q in result.functions if q == source.entry]
    if len(matches) != 1:
        raise SubsetSyntaxError(Span("<entry>", 0, 0), f"entry {source.entry!r} does not name a function")
    return result


def _declare(result: Ast, name: str, span: Span) -> None:
    if name in result.classes or name in result.constants or (
        name in result.functions and result.functions[name][2] is None
    ):
        raise SubsetSyntaxError(span, f"redefinition of {name!r} unsupported")


# -- lowering -----------------------------------------------------------------


class _FunctionLowering:
    def __init__(self, owner: "_Lowering", path: str, fn: ast.FunctionDef, qualname: str):
        self.owner = owner
        self.path = path
        self.fn = fn
        self.qualname = qualname
        self.params = tuple(a.arg for a in fn.args.args)
        self.locals = set(self.params) | _assigned_names(fn.body)
        self.counter = 0

    def span(self, node) -> Span:
        return _span(self.path, node)

    def fresh(self) -> str:
        name = f"$t{self.counter}"
        self.counter += 1
        return name

    def error(self, node, message: str):
        raise LoweringError(self.span(node), message)

    # expressions

    def atom(self, expr, out: list) -> str:
        if isinstance(expr, ast.Name) and expr.id in self.locals:
            return expr.id
        tmp = self.fresh()
        self.into(tmp, expr, out)
        return tmp

    def into(self, target: Optional[str], expr, out: list) -> None:
        sp = self.span(expr)
        ok, value = _const_value(expr)
        if ok:
            out.append(ir.ConstAssign(target or self.fresh(), value, sp))
            return
        if isinstance(expr, ast.Constant):  # Ellipsis
            return
        if isinstance(expr, ast.Name):
            name = expr.id
            if name in self.locals:
                out.append(ir.Alias(target or self.fresh(), name, sp))
            elif name in self.owner.constants:
                out.append(ir.ConstAssign(target or self.fresh(), self.owner.constants[name], sp))
            elif name in self.owner.ast.classes or name in self.owner.ast.functions:
                self.error(expr, f"{name!r} used as a value (first-class functions and classes unsupported)")
            else:
                self.error(expr, f"name {name!r} is not defined")
            return
        if target is None:
            target = self.fresh()
        if isinstance(expr, ast.BinOp):
            left = self.atom(expr.left, out)
            right = self.atom(expr.right, out)
            out.append(ir.Binop(target, left, _BINOPS[type(expr.op)], right, sp))
        elif isinstance(expr, ast.Compare):
            self.compare(target, expr, out)
        elif isinstance(expr, ast.BoolOp):
            self.boolop(target, expr, out)
        elif isinstance(expr, ast.UnaryOp):
            operand = self.atom(expr.operand, out)
            if isinstance(expr.op, ast.Not):
                tmp = self.fresh()
                out.append(ir.If(operand, [ir.ConstAssign(tmp, False, sp)], [ir.ConstAssign(tmp, True, sp)], sp))
                out.append(ir.Alias(target, tmp, sp))
            else:
                zero = self.fresh()
                out.append(ir.ConstAssign(zero, 0, sp))
                out.append(ir.Binop(target, zero, "-", operand, sp))
        elif isinstance(expr, ast.Attribute):
            if expr.attr in self.owner.method_names:
                self.error(expr, f"method {expr.attr!r} read as a value (bound methods unsupported)")
            obj = self.atom(expr.value, out)
            out.append(ir.AttrRead(target, obj, expr.attr, sp))
        elif isinstance(expr, ast.Call):
            self.call(target, expr, out)
        else:
            self.error(expr, f"cannot lower {type(expr).__name__}")

    def compare(self, target: str, expr: ast.Compare, out: list) -> None:
        sp = self.span(expr)
        op = expr.ops[0]
        left = self.atom(expr.left, out)
        right = self.atom(expr.comparators[0], out)
        if isinstance(op, (ast.Eq, ast.Is)):
            out.append(ir.Binop(target, left, "==", right, sp))
        elif isinstance(op, (ast.NotEq, ast.IsNot)):
            out.append(ir.Binop(target, left, "!=", right, sp))
        elif isinstance(op, ast.Lt):
            out.append(ir.Binop(target, left, "<", right, sp))
        elif isinstance(op, ast.Gt):
            out.append(ir.Binop(target, right, "<", left, sp))
        else:
            # a <= b  ==>  (a < b) or (a == b); both operands are plain variables, so no extra effects
            lo, hi = (left, right) if isinstance(op, ast.LtE) else (right, left)
            lt, eq = self.fresh(), self.fresh()
            out.append(ir.Binop(lt, lo, "<", hi, sp))
            out.append(ir.Binop(eq, lo, "==", hi, sp))
            out.append(ir.Binop(target, lt, "or", eq, sp))

    def boolop(self, target: str, expr: ast.BoolOp, out: list) -> None:
        sp = self.span(expr)
        op = "and" if isinstance(expr.op, ast.And) else "or"
        acc = self.atom(expr.values[0], out)
        for value in expr.values[1:]:
            if _is_simple(value, self.locals, self.owner.constants):
                rhs = self.atom(value, out)
                nxt = self.fresh()
                out.append(ir.Binop(nxt, acc, op, rhs, sp))
            else:
                # short-circuit through control flow so the right operand runs only when needed
                nxt = self.fresh()
                out.append(ir.Alias(nxt, acc, sp))
                rhs_code: list = []
                self.into(nxt, value, rhs_code)
                if op == "and":
                    out.append(ir.If(acc, rhs_code, [], sp))
                else:
                    out.append(ir.If(acc, [], rhs_code, sp))
            acc = nxt
        out.append(ir.Alias(target, acc, sp))

    def call(self, target: Optional[str], expr: ast.Call, out: list) -> None:
        sp = self.span(expr)
        func = expr.func
        if isinstance(func, ast.Attribute):
            receiver = self.atom(func.value, out)
            args = tuple(self.atom(a, out) for a in expr.args)
            out.append(ir.Call(target, func.attr, args, receiver, sp))
            return
        name = func.id
        args = tuple(self.atom(a, out) for a in expr.args)
        if name in self.locals:
            self.error(expr, f"call through variable {name!r} unsupported")
        if name in self.owner.ast.classes:
            init = f"{name}.__init__"
            if init in self.owner.ast.functions:
                arity = len(self.owner.ast.functions[init][1].args.args) - 1
                if arity != len(args):
                    self.error(expr, f"{name}() takes {arity} arguments, {len(args)} given")
                obj = self.fresh()
                out.append(ir.New(obj, name, sp))
                out.append(ir.Call(None, "__init__", args, obj, sp))
                out.append(ir.Alias(target or self.fresh(), obj, sp))
            else:
                if args:
                    self.error(expr, f"{name}() takes no arguments")
                out.append(ir.New(target or self.fresh(), name, sp))
            return
        if name in self.owner.ast.functions and self.owner.ast.functions[name][2] is None:
            arity = len(self.owner.ast.functions[name][1].args.args)
        elif self.owner.summaries.has_function(name):
            arity = self.owner.summaries.functions[name].arity
        else:
            self.error(expr, f"call to unknown function {name!r}")
        if arity != len(args):
            self.error(expr, f"{name}() takes {arity} arguments, {len(args)} given")
        out.append(ir.Call(target, name, args, None, sp))

    def cond(self, test, out: list) -> tuple[str, bool]:
        """Lower a branch condition to a variable; the flag says whether branches swap."""
        if isinstance(test, ast.UnaryOp) and isinstance(test.op, ast.Not):
            var, swapped = self.cond(test.operand, out)
            return var, not swapped
        return self.atom(test, out), False

    def loop_flag(self, test, flag: str) -> list:
        sp = self.span(test)
        code: list = []
        var, swapped = self.cond(test, code)
        yes, no = (False, True) if swapped else (True, False)
        code.append(ir.If(var, [ir.ConstAssign(flag, yes, sp)], [ir.ConstAssign(flag, no, sp)], sp))
        return code

    # statements

    def block(self, stmts: list) -> list:
        out: list = []
        for s in stmts:
            self.stmt(s, out)
        return out

    def stmt(self, s, out: list) -> None:
        sp = self.span(s)
        if isinstance(s, ast.Assign):
            tgt = s.targets[0]
            if isinstance(tgt, ast.Name):
                self.into(tgt.id, s.value, out)
            else:
                src = self.atom(s.value, out)
                obj = self.atom(tgt.value, out)
                out.append(ir.AttrWrite(obj, tgt.attr, src, sp))
        elif isinstance(s, ast.AugAssign):
            op = _BINOPS[type(s.op)]
            if isinstance(s.target, ast.Name):
                name = s.target.id
                if name not in self.locals:
                    self.error(s, f"augmented assignment to non-local {name!r}")
                rhs = self.fresh()
                self.into(rhs, s.value, out)
                out.append(ir.Binop(name, name, op, rhs, sp))
            elif isinstance(s.target, ast.Attribute):
                obj = self.atom(s.target.value, out)
                cur, rhs, res = self.fresh(), self.fresh(), self.fresh()
                out.append(ir.AttrRead(cur, obj, s.target.attr, sp))
                self.into(rhs, s.value, out)
                out.append(ir.Binop(res, cur, op, rhs, sp))
                out.append(ir.AttrWrite(obj, s.target.attr, res, sp))
            else:
                self.error(s, "unsupported augmented assignment target")
        elif isinstance(s, ast.Expr):
            if isinstance(s.value, ast.Constant):
                return
            if isinstance(s.value, ast.Call):
                self.call(None, s.value, out)
            else:
                self.into(self.fresh(), s.value, out)
        elif isinstance(s, ast.If):
            var, swapped = self.cond(s.test, out)
            then, orelse = self.block(s.body), self.block(s.orelse)
            if swapped:
                then, orelse = orelse, then
            out.append(ir.If(var, then, orelse, sp))
        elif isinstance(s, ast.While):
            header: list = []
            var, swapped = self.cond(s.test, header)
            body = self.block(s.body)
            if not swapped and not any(isinstance(h, ir.If) for h in header):
                out.append(ir.While(header, var, body, sp))
                return
            # the condition needs control flow: compute it into a flag before the
            # loop and again at the end of every iteration
            flag = self.fresh()
            out.extend(self.loop_flag(s.test, flag))
            out.append(ir.While([], flag, body + self.loop_flag(s.test, flag), sp))
        elif isinstance(s, ast.Return):
            if s.value is None:
                out.append(ir.Return(None, sp))
            else:
                out.append(ir.Return(self.atom(s.value, out), sp))
        elif isinstance(s, ast.Pass):
            return
        else:
            self.error(s, f"cannot lower {type(s).__name__}")

    def lower(self) -> ir.IRFunction:
        body = self.block(self.fn.body)
        cls = self.qualname.split(".")[0] if "." in self.qualname else None
        return ir.IRFunction(self.fn.name, self.qualname, self.params, body, cls, self.span(self.fn))


def _is_simple(expr, locals_: set, constants: dict) -> bool:
    if isinstance(expr, ast.Name):
        return expr.id in locals_ or expr.id in constants
    return _const_value(expr)[0]


def _assigned_names(stmts) -> set:
    names = set()
    for node in stmts:
        for sub in ast.walk(node):
            if isinstance(sub, ast.Assign):
                for t in sub.targets:
                    if isinstance(t, ast.Name):
                        names.add(t.id)
            elif isinstance(sub, ast.AugAssign) and isinstance(sub.target, ast.Name):
                names.add(sub.target.id)
    return names


class _Lowering:
    def __init__(self, tree: Ast, summaries: SummaryTable):
        self.ast = tree
        self.summaries = summaries
        self.constants = {k: v for k, (_, _, v) in tree.constants.items()}
        self.method_names = {
            q.split(".", 1)[1] for q, (_, _, c) in tree.functions.items() if c is not None
        }

    def run(self) -> ir.IRProgram:
        for q, (path, fn, cls) in self.ast.functions.items():
            if cls is None and self.summaries.has_function(q):
                raise LoweringError(_span(path, fn), f"function {q!r} clashes with a library summary")
        for name, (path, node) in self.ast.classes.items():
            if self.summaries.has_class(name):
                raise LoweringError(_span(path, node), f"class {name!r} clashes with a library summary")
        functions = {}
        for q, (path, fn, _) in self.ast.functions.items():
            functions[q] = _FunctionLowering(self, path, fn, q).lower()
        classes = {}
        for name, (path, node) in self.ast.classes.items():
            methods = {m.name: f"{name}.{m.name}" for m in node.body if isinstance(m, ast.FunctionDef)}
            classes[name] = ir.ClassInfo(name, methods, _span(path, node))
        files = tuple(p for p, _ in self.ast.modules) if self.ast.modules else ()
        return ir.IRProgram(functions, classes, dict(self.constants), self.ast.entry, files)


def lower(tree: Ast, summaries: Optional[SummaryTable] = None) -> ir.IRProgram:
    return _Lowering(tree, summaries or default_summaries()).run()


def load_program(source: SourceProgram, summaries: Optional[SummaryTable] = None) -> ir.IRProgram:
    return lower(parse(source), summaries)
