"""Deterministic tree-walking interpreter with step budgets.

Every evaluated AST node costs exactly one step, charged before evaluation;
an execution that reaches the budget yields a ``budget-exceeded`` Outcome
with ``steps == budget``. Integers are 64-bit two's complement with wrapping
arithmetic and Java-style truncating division, so every mutant has defined
behavior. Runtime failures (division by zero, a valued function falling off
the end, an out-of-scope variable) are reported as traps inside the Outcome;
execute never raises for program behavior.
"""

from __future__ import annotations

import hashlib
import sys
from dataclasses import dataclass

from . import ast
from .errors import TestCaseError
from .testcase import TestCase

RETURNED = "returned"
TRAP = "trap"
BUDGET_EXCEEDED = "budget-exceeded"

TRAP_DIV_BY_ZERO = "div-by-zero"
TRAP_MISSING_RETURN = "missing-return"
TRAP_UNKNOWN_VARIABLE = "unknown-variable"

_U64 = (1 << 64) - 1
_BIAS = 1 << 63

# The evaluator recurses over the AST; deep MiniLang call chains are bounded
# by the step budget, not by CPython's conservative default limit.
if sys.getrecursionlimit() < 100_000:
    sys.setrecursionlimit(100_000)


@dataclass(frozen=True)
class Outcome:
    """Observable behavior of one execution."""

    status: str
    value: int | bool | None = None
    trap: str | None = None
    steps: int = 0
    trace_hash: str | None = None

    def behavior(self) -> tuple:
        """The part compared between original and mutant runs."""
        if self.status == RETURNED:
            return (RETURNED, self.value, isinstance(self.value, bool))
        if self.status == TRAP:
            return (TRAP, self.trap)
        return (BUDGET_EXCEEDED,)


def wrap64(v: int) -> int:
    return ((v + _BIAS) & _U64) - _BIAS


def _trunc_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return -q if (a < 0) != (b < 0) else q


class _TrapSignal(Exception):
    def __init__(self, kind: str):
        self.kind = kind


class _BudgetSignal(Exception):
    pass


class _ReturnSignal(Exception):
    def __init__(self, value: int | bool | None):
        self.value = value


class _Evaluator:
    def __init__(self, program: ast.Program, budget: int, trace: bool):
        self.functions = {fn.name: fn for fn in program.functions}
        self.budget = budget
        self.steps = 0
        self.hasher = hashlib.sha256() if trace else None

    def tick(self, node: ast.Node) -> None:
        if self.steps >= self.budget:
            raise _BudgetSignal()
        self.steps += 1
        if self.hasher is not None:
            self.hasher.update(node.node_id.to_bytes(8, "little", signed=True))

    def call(self, fn: ast.FunctionDef, args: list[int | bool]) -> int | bool | None:
        scopes = [dict(zip((p.name for p in fn.params), args))]
        try:
            self.exec_block(fn.body, scopes)
        except _ReturnSignal as ret:
            return ret.value
        if fn.return_kind == ast.VOID:
            return None
        raise _TrapSignal(TRAP_MISSING_RETURN)

    def lookup(self, scopes: list[dict], name: str) -> int | bool:
        for scope in reversed(scopes):
            if name in scope:
                return scope[name]
        raise _TrapSignal(TRAP_UNKNOWN_VARIABLE)

    def store(self, scopes: list[dict], name: str, value: int | bool) -> None:
        for scope in reversed(scopes):
            if name in scope:
                scope[name] = value
                return
        raise _TrapSignal(TRAP_UNKNOWN_VARIABLE)

    def exec_block(self, block: ast.Block, scopes: list[dict]) -> None:
        self.tick(block)
        scopes.append({})
        try:
            for stmt in block.stmts:
                self.exec_stmt(stmt, scopes)
        finally:
            scopes.pop()

    def exec_stmt(self, stmt: ast.Stmt, scopes: list[dict]) -> None:
        if isinstance(stmt, ast.Block):
            self.exec_block(stmt, scopes)
            return
        if isinstance(stmt, (ast.Call, ast.IncDec)):
            self.eval(stmt, scopes)
            return
        self.tick(stmt)
        if isinstance(stmt, ast.VarDecl):
            if stmt.init is None:
                value: int | bool = 0 if stmt.kind == ast.INT else False
            else:
                value = self.eval(stmt.init, scopes)
            scopes[-1][stmt.name] = value
        elif isinstance(stmt, ast.Assign):
            self.store(scopes, stmt.name, self.eval(stmt.value, scopes))
        elif isinstance(stmt, ast.Return):
            value = None if stmt.value is None else self.eval(stmt.value, scopes)
            raise _ReturnSignal(value)
        elif isinstance(stmt, ast.If):
            if self.eval(stmt.cond, scopes):
                self.exec_block(stmt.then_block, scopes)
            elif stmt.else_block is not None:
                self.exec_block(stmt.else_block, scopes)
        elif isinstance(stmt, ast.While):
            while self.eval(stmt.cond, scopes):
                self.exec_block(stmt.body, scopes)
        elif isinstance(stmt, ast.Switch):
            subject = self.eval(stmt.subject, scopes)
            for arm in stmt.arms:
                if arm.label == subject:
                    self.tick(arm)
                    self.exec_block(arm.body, scopes)
                    return
            if stmt.default is not None:
                self.exec_block(stmt.default, scopes)
        else:  # pragma: no cover
            raise TypeError(f"unexpected statement {type(stmt).__name__}")

    def eval(self, node: ast.Expr, scopes: list[dict]) -> int | bool:
        self.tick(node)
        if isinstance(node, ast.IntLit):
            return node.value
        if isinstance(node, ast.BoolLit):
            return node.value
        if isinstance(node, ast.Var):
            return self.lookup(scopes, node.name)
        if isinstance(node, ast.IncDec):
            old = self.lookup(scopes, node.name)
            new = wrap64(old + (1 if node.op == "++" else -1))
            self.store(scopes, node.name, new)
            return new if node.prefix else old
        if isinstance(node, ast.Unary):
            operand = self.eval(node.operand, scopes)
            if node.op == "-":
                return wrap64(-operand)
            return not operand
        if isinstance(node, ast.Binary):
            return self.binary(node, scopes)
        if isinstance(node, ast.Call):
            fn = self.functions.get(node.name)
            if fn is None:
                raise _TrapSignal(TRAP_UNKNOWN_VARIABLE)
            args = [self.eval(a, scopes) for a in node.args]
            return self.call(fn, args)  # type: ignore[return-value]
        raise TypeError(f"unexpected expression {type(node).__name__}")

    def binary(self, node: ast.Binary, scopes: list[dict]) -> int | bool:
        op = node.op
        if op == "&&":
            return bool(self.eval(node.left, scopes)) and bool(
                self.eval(node.right, scopes)
            )
        if op == "||":
            return bool(self.eval(node.left, scopes)) or bool(
                self.eval(node.right, scopes)
            )
        left = self.eval(node.left, scopes)
        right = self.eval(node.right, scopes)
        if op == "+":
            return wrap64(left + right)
        if op == "-":
            return wrap64(left - right)
        if op == "*":
            return wrap64(left * right)
        if op == "/":
            if right == 0:
                raise _TrapSignal(TRAP_DIV_BY_ZERO)
            return wrap64(_trunc_div(left, right))
        if op == "%":
            if right == 0:
                raise _TrapSignal(TRAP_DIV_BY_ZERO)
            return wrap64(left - _trunc_div(left, right) * right)
        if op == "<":
            return left < right
        if op == "<=":
            return left <= right
        if op == ">":
            return left > right
        if op == ">=":
            return left >= right
        if op == "==":
            return left == right
        if op == "!=":
            return left != right
        if op == "&":
            return wrap64(left & right)
        if op == "|":
            return wrap64(left | right)
        if op == "^":
            return wrap64(left ^ right)
        raise TypeError(f"unexpected operator {op}")


def bind(program: ast.Program, test: TestCase) -> ast.FunctionDef:
    """Resolve the test's entry function and validate argument binding."""
    fn = program.function(test.entry)
    if fn is None:
        raise TestCaseError(f"{test.name}: no function named {test.entry!r}")
    if len(test.args) != len(fn.params):
        raise TestCaseError(
            f"{test.name}: {test.entry} expects {len(fn.params)} arguments, "
            f"got {len(test.args)}"
        )
    for arg, param in zip(test.args, fn.params):
        want_bool = param.kind == ast.BOOL
        if isinstance(arg, bool) != want_bool:
            raise TestCaseError(
                f"{test.name}: argument {param.name!r} must be {param.kind}"
            )
    return fn


def execute(
    program: ast.Program,
    test: TestCase,
    budget: int,
    *,
    trace: bool = False,
) -> Outcome:
    """Run one test case against the program under a step budget."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    fn = bind(program, test)
    ev = _Evaluator(program, budget, trace)
    try:
        value = ev.call(fn, list(test.args))
        status, trap = RETURNED, None
    except _TrapSignal as sig:
        status, value, trap = TRAP, None, sig.kind
    except _BudgetSignal:
        status, value, trap = BUDGET_EXCEEDED, None, None
    digest = ev.hasher.hexdigest() if ev.hasher is not None else None
    return Outcome(status=status, value=value, trap=trap, steps=ev.steps, trace_hash=digest)
