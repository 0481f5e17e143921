"""Static kind checking for MiniLang programs.

The check is flow-insensitive about declaration placement: a name declared
anywhere in a function body is considered typed throughout it. Scope is still
enforced at runtime, where an out-of-scope read traps as ``unknown-variable``.

Rules enforced here:
  * binary operands: arith int,int -> int; relational int,int -> bool;
    logical bool,bool -> bool; bitwise int,int -> int
  * ``-`` applies to int, ``!`` to bool, ``++``/``--`` to int variables
  * conditions are bool, switch subjects are int, case labels are distinct
  * calls resolve, match arity and argument kinds; a call used as a statement
    must target a void function; a call used as a value must not
  * returns match the enclosing function's return kind
  * function and variable names are unique per scope (one type per name)
"""

from __future__ import annotations

from . import ast
from .errors import StaticCheckError


def _err(message: str, node: ast.Node) -> StaticCheckError:
    return StaticCheckError(message, node.span.line, node.span.col)


class _Checker:
    def __init__(self, program: ast.Program):
        self.program = program
        self.kinds: dict[int, str] = {}
        self.functions: dict[str, ast.FunctionDef] = {}

    def run(self) -> dict[int, str]:
        for fn in self.program.functions:
            if fn.name in self.functions:
                raise _err(f"duplicate function {fn.name!r}", fn)
            self.functions[fn.name] = fn
        for fn in self.program.functions:
            self.check_function(fn)
        return self.kinds

    def check_function(self, fn: ast.FunctionDef) -> None:
        env: dict[str, str] = {}
        for p in fn.params:
            if p.name in env:
                raise _err(f"duplicate parameter {p.name!r}", fn)
            env[p.name] = p.kind
        for node in ast.walk(fn.body):
            if isinstance(node, ast.VarDecl):
                if node.name in env:
                    raise _err(f"redeclaration of {node.name!r}", node)
                env[node.name] = node.kind
        self.check_block(fn.body, env, fn)

    def check_block(self, block: ast.Block, env: dict[str, str], fn: ast.FunctionDef) -> None:
        for stmt in block.stmts:
            self.check_stmt(stmt, env, fn)

    def check_stmt(self, stmt: ast.Stmt, env: dict[str, str], fn: ast.FunctionDef) -> None:
        if isinstance(stmt, ast.Block):
            self.check_block(stmt, env, fn)
        elif isinstance(stmt, ast.VarDecl):
            if stmt.init is not None:
                got = self.expr(stmt.init, env)
                if got != stmt.kind:
                    raise _err(
                        f"initializer of {stmt.name!r} is {got}, expected {stmt.kind}",
                        stmt,
                    )
        elif isinstance(stmt, ast.Assign):
            if stmt.name not in env:
                raise _err(f"unknown variable {stmt.name!r}", stmt)
            got = self.expr(stmt.value, env)
            if got != env[stmt.name]:
                raise _err(
                    f"assigning {got} to {env[stmt.name]} variable {stmt.name!r}", stmt
                )
        elif isinstance(stmt, ast.Return):
            if stmt.value is None:
                if fn.return_kind != ast.VOID:
                    raise _err(f"{fn.name!r} must return a value", stmt)
            else:
                if fn.return_kind == ast.VOID:
                    raise _err(f"{fn.name!r} is void and returns a value", stmt)
                got = self.expr(stmt.value, env)
                if got != fn.return_kind:
                    raise _err(
                        f"returning {got} from {fn.return_kind} function", stmt
                    )
        elif isinstance(stmt, ast.If):
            if self.expr(stmt.cond, env) != ast.BOOL:
                raise _err("if condition must be bool", stmt.cond)
            self.check_block(stmt.then_block, env, fn)
            if stmt.else_block is not None:
                self.check_block(stmt.else_block, env, fn)
        elif isinstance(stmt, ast.While):
            if self.expr(stmt.cond, env) != ast.BOOL:
                raise _err("while condition must be bool", stmt.cond)
            self.check_block(stmt.body, env, fn)
        elif isinstance(stmt, ast.Switch):
            if self.expr(stmt.subject, env) != ast.INT:
                raise _err("switch subject must be int", stmt.subject)
            seen: set[int] = set()
            for arm in stmt.arms:
                if arm.label in seen:
                    raise _err(f"duplicate case label {arm.label}", arm)
                seen.add(arm.label)
                self.check_block(arm.body, env, fn)
            if stmt.default is not None:
                self.check_block(stmt.default, env, fn)
        elif isinstance(stmt, ast.Call):
            callee = self.resolve(stmt)
            self.check_args(stmt, callee, env)
            if callee.return_kind != ast.VOID:
                raise _err(
                    f"call statement must target a void function, {stmt.name!r} "
                    f"returns {callee.return_kind}",
                    stmt,
                )
        elif isinstance(stmt, ast.IncDec):
            self.expr(stmt, env)
        else:  # pragma: no cover - parser produces no other statement kinds
            raise _err(f"unexpected statement {type(stmt).__name__}", stmt)

    def expr(self, node: ast.Expr, env: dict[str, str]) -> str:
        kind = self._expr_kind(node, env)
        self.kinds[node.node_id] = kind
        return kind

    def _expr_kind(self, node: ast.Expr, env: dict[str, str]) -> str:
        if isinstance(node, ast.IntLit):
            return ast.INT
        if isinstance(node, ast.BoolLit):
            return ast.BOOL
        if isinstance(node, ast.Var):
            if node.name not in env:
                raise _err(f"unknown variable {node.name!r}", node)
            return env[node.name]
        if isinstance(node, ast.IncDec):
            if node.name not in env:
                raise _err(f"unknown variable {node.name!r}", node)
            if env[node.name] != ast.INT:
                raise _err(f"{node.op} applies to int variables", node)
            return ast.INT
        if isinstance(node, ast.Unary):
            got = self.expr(node.operand, env)
            want = ast.INT if node.op == "-" else ast.BOOL
            if got != want:
                raise _err(f"unary {node.op} needs a {want} operand", node)
            return want
        if isinstance(node, ast.Binary):
            left = self.expr(node.left, env)
            right = self.expr(node.right, env)
            if node.op in ast.ARITH_OPS or node.op in ast.BIT_OPS:
                operand, result = ast.INT, ast.INT
            elif node.op in ast.REL_OPS:
                operand, result = ast.INT, ast.BOOL
            else:
                operand, result = ast.BOOL, ast.BOOL
            if left != operand or right != operand:
                raise _err(
                    f"operator {node.op} needs {operand} operands, "
                    f"got {left} and {right}",
                    node,
                )
            return result
        if isinstance(node, ast.Call):
            callee = self.resolve(node)
            self.check_args(node, callee, env)
            if callee.return_kind == ast.VOID:
                raise _err(f"void call {node.name!r} used as a value", node)
            return callee.return_kind
        raise _err(f"unexpected expression {type(node).__name__}", node)

    def resolve(self, call: ast.Call) -> ast.FunctionDef:
        fn = self.functions.get(call.name)
        if fn is None:
            raise _err(f"unknown function {call.name!r}", call)
        return fn

    def check_args(self, call: ast.Call, callee: ast.FunctionDef, env: dict[str, str]) -> None:
        if len(call.args) != len(callee.params):
            raise _err(
                f"{call.name!r} expects {len(callee.params)} arguments, "
                f"got {len(call.args)}",
                call,
            )
        for arg, param in zip(call.args, callee.params):
            got = self.expr(arg, env)
            if got != param.kind:
                raise _err(
                    f"argument {param.name!r} of {call.name!r} is {param.kind}, "
                    f"got {got}",
                    arg,
                )


def check_program(program: ast.Program) -> dict[int, str]:
    """Check the program; returns a map of expression node id -> kind."""
    return _Checker(program).run()
