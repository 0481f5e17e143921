"""Canonical text rendering for MiniLang ASTs.

The output is the canonical form used for mutant deduplication: fixed
two-space indentation, one statement per line, single spaces around binary
operators, and the minimal parentheses required to re-parse to a structurally
identical tree. ``pretty_print(parse(pretty_print(p))) == pretty_print(p)``.
"""

from __future__ import annotations

from . import ast

_PREC = {
    "||": 1,
    "&&": 2,
    "|": 3,
    "^": 4,
    "&": 5,
    "==": 6,
    "!=": 6,
    "<": 7,
    "<=": 7,
    ">": 7,
    ">=": 7,
    "+": 8,
    "-": 8,
    "*": 9,
    "/": 9,
    "%": 9,
}
_UNARY_PREC = 10
_POSTFIX_PREC = 11
_ATOM_PREC = 12


def _expr(node: ast.Expr) -> tuple[str, int]:
    if isinstance(node, ast.IntLit):
        return str(node.value), _ATOM_PREC
    if isinstance(node, ast.BoolLit):
        return ("true" if node.value else "false"), _ATOM_PREC
    if isinstance(node, ast.Var):
        return node.name, _ATOM_PREC
    if isinstance(node, ast.Call):
        args = ", ".join(_expr(a)[0] for a in node.args)
        return f"{node.name}({args})", _ATOM_PREC
    if isinstance(node, ast.IncDec):
        if node.prefix:
            return f"{node.op}{node.name}", _UNARY_PREC
        return f"{node.name}{node.op}", _POSTFIX_PREC
    if isinstance(node, ast.Unary):
        text, prec = _expr(node.operand)
        # Parenthesize any non-atomic operand; avoids `--x` reading as a
        # decrement and keeps nested unaries unambiguous.
        if prec < _ATOM_PREC:
            text = f"({text})"
        return f"{node.op}{text}", _UNARY_PREC
    if isinstance(node, ast.Binary):
        prec = _PREC[node.op]
        left, lprec = _expr(node.left)
        right, rprec = _expr(node.right)
        if lprec < prec:
            left = f"({left})"
        if rprec <= prec:  # left-associative: parenthesize equal-tier right child
            right = f"({right})"
        return f"{left} {node.op} {right}", prec
    raise TypeError(f"not an expression node: {type(node).__name__}")


def print_expr(node: ast.Expr) -> str:
    """Canonical text of a single expression."""
    return _expr(node)[0]


def _stmt_lines(stmt: ast.Stmt, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(stmt, ast.VarDecl):
        if stmt.init is None:
            return [f"{pad}let {stmt.name}: {stmt.kind};"]
        return [f"{pad}let {stmt.name}: {stmt.kind} = {print_expr(stmt.init)};"]
    if isinstance(stmt, ast.Assign):
        return [f"{pad}{stmt.name} = {print_expr(stmt.value)};"]
    if isinstance(stmt, (ast.Call, ast.IncDec)):
        return [f"{pad}{print_expr(stmt)};"]
    if isinstance(stmt, ast.Return):
        if stmt.value is None:
            return [f"{pad}return;"]
        return [f"{pad}return {print_expr(stmt.value)};"]
    if isinstance(stmt, ast.If):
        lines = [f"{pad}if ({print_expr(stmt.cond)}) {{"]
        lines += _block_lines(stmt.then_block, indent + 1)
        if stmt.else_block is None:
            lines.append(f"{pad}}}")
        else:
            lines.append(f"{pad}}} else {{")
            lines += _block_lines(stmt.else_block, indent + 1)
            lines.append(f"{pad}}}")
        return lines
    if isinstance(stmt, ast.While):
        lines = [f"{pad}while ({print_expr(stmt.cond)}) {{"]
        lines += _block_lines(stmt.body, indent + 1)
        lines.append(f"{pad}}}")
        return lines
    if isinstance(stmt, ast.Switch):
        lines = [f"{pad}switch ({print_expr(stmt.subject)}) {{"]
        inner = "  " * (indent + 1)
        for arm in stmt.arms:
            lines.append(f"{inner}case {arm.label}: {{")
            lines += _block_lines(arm.body, indent + 2)
            lines.append(f"{inner}}}")
        if stmt.default is not None:
            lines.append(f"{inner}default: {{")
            lines += _block_lines(stmt.default, indent + 2)
            lines.append(f"{inner}}}")
        lines.append(f"{pad}}}")
        return lines
    if isinstance(stmt, ast.Block):
        return [f"{pad}{{"] + _block_lines(stmt, indent + 1) + [f"{pad}}}"]
    raise TypeError(f"not a statement node: {type(stmt).__name__}")


def _block_lines(block: ast.Block, indent: int) -> list[str]:
    lines: list[str] = []
    for stmt in block.stmts:
        lines += _stmt_lines(stmt, indent)
    return lines


def _function_text(fn: ast.FunctionDef) -> str:
    params = ", ".join(f"{p.name}: {p.kind}" for p in fn.params)
    lines = [f"fn {fn.name}({params}) -> {fn.return_kind} {{"]
    lines += _block_lines(fn.body, 1)
    lines.append("}")
    return "\n".join(lines) + "\n"


def pretty_print(program: ast.Program) -> str:
    """Canonical text of a whole program; functions separated by blank lines."""
    return "\n".join(_function_text(fn) for fn in program.functions)
