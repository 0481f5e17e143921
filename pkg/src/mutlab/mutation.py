"""Mutation operator registry and mutant generation.

Two operator sets are supported:

* ``common`` — the PIT-style set: CondBoundary, NegateCond, RemoveCond, Math,
  Increments, InvertNeg, InlineConst, ReturnValues, VoidMethodCall,
  MethodCall, MemberVariable, Switch.
* ``comprehensive`` — a superset adding ABS, AOD, AOR, CRCR, OBBN, ROR, UOI.
  Overlapping common operators are absorbed by their superset operator
  (CondBoundary/NegateCond by ROR, Math by AOR, InlineConst int sites by
  CRCR), so no site is emitted twice; bool-literal flips stay under
  InlineConst because CRCR only covers int constants.

Every operator is applied at every matching site of the canonical form of the
program. Each candidate becomes a single-edit mutant; candidates whose
mutated canonical text equals the original, or duplicates an earlier
candidate's text, are dropped. Mutant ids are dense, assigned after dedup in
(node id, operator name, replacement text) order, so they are stable across
runs.
"""

from __future__ import annotations

import copy
import difflib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .minilang import ast
from .minilang.check import check_program
from .minilang.errors import MiniLangError
from .minilang.parser import parse, parse_expression
from .minilang.printer import pretty_print, print_expr

COMMON = "common"
COMPREHENSIVE = "comprehensive"

COMMON_OPERATORS = (
    "CondBoundary",
    "NegateCond",
    "RemoveCond",
    "Math",
    "Increments",
    "InvertNeg",
    "InlineConst",
    "ReturnValues",
    "VoidMethodCall",
    "MethodCall",
    "MemberVariable",
    "Switch",
)
COMPREHENSIVE_ONLY_OPERATORS = ("ABS", "AOD", "AOR", "CRCR", "OBBN", "ROR", "UOI")
ALL_OPERATORS = COMMON_OPERATORS + COMPREHENSIVE_ONLY_OPERATORS

# Operators whose sites are wholly absorbed by a superset operator in
# comprehensive mode (the overlap-removal rule).
_ABSORBED = {"CondBoundary": "ROR", "NegateCond": "ROR", "Math": "AOR"}

_COND_BOUNDARY_PAIR = {"<": "<=", "<=": "<", ">": ">=", ">=": ">"}
_NEGATE_PAIR = {"==": "!=", "!=": "==", "<": ">=", ">=": "<", ">": "<=", "<=": ">"}
_MATH_PAIR = {"+": "-", "-": "+", "*": "/", "/": "*", "%": "*"}
_OBBN_PAIR = {"&": "|", "|": "&"}


class StaleDescriptorError(MiniLangError):
    """Descriptor does not match the program it is being applied to."""


@dataclass(frozen=True)
class MutantDescriptor:
    """One single-point syntactic change."""

    mutant_id: int
    operator: str
    set_name: str  # "common" or "comprehensive"
    node_id: int
    span: ast.Span
    original: str
    replacement: str  # "" means the node is deleted
    description: str


@dataclass(frozen=True)
class _Candidate:
    node: ast.Node
    operator: str
    replacement: str  # "" = delete
    note: str


class _Sites:
    """All mutation-relevant positions of the canonical program."""

    def __init__(self, program: ast.Program, kinds: dict[int, str]):
        self.program = program
        self.kinds = kinds
        self.functions = {fn.name: fn for fn in program.functions}
        self.binaries: list[ast.Binary] = []
        self.int_lits: list[ast.IntLit] = []
        self.bool_lits: list[ast.BoolLit] = []
        self.vars: list[ast.Var] = []
        self.unaries: list[ast.Unary] = []
        self.incdecs: list[tuple[ast.IncDec, bool]] = []  # (node, stmt_position)
        self.conds: list[ast.Expr] = []  # if/while conditions
        self.returns: list[tuple[ast.Return, str]] = []  # (node, fn return kind)
        self.calls: list[tuple[ast.Call, bool]] = []  # (node, stmt_position)
        self.rhs: list[tuple[ast.Expr, str]] = []  # assignment/init RHS, var kind
        self.switches: list[ast.Switch] = []
        for fn in program.functions:
            self._block(fn.body, fn)

    def _block(self, block: ast.Block, fn: ast.FunctionDef) -> None:
        for stmt in block.stmts:
            self._stmt(stmt, fn)

    def _stmt(self, stmt: ast.Stmt, fn: ast.FunctionDef) -> None:
        if isinstance(stmt, ast.Block):
            self._block(stmt, fn)
        elif isinstance(stmt, ast.VarDecl):
            if stmt.init is not None:
                self.rhs.append((stmt.init, stmt.kind))
                self._expr(stmt.init)
        elif isinstance(stmt, ast.Assign):
            self.rhs.append((stmt.value, self.kinds[stmt.value.node_id]))
            self._expr(stmt.value)
        elif isinstance(stmt, ast.Return):
            if stmt.value is not None:
                self.returns.append((stmt, fn.return_kind))
                self._expr(stmt.value)
        elif isinstance(stmt, ast.If):
            self.conds.append(stmt.cond)
            self._expr(stmt.cond)
            self._block(stmt.then_block, fn)
            if stmt.else_block is not None:
                self._block(stmt.else_block, fn)
        elif isinstance(stmt, ast.While):
            self.conds.append(stmt.cond)
            self._expr(stmt.cond)
            self._block(stmt.body, fn)
        elif isinstance(stmt, ast.Switch):
            self.switches.append(stmt)
            self._expr(stmt.subject)
            for arm in stmt.arms:
                self._block(arm.body, fn)
            if stmt.default is not None:
                self._block(stmt.default, fn)
        elif isinstance(stmt, ast.Call):
            self.calls.append((stmt, True))
            for arg in stmt.args:
                self._expr(arg)
        elif isinstance(stmt, ast.IncDec):
            self.incdecs.append((stmt, True))
        else:  # pragma: no cover
            raise TypeError(f"unexpected statement {type(stmt).__name__}")

    def _expr(self, node: ast.Expr) -> None:
        if isinstance(node, ast.IntLit):
            self.int_lits.append(node)
        elif isinstance(node, ast.BoolLit):
            self.bool_lits.append(node)
        elif isinstance(node, ast.Var):
            self.vars.append(node)
        elif isinstance(node, ast.IncDec):
            self.incdecs.append((node, False))
        elif isinstance(node, ast.Unary):
            self.unaries.append(node)
            self._expr(node.operand)
        elif isinstance(node, ast.Binary):
            self.binaries.append(node)
            self._expr(node.left)
            self._expr(node.right)
        elif isinstance(node, ast.Call):
            self.calls.append((node, False))
            for arg in node.args:
                self._expr(arg)

    def bool_exprs(self) -> list[ast.Expr]:
        out = []
        for node in ast.walk(self.program):
            if self.kinds.get(node.node_id) == ast.BOOL:
                out.append(node)
        return out


def _default_text(kind: str) -> str:
    return "0" if kind == ast.INT else "false"


def _int_text(value: int) -> str:
    return str(value) if value >= 0 else f"-{-value}"


# --- operator rules; each yields candidates for every matching site ---


def _cond_boundary(s: _Sites) -> Iterator[_Candidate]:
    for b in s.binaries:
        if b.op in _COND_BOUNDARY_PAIR:
            repl = print_expr(ast.Binary(_COND_BOUNDARY_PAIR[b.op], b.left, b.right))
            yield _Candidate(b, "CondBoundary", repl, f"{b.op} -> {_COND_BOUNDARY_PAIR[b.op]}")


def _negate_cond(s: _Sites) -> Iterator[_Candidate]:
    for b in s.binaries:
        if b.op in _NEGATE_PAIR:
            repl = print_expr(ast.Binary(_NEGATE_PAIR[b.op], b.left, b.right))
            yield _Candidate(b, "NegateCond", repl, f"{b.op} -> {_NEGATE_PAIR[b.op]}")


def _remove_cond(s: _Sites) -> Iterator[_Candidate]:
    for cond in s.conds:
        yield _Candidate(cond, "RemoveCond", "true", "condition -> true")
        yield _Candidate(cond, "RemoveCond", "false", "condition -> false")


def _math(s: _Sites) -> Iterator[_Candidate]:
    for b in s.binaries:
        if b.op in _MATH_PAIR:
            repl = print_expr(ast.Binary(_MATH_PAIR[b.op], b.left, b.right))
            yield _Candidate(b, "Math", repl, f"{b.op} -> {_MATH_PAIR[b.op]}")


def _increments(s: _Sites) -> Iterator[_Candidate]:
    for node, _stmt_pos in s.incdecs:
        other = "--" if node.op == "++" else "++"
        repl = print_expr(ast.IncDec(other, node.prefix, node.name))
        yield _Candidate(node, "Increments", repl, f"{node.op} -> {other}")


def _invert_neg(s: _Sites) -> Iterator[_Candidate]:
    for u in s.unaries:
        if u.op == "-" and isinstance(u.operand, ast.Var):
            yield _Candidate(u, "InvertNeg", u.operand.name, "remove negation")


def _inline_const(s: _Sites, int_sites: bool) -> Iterator[_Candidate]:
    if int_sites:
        for lit in s.int_lits:
            new = 0 if lit.value == 1 else lit.value + 1
            yield _Candidate(lit, "InlineConst", _int_text(new), f"{lit.value} -> {new}")
    for lit in s.bool_lits:
        repl = "false" if lit.value else "true"
        yield _Candidate(lit, "InlineConst", repl, "flip boolean constant")


def _return_values(s: _Sites) -> Iterator[_Candidate]:
    for ret, kind in s.returns:
        value = ret.value
        assert value is not None
        if kind == ast.INT:
            if isinstance(value, ast.IntLit) and value.value == 0:
                yield _Candidate(value, "ReturnValues", "1", "return 0 -> return 1")
            else:
                repl = print_expr(ast.Binary("+", value, ast.IntLit(1)))
                yield _Candidate(value, "ReturnValues", repl, "return e -> return e + 1")
        else:
            repl = print_expr(ast.Unary("!", value))
            yield _Candidate(value, "ReturnValues", repl, "return e -> return !e")


def _void_method_call(s: _Sites) -> Iterator[_Candidate]:
    for call, stmt_pos in s.calls:
        if stmt_pos:
            yield _Candidate(call, "VoidMethodCall", "", f"delete call to {call.name}")


def _method_call(s: _Sites) -> Iterator[_Candidate]:
    for call, stmt_pos in s.calls:
        if not stmt_pos:
            kind = s.functions[call.name].return_kind
            repl = _default_text(kind)
            yield _Candidate(call, "MethodCall", repl, f"call {call.name} -> {repl}")


def _member_variable(s: _Sites) -> Iterator[_Candidate]:
    for value, kind in s.rhs:
        repl = _default_text(kind)
        yield _Candidate(value, "MemberVariable", repl, f"right-hand side -> {repl}")


def _switch(s: _Sites) -> Iterator[_Candidate]:
    for sw in s.switches:
        if sw.default is None:
            continue  # rule presupposes a default arm
        for arm in sw.arms:
            yield _Candidate(arm, "Switch", "", f"case {arm.label} falls to default")


def _abs(s: _Sites) -> Iterator[_Candidate]:
    for var in s.vars:
        if s.kinds[var.node_id] == ast.INT:
            yield _Candidate(var, "ABS", f"-{var.name}", f"{var.name} -> -{var.name}")


def _aod(s: _Sites) -> Iterator[_Candidate]:
    for b in s.binaries:
        if b.op in ast.ARITH_OPS:
            yield _Candidate(b, "AOD", print_expr(b.left), "keep left operand")
            yield _Candidate(b, "AOD", print_expr(b.right), "keep right operand")


def _aor(s: _Sites) -> Iterator[_Candidate]:
    for b in s.binaries:
        if b.op in ast.ARITH_OPS:
            for other in ast.ARITH_OPS:
                if other != b.op:
                    repl = print_expr(ast.Binary(other, b.left, b.right))
                    yield _Candidate(b, "AOR", repl, f"{b.op} -> {other}")


def _crcr(s: _Sites) -> Iterator[_Candidate]:
    for lit in s.int_lits:
        seen: set[int] = set()
        for value in (-lit.value, 1, 0, lit.value + 1, lit.value - 1):
            if value == lit.value or value in seen:
                continue
            seen.add(value)
            yield _Candidate(lit, "CRCR", _int_text(value), f"{lit.value} -> {value}")


def _obbn(s: _Sites) -> Iterator[_Candidate]:
    for b in s.binaries:
        if b.op in _OBBN_PAIR:
            repl = print_expr(ast.Binary(_OBBN_PAIR[b.op], b.left, b.right))
            yield _Candidate(b, "OBBN", repl, f"{b.op} -> {_OBBN_PAIR[b.op]}")


def _ror(s: _Sites) -> Iterator[_Candidate]:
    for b in s.binaries:
        if b.op in ast.REL_OPS:
            for other in ast.REL_OPS:
                if other != b.op:
                    repl = print_expr(ast.Binary(other, b.left, b.right))
                    yield _Candidate(b, "ROR", repl, f"{b.op} -> {other}")


def _uoi(s: _Sites) -> Iterator[_Candidate]:
    for var in s.vars:
        if s.kinds[var.node_id] == ast.INT:
            n = var.name
            for repl in (f"++{n}", f"--{n}", f"{n}++", f"{n}--"):
                yield _Candidate(var, "UOI", repl, f"{n} -> {repl}")
    for node in s.bool_exprs():
        repl = print_expr(ast.Unary("!", node))
        yield _Candidate(node, "UOI", repl, "negate boolean expression")
    for u in s.unaries:
        yield _Candidate(u, "UOI", print_expr(u.operand), f"remove unary {u.op}")
    for node, stmt_pos in s.incdecs:
        if stmt_pos:
            # `i;` is not a statement; removing the operator deletes the
            # (now effect-free) statement instead.
            yield _Candidate(node, "UOI", "", f"remove {node.op} statement")
        else:
            yield _Candidate(node, "UOI", node.name, f"remove {node.op}")


def _collect_candidates(s: _Sites, which: str) -> list[_Candidate]:
    out: list[_Candidate] = []
    comprehensive = which == COMPREHENSIVE
    if not comprehensive:
        out += _cond_boundary(s)
        out += _negate_cond(s)
        out += _math(s)
    out += _remove_cond(s)
    out += _increments(s)
    out += _invert_neg(s)
    out += _inline_const(s, int_sites=not comprehensive)
    out += _return_values(s)
    out += _void_method_call(s)
    out += _method_call(s)
    out += _member_variable(s)
    out += _switch(s)
    if comprehensive:
        out += _abs(s)
        out += _aod(s)
        out += _aor(s)
        out += _crcr(s)
        out += _obbn(s)
        out += _ror(s)
        out += _uoi(s)
    return out


# --- applying edits ---


def _delete_node(work: ast.Program, target: ast.Node) -> None:
    for node in ast.walk(work):
        if isinstance(node, ast.Block) and target in node.stmts:
            node.stmts.remove(target)
            return
        if isinstance(node, ast.Switch) and target in node.arms:
            node.arms.remove(target)
            return
    raise StaleDescriptorError("deletion target is not a statement or case arm")


def _replace_node(work: ast.Program, target: ast.Node, new: ast.Expr) -> None:
    for node in ast.walk(work):
        if isinstance(node, ast.Block):
            for i, stmt in enumerate(node.stmts):
                if stmt is target:
                    node.stmts[i] = new  # type: ignore[assignment]
                    return
        if isinstance(node, ast.Unary) and node.operand is target:
            node.operand = new
            return
        if isinstance(node, ast.Binary):
            if node.left is target:
                node.left = new
                return
            if node.right is target:
                node.right = new
                return
        if isinstance(node, ast.Call):
            for i, arg in enumerate(node.args):
                if arg is target:
                    node.args[i] = new
                    return
        if isinstance(node, ast.Assign) and node.value is target:
            node.value = new
            return
        if isinstance(node, ast.VarDecl) and node.init is target:
            node.init = new
            return
        if isinstance(node, ast.Return) and node.value is target:
            node.value = new
            return
        if isinstance(node, ast.If) and node.cond is target:
            node.cond = new
            return
        if isinstance(node, ast.While) and node.cond is target:
            node.cond = new
            return
        if isinstance(node, ast.Switch) and node.subject is target:
            node.subject = new
            return
    raise StaleDescriptorError("replacement target not found in program")


def _edit(base: ast.Program, node_id: int, replacement: str) -> ast.Program:
    """Apply one edit against a canonical AST; returns a freshly parsed tree."""
    work = copy.deepcopy(base)
    target = ast.find_node(work, node_id)
    if target is None:
        raise StaleDescriptorError(f"no node with id {node_id}")
    if replacement == "":
        _delete_node(work, target)
    else:
        _replace_node(work, target, parse_expression(replacement))
    return parse(pretty_print(work))


def _canonical(program: ast.Program) -> tuple[str, ast.Program]:
    text = pretty_print(program)
    return text, parse(text, check=False)


def generate_mutants(program: ast.Program, which: str = COMMON) -> list[MutantDescriptor]:
    """Generate all mutants of ``program`` for the given operator set.

    Descriptors are deterministic: ordered by (node id, operator name,
    replacement text), deduplicated by mutated canonical text, with dense ids
    assigned afterwards.
    """
    if which not in (COMMON, COMPREHENSIVE):
        raise ValueError(f"unknown operator set {which!r}")
    canonical_text, base = _canonical(program)
    kinds = check_program(base)
    sites = _Sites(base, kinds)

    candidates = _collect_candidates(sites, which)
    candidates.sort(key=lambda c: (c.node.node_id, c.operator, c.replacement))

    descriptors: list[MutantDescriptor] = []
    seen_texts: set[str] = set()
    for cand in candidates:
        mutated_text = pretty_print(
            _edit(base, cand.node.node_id, cand.replacement)
        )
        if mutated_text == canonical_text or mutated_text in seen_texts:
            continue
        seen_texts.add(mutated_text)
        span = cand.node.span
        original = canonical_text[span.start : span.end]
        if cand.replacement:
            action = f"replace `{original}` with `{cand.replacement}`"
        else:
            action = f"delete `{original}`"
        descriptors.append(
            MutantDescriptor(
                mutant_id=len(descriptors),
                operator=cand.operator,
                set_name=COMMON if cand.operator in COMMON_OPERATORS else COMPREHENSIVE,
                node_id=cand.node.node_id,
                span=span,
                original=original,
                replacement=cand.replacement,
                description=f"{cand.operator} at line {span.line}: {action} ({cand.note})",
            )
        )
    return descriptors


def apply_mutant(program: ast.Program, descriptor: MutantDescriptor) -> ast.Program:
    """Materialize one mutant. ``program`` is left untouched."""
    canonical_text, base = _canonical(program)
    node = ast.find_node(base, descriptor.node_id)
    if node is None:
        raise StaleDescriptorError(f"no node with id {descriptor.node_id}")
    if node.span != descriptor.span:
        raise StaleDescriptorError(
            f"span mismatch at node {descriptor.node_id}: "
            f"{node.span} != {descriptor.span}"
        )
    if canonical_text[node.span.start : node.span.end] != descriptor.original:
        raise StaleDescriptorError(
            f"original fragment mismatch at node {descriptor.node_id}"
        )
    mutated = _edit(base, descriptor.node_id, descriptor.replacement)
    if pretty_print(mutated) == canonical_text:
        raise StaleDescriptorError("descriptor does not change the program")
    return mutated


def mutated_text(program: ast.Program, descriptor: MutantDescriptor) -> str:
    return pretty_print(apply_mutant(program, descriptor))


def edit_key(descriptor: MutantDescriptor) -> tuple[int, str]:
    """Identity of the underlying edit; equal keys produce equal mutants."""
    return (descriptor.node_id, descriptor.replacement)


def mutant_diff(program: ast.Program, descriptor: MutantDescriptor) -> str:
    """Unified diff between the canonical original and one mutant."""
    original = pretty_print(program)
    mutated = mutated_text(program, descriptor)
    lines = difflib.unified_diff(
        original.splitlines(keepends=True),
        mutated.splitlines(keepends=True),
        fromfile="original",
        tofile=f"mutant-{descriptor.mutant_id} ({descriptor.operator})",
    )
    return "".join(lines)


def descriptor_to_dict(descriptor: MutantDescriptor) -> dict:
    return {
        "id": descriptor.mutant_id,
        "operator": descriptor.operator,
        "set": descriptor.set_name,
        "span": {
            "line": descriptor.span.line,
            "col": descriptor.span.col,
            "start": descriptor.span.start,
            "end": descriptor.span.end,
        },
        "original": descriptor.original,
        "replacement": descriptor.replacement,
        "description": descriptor.description,
    }


def descriptor_from_dict(raw: dict) -> MutantDescriptor:
    span = raw["span"]
    return MutantDescriptor(
        mutant_id=raw["id"],
        operator=raw["operator"],
        set_name=raw["set"],
        node_id=raw.get("node_id", -1),
        span=ast.Span(span["line"], span["col"], span["start"], span["end"]),
        original=raw["original"],
        replacement=raw["replacement"],
        description=raw["description"],
    )


def write_mutants_json(descriptors: list[MutantDescriptor], path: str | Path) -> None:
    payload = [descriptor_to_dict(d) for d in descriptors]
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
