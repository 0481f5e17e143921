"""AST node definitions for MiniLang.

Every node carries a ``node_id`` (preorder index, assigned by the parser) and
a ``span`` locating it in the source text. Structural identity deliberately
ignores both, so a program and its canonical re-parse compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Iterator, Union

INT = "int"
BOOL = "bool"
VOID = "void"

ARITH_OPS = ("+", "-", "*", "/", "%")
REL_OPS = ("<", "<=", ">", ">=", "==", "!=")
LOGIC_OPS = ("&&", "||")
BIT_OPS = ("&", "|", "^")


@dataclass(frozen=True)
class Span:
    """Source location: 1-based line/column plus byte offsets."""

    line: int
    col: int
    start: int
    end: int


_NO_SPAN = Span(0, 0, 0, 0)


@dataclass
class Node:
    node_id: int = field(default=-1, init=False, compare=False)
    span: Span = field(default=_NO_SPAN, init=False, compare=False)

    def children(self) -> tuple["Node", ...]:
        out: list[Node] = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, Node):
                out.append(v)
            elif isinstance(v, list):
                out.extend(c for c in v if isinstance(c, Node))
        return tuple(out)


# --- expressions ---


@dataclass
class IntLit(Node):
    value: int


@dataclass
class BoolLit(Node):
    value: bool


@dataclass
class Var(Node):
    name: str


@dataclass
class Unary(Node):
    op: str  # "-" or "!"
    operand: "Expr"


@dataclass
class IncDec(Node):
    """Pre/post increment or decrement; applies to variables only."""

    op: str  # "++" or "--"
    prefix: bool
    name: str


@dataclass
class Binary(Node):
    op: str
    left: "Expr"
    right: "Expr"


@dataclass
class Call(Node):
    name: str
    args: list["Expr"]


Expr = Union[IntLit, BoolLit, Var, Unary, IncDec, Binary, Call]


# --- statements ---


@dataclass
class VarDecl(Node):
    name: str
    kind: str  # INT or BOOL
    init: Expr | None


@dataclass
class Assign(Node):
    name: str
    value: Expr


@dataclass
class Return(Node):
    value: Expr | None


@dataclass
class If(Node):
    cond: Expr
    then_block: "Block"
    else_block: "Block | None"


@dataclass
class While(Node):
    cond: Expr
    body: "Block"


@dataclass
class CaseArm(Node):
    label: int
    body: "Block"


@dataclass
class Switch(Node):
    subject: Expr
    arms: list[CaseArm]
    default: "Block | None"


@dataclass
class Block(Node):
    stmts: list["Stmt"]


# Call and IncDec double as expression statements (void calls / `i++;`).
Stmt = Union[VarDecl, Assign, Return, If, While, Switch, Block, Call, IncDec]


# --- top level ---


@dataclass(frozen=True)
class Param:
    name: str
    kind: str
    span: Span = _NO_SPAN


@dataclass
class FunctionDef(Node):
    name: str
    params: list[Param]
    return_kind: str
    body: Block


@dataclass
class Program(Node):
    functions: list[FunctionDef]

    def function(self, name: str) -> FunctionDef | None:
        for fn in self.functions:
            if fn.name == name:
                return fn
        return None


def walk(node: Node) -> Iterator[Node]:
    """Preorder traversal."""
    yield node
    for child in node.children():
        yield from walk(child)


def assign_ids(program: Program) -> Program:
    """Number all nodes with dense preorder ids, starting at 0."""
    for i, node in enumerate(walk(program)):
        node.node_id = i
    return program


def find_node(program: Program, node_id: int) -> Node | None:
    for node in walk(program):
        if node.node_id == node_id:
            return node
    return None


def structure_key(node: Node) -> tuple:
    """Hashable shape of a subtree, ignoring node ids and spans."""
    attrs: list = [type(node).__name__]
    for f in fields(node):
        if f.name in ("node_id", "span"):
            continue
        v = getattr(node, f.name)
        if isinstance(v, Node):
            attrs.append(structure_key(v))
        elif isinstance(v, list):
            attrs.append(tuple(_item_key(c) for c in v))
        else:
            attrs.append(_item_key(v))
    return tuple(attrs)


def _item_key(v: object) -> object:
    if isinstance(v, Node):
        return structure_key(v)
    if isinstance(v, Param):
        return (v.name, v.kind)
    return v


def structurally_equal(a: Node, b: Node) -> bool:
    return structure_key(a) == structure_key(b)
