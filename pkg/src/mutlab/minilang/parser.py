"""Recursive-descent parser for MiniLang.

Grammar (C-like precedence, all binary operators left-associative):

    program   := fn_def* EOF
    fn_def    := "fn" IDENT "(" [param ("," param)*] ")" "->" kind block
    param     := IDENT ":" ("int" | "bool")
    block     := "{" stmt* "}"
    stmt      := block
               | "let" IDENT ":" ("int"|"bool") ["=" expr] ";"
               | "if" "(" expr ")" block ["else" (block | if-stmt)]
               | "while" "(" expr ")" block
               | "switch" "(" expr ")" "{" ("case" INT ":" block)* ["default" ":" block] "}"
               | "return" [expr] ";"
               | IDENT "=" expr ";"
               | IDENT "(" [expr ("," expr)*] ")" ";"
               | ("++" | "--") IDENT ";"  |  IDENT ("++" | "--") ";"
    expr      := logical-or, descending through &&, |, ^, &, ==/!=,
                 relational, additive, multiplicative, unary, postfix, primary

``parse`` also runs the static kind check, so a returned Program is ready for
mutation and execution.
"""

from __future__ import annotations

from . import ast
from .check import check_program
from .errors import ParseError
from .lexer import Token, tokenize

_KINDS = ("int", "bool")
_RETURN_KINDS = ("int", "bool", "void")

# Binary operators by descending precedence tier.
_BINARY_TIERS = (
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-"),
    ("*", "/", "%"),
)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # --- token plumbing ---

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            got = tok.text or "end of input"
            raise ParseError(f"expected {kind!r}, found {got!r}", tok.line, tok.col)
        return self.next()

    def at(self, kind: str) -> bool:
        return self.peek().kind == kind

    @staticmethod
    def _span(first: Token, last: Token) -> ast.Span:
        return ast.Span(first.line, first.col, first.start, last.end)

    def _close(self, node: ast.Node, first: Token, last: Token) -> ast.Node:
        node.span = self._span(first, last)
        return node

    # --- top level ---

    def program(self) -> ast.Program:
        first = self.peek()
        functions = []
        while not self.at("eof"):
            functions.append(self.function())
        prog = ast.Program(functions)
        return self._close(prog, first, self.peek())  # type: ignore[return-value]

    def function(self) -> ast.FunctionDef:
        first = self.expect("fn")
        name = self.expect("ident").text
        self.expect("(")
        params: list[ast.Param] = []
        if not self.at(")"):
            while True:
                pname = self.expect("ident")
                self.expect(":")
                kind = self.kind_token(_KINDS)
                params.append(
                    ast.Param(pname.text, kind.text, self._span(pname, kind))
                )
                if not self.at(","):
                    break
                self.next()
        self.expect(")")
        self.expect("->")
        ret = self.kind_token(_RETURN_KINDS)
        body = self.block()
        fn = ast.FunctionDef(name, params, ret.text, body)
        return self._close(fn, first, self.tokens[self.pos - 1])  # type: ignore[return-value]

    def kind_token(self, allowed: tuple[str, ...]) -> Token:
        tok = self.peek()
        if tok.kind not in allowed:
            raise ParseError(
                f"expected one of {', '.join(allowed)}, found {tok.text!r}",
                tok.line,
                tok.col,
            )
        return self.next()

    # --- statements ---

    def block(self) -> ast.Block:
        first = self.expect("{")
        stmts: list[ast.Stmt] = []
        while not self.at("}"):
            if self.at("eof"):
                tok = self.peek()
                raise ParseError("unterminated block", tok.line, tok.col)
            stmts.append(self.statement())
        last = self.expect("}")
        blk = ast.Block(stmts)
        return self._close(blk, first, last)  # type: ignore[return-value]

    def statement(self) -> ast.Stmt:
        tok = self.peek()
        if tok.kind == "{":
            return self.block()
        if tok.kind == "let":
            return self.var_decl()
        if tok.kind == "if":
            return self.if_stmt()
        if tok.kind == "while":
            return self.while_stmt()
        if tok.kind == "switch":
            return self.switch_stmt()
        if tok.kind == "return":
            return self.return_stmt()
        if tok.kind in ("++", "--"):
            op = self.next()
            name = self.expect("ident")
            last = self.expect(";")
            node = ast.IncDec(op.kind, True, name.text)
            return self._close(node, op, last)  # type: ignore[return-value]
        if tok.kind == "ident":
            if self.peek(1).kind == "=":
                name = self.next()
                self.next()
                value = self.expression()
                last = self.expect(";")
                node = ast.Assign(name.text, value)
                return self._close(node, name, last)  # type: ignore[return-value]
            if self.peek(1).kind == "(":
                call = self.primary()
                self.expect(";")
                return call  # span covers the call itself, not the semicolon
            if self.peek(1).kind in ("++", "--"):
                name = self.next()
                op = self.next()
                last = self.expect(";")
                node = ast.IncDec(op.kind, False, name.text)
                return self._close(node, name, last)  # type: ignore[return-value]
        raise ParseError(
            f"expected a statement, found {tok.text or 'end of input'!r}",
            tok.line,
            tok.col,
        )

    def var_decl(self) -> ast.VarDecl:
        first = self.expect("let")
        name = self.expect("ident").text
        self.expect(":")
        kind = self.kind_token(_KINDS).text
        init = None
        if self.at("="):
            self.next()
            init = self.expression()
        last = self.expect(";")
        node = ast.VarDecl(name, kind, init)
        return self._close(node, first, last)  # type: ignore[return-value]

    def if_stmt(self) -> ast.If:
        first = self.expect("if")
        self.expect("(")
        cond = self.expression()
        self.expect(")")
        then_block = self.block()
        else_block = None
        if self.at("else"):
            self.next()
            if self.at("if"):
                # `else if` sugar: wrap the nested if in its own block
                nested = self.if_stmt()
                else_block = ast.Block([nested])
                else_block.span = nested.span
            else:
                else_block = self.block()
        node = ast.If(cond, then_block, else_block)
        return self._close(node, first, self.tokens[self.pos - 1])  # type: ignore[return-value]

    def while_stmt(self) -> ast.While:
        first = self.expect("while")
        self.expect("(")
        cond = self.expression()
        self.expect(")")
        body = self.block()
        node = ast.While(cond, body)
        return self._close(node, first, self.tokens[self.pos - 1])  # type: ignore[return-value]

    def switch_stmt(self) -> ast.Switch:
        first = self.expect("switch")
        self.expect("(")
        subject = self.expression()
        self.expect(")")
        self.expect("{")
        arms: list[ast.CaseArm] = []
        default = None
        while not self.at("}"):
            if self.at("case"):
                case_tok = self.next()
                label = self.expect("int")
                self.expect(":")
                body = self.block()
                arm = ast.CaseArm(label.value, body)
                self._close(arm, case_tok, self.tokens[self.pos - 1])
                arms.append(arm)
            elif self.at("default"):
                if default is not None:
                    tok = self.peek()
                    raise ParseError("duplicate default arm", tok.line, tok.col)
                self.next()
                self.expect(":")
                default = self.block()
            else:
                tok = self.peek()
                raise ParseError(
                    f"expected 'case' or 'default', found {tok.text!r}",
                    tok.line,
                    tok.col,
                )
        last = self.expect("}")
        node = ast.Switch(subject, arms, default)
        return self._close(node, first, last)  # type: ignore[return-value]

    def return_stmt(self) -> ast.Return:
        first = self.expect("return")
        value = None
        if not self.at(";"):
            value = self.expression()
        last = self.expect(";")
        node = ast.Return(value)
        return self._close(node, first, last)  # type: ignore[return-value]

    # --- expressions ---

    def expression(self) -> ast.Expr:
        return self.binary(0)

    def binary(self, tier: int) -> ast.Expr:
        if tier >= len(_BINARY_TIERS):
            return self.unary()
        left = self.binary(tier + 1)
        while self.peek().kind in _BINARY_TIERS[tier]:
            op = self.next()
            right = self.binary(tier + 1)
            node = ast.Binary(op.kind, left, right)
            node.span = ast.Span(
                left.span.line, left.span.col, left.span.start, right.span.end
            )
            left = node
        return left

    def unary(self) -> ast.Expr:
        tok = self.peek()
        if tok.kind in ("-", "!"):
            self.next()
            operand = self.unary()
            node = ast.Unary(tok.kind, operand)
            node.span = ast.Span(tok.line, tok.col, tok.start, operand.span.end)
            return node
        if tok.kind in ("++", "--"):
            self.next()
            name = self.expect("ident")
            node = ast.IncDec(tok.kind, True, name.text)
            return self._close(node, tok, name)  # type: ignore[return-value]
        return self.postfix()

    def postfix(self) -> ast.Expr:
        expr = self.primary()
        if self.peek().kind in ("++", "--") and isinstance(expr, ast.Var):
            op = self.next()
            node = ast.IncDec(op.kind, False, expr.name)
            node.span = ast.Span(
                expr.span.line, expr.span.col, expr.span.start, op.end
            )
            return node
        return expr

    def primary(self) -> ast.Expr:
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            node = ast.IntLit(tok.value)
            return self._close(node, tok, tok)  # type: ignore[return-value]
        if tok.kind in ("true", "false"):
            self.next()
            node = ast.BoolLit(tok.kind == "true")
            return self._close(node, tok, tok)  # type: ignore[return-value]
        if tok.kind == "(":
            self.next()
            inner = self.expression()
            self.expect(")")
            return inner
        if tok.kind == "ident":
            name = self.next()
            if self.at("("):
                self.next()
                args: list[ast.Expr] = []
                if not self.at(")"):
                    while True:
                        args.append(self.expression())
                        if not self.at(","):
                            break
                        self.next()
                last = self.expect(")")
                node = ast.Call(name.text, args)
                return self._close(node, name, last)  # type: ignore[return-value]
            node = ast.Var(name.text)
            return self._close(node, name, name)  # type: ignore[return-value]
        raise ParseError(
            f"expected an expression, found {tok.text or 'end of input'!r}",
            tok.line,
            tok.col,
        )


def parse(source: str, *, check: bool = True) -> ast.Program:
    """Parse MiniLang source into a checked Program with preorder node ids."""
    parser = _Parser(tokenize(source))
    program = parser.program()
    ast.assign_ids(program)
    if check:
        check_program(program)
    return program


def parse_expression(source: str) -> ast.Expr:
    """Parse a bare expression fragment (used when applying descriptors)."""
    parser = _Parser(tokenize(source))
    expr = parser.expression()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return expr
