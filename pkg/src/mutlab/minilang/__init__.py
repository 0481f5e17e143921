"""MiniLang: lexer, parser, canonical printer, static checker, interpreter."""

from . import ast
from .check import check_program
from .errors import MiniLangError, ParseError, StaticCheckError, TestCaseError
from .interp import (
    BUDGET_EXCEEDED,
    RETURNED,
    TRAP,
    TRAP_DIV_BY_ZERO,
    TRAP_MISSING_RETURN,
    TRAP_UNKNOWN_VARIABLE,
    Outcome,
    execute,
    wrap64,
)
from .parser import parse, parse_expression
from .printer import pretty_print, print_expr
from .testcase import Expectation, TestCase, load_tests

__all__ = [
    "ast",
    "check_program",
    "MiniLangError",
    "ParseError",
    "StaticCheckError",
    "TestCaseError",
    "Outcome",
    "execute",
    "wrap64",
    "RETURNED",
    "TRAP",
    "BUDGET_EXCEEDED",
    "TRAP_DIV_BY_ZERO",
    "TRAP_MISSING_RETURN",
    "TRAP_UNKNOWN_VARIABLE",
    "parse",
    "parse_expression",
    "pretty_print",
    "print_expr",
    "Expectation",
    "TestCase",
    "load_tests",
]
