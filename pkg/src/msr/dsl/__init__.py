"""Scenario language: parser, printer and runner."""

from .builtins import builtin_names, builtin_source
from .lexer import DslError, ParseError, SemanticError
from .parser import parse_expr, parse_syntax
from .printer import print_expr, print_scenario, print_statement
from .runner import Scenario, exit_code, format_text, parse, run, strip_timing, to_json


def builtin(name: str) -> Scenario:
    return parse(builtin_source(name))


__all__ = [
    "DslError", "ParseError", "SemanticError", "Scenario", "builtin", "builtin_names",
    "builtin_source", "exit_code", "format_text", "parse", "parse_expr", "parse_syntax",
    "print_expr", "print_scenario", "print_statement", "run", "strip_timing", "to_json",
]
