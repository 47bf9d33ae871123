"""Lexer, parser and printers for the sketch language (SL)."""

from .ast import Repo, Span
from .lexer import LexError, Token, tokenize
from .parser import ParseError, parse_expr, parse_repo, parse_tests, parse_type
from .printer import print_expr, print_pattern, print_repo, print_type
from .repo import (
    HoleNotFound,
    Manifest,
    ManifestError,
    find_hole,
    generative_hole,
    hole_at,
    load_manifest,
    parse_manifest,
    substitute_hole,
)

__all__ = [
    "HoleNotFound", "LexError", "Manifest", "ManifestError", "ParseError", "Repo", "Span",
    "Token", "find_hole", "generative_hole", "hole_at", "load_manifest", "parse_expr",
    "parse_manifest", "parse_repo", "parse_tests", "parse_type", "print_expr",
    "print_pattern", "print_repo", "print_type", "substitute_hole", "tokenize",
]
