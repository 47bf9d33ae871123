"""Typed-hole static contextualization for LLM code completion."""

__version__ = "0.1.0"
