"""A deterministic toy imperative language with a mutation engine.

The language exists so the analysis modules can be exercised end to end:
parse a program, generate single-site mutants, execute everything against
a test suite, and collect the results into a behavior matrix.
"""
from .syntax import (
    Assign,
    BinOp,
    If,
    IntLit,
    Program,
    Return,
    UnaryOp,
    Var,
    While,
    parse,
    render,
)
from .interp import DEFAULT_BUDGET, TestCase, behavior_matrix, execute
from .mutate import (
    ALL_OPERATORS,
    MutantDescriptor,
    apply_descriptor,
    mutate_all,
)

__all__ = [
    "ALL_OPERATORS",
    "Assign",
    "BinOp",
    "DEFAULT_BUDGET",
    "If",
    "IntLit",
    "MutantDescriptor",
    "Program",
    "Return",
    "TestCase",
    "UnaryOp",
    "Var",
    "While",
    "apply_descriptor",
    "behavior_matrix",
    "execute",
    "mutate_all",
    "parse",
    "render",
]
