"""Normalized syntax trees, grammar adapters and scope queries."""

from .grammars import (
    GrammarAdapter,
    JavaAdapter,
    adapter_for_path,
    get_adapter,
    parse_source,
    register_adapter,
)
from .queries import VariableInfo, is_variable_use, resolve_variable, statement_context
from .tree import (
    ANCHOR_STATEMENT_KINDS,
    AstNode,
    NormalizedAst,
    STATEMENT_KINDS,
    all_subtree_digests,
    isomorphic,
    subtree_digest,
    validate_tree,
)

__all__ = [
    "ANCHOR_STATEMENT_KINDS",
    "AstNode",
    "GrammarAdapter",
    "JavaAdapter",
    "NormalizedAst",
    "STATEMENT_KINDS",
    "VariableInfo",
    "adapter_for_path",
    "all_subtree_digests",
    "get_adapter",
    "is_variable_use",
    "isomorphic",
    "parse_source",
    "register_adapter",
    "resolve_variable",
    "statement_context",
    "subtree_digest",
    "validate_tree",
]
