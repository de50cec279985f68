"""Structural and scope queries over normalized trees.

All queries are read-only; scope tables are built once per tree on first
use and cached on the tree object.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import NotAStatementError
from .java_lexer import PRIMITIVE_TYPES
from .tree import NormalizedAst, STATEMENT_KINDS


def statement_context(
    ast: NormalizedAst, stmt: int, k: int = 3
) -> tuple[list[int], list[int]]:
    """Up to k statement siblings before/after stmt in its own block.

    Both lists are in source order; statements outside the enclosing block
    are never included, so the first statement of a block has no formers
    even when the block's parent has siblings.
    """
    if ast.kind(stmt) not in STATEMENT_KINDS:
        raise NotAStatementError(f"node {stmt} has kind {ast.kind(stmt)!r}")
    parent = ast.parent(stmt)
    if parent == -1 or ast.kind(parent) != "block":
        return [], []
    siblings = [c for c in ast.children(parent) if ast.kind(c) in STATEMENT_KINDS]
    idx = siblings.index(stmt)
    return siblings[max(0, idx - k) : idx], siblings[idx + 1 : idx + 1 + k]


@dataclass(frozen=True)
class VariableInfo:
    name: str
    scope: str  # local | global
    category: str  # primitive | object | abstract | enumeration
    declared_in: int | None


def resolve_variable(ast: NormalizedAst, ident: int) -> VariableInfo:
    """Classify an identifier occurrence by scope and declared-type category.

    Locals are parameters and declarations inside the enclosing method or
    constructor body; everything else (fields, unresolved names) is global.
    Unresolvable identifiers fall back to (global, object).
    """
    index = _scope_index(ast)
    name = ast.label(ident)

    if _is_field_access_name(ast, ident):
        decl = index.field_decl(ast, ident, name)
        if decl is not None:
            return VariableInfo(name, "global", index.category_of(decl), decl)
        return VariableInfo(name, "global", "object", None)

    decl = index.local_decl(ast, ident, name)
    if decl is not None:
        return VariableInfo(name, "local", index.category_of(decl), decl)
    decl = index.field_decl(ast, ident, name)
    if decl is not None:
        return VariableInfo(name, "global", index.category_of(decl), decl)
    return VariableInfo(name, "global", "object", None)


def enclosing(ast: NormalizedAst, node: int, kinds: tuple[str, ...]) -> int | None:
    cur = node
    while cur != -1:
        if ast.kind(cur) in kinds:
            return cur
        cur = ast.parent(cur)
    return None


def is_variable_use(ast: NormalizedAst, ident: int) -> bool:
    """True when an identifier leaf denotes a variable rather than a name.

    Method-call names, declaration names of types/methods/constructors and
    the this/super keywords do not count; declarator and parameter names do
    (they introduce variables).
    """
    if ast.kind(ident) != "identifier" or ast.label(ident) in ("this", "super"):
        return False
    parent = ast.parent(ident)
    if parent == -1:
        return False
    pkind = ast.kind(parent)
    children = ast.children(parent)
    if pkind == "call":
        # name slot: last identifier before the args wrapper
        return ident != children[-2]
    if pkind in ("class", "method", "constructor", "enum_constant"):
        return False
    if pkind == "other" and children and ident == children[0]:
        # labeled statement target
        return False
    return True


# --------------------------------------------------------------------- scope


class ScopeIndex:
    """Per-tree declaration tables used by resolve_variable.

    declared_nodes map a declaring node (declarator or param) to its
    declared-type label; classes carry their declaration flavor so type
    names can be classified as abstract/enumeration from local evidence.
    """

    def __init__(self, ast: NormalizedAst):
        self.class_flavor: dict[str, str] = {}  # type name -> class|interface|enum|abstract
        self.decl_type: dict[int, str] = {}  # declarator/param node -> type label
        self._collect(ast)
        self.ast = ast

    def _collect(self, ast: NormalizedAst) -> None:
        for nid in ast.preorder():
            kind = ast.kind(nid)
            if kind == "class":
                name, flavor = "", "class"
                mods = set()
                for child in ast.children(nid):
                    ckind = ast.kind(child)
                    if ckind == "keyword":
                        flavor = ast.label(child)
                    elif ckind == "modifier":
                        mods.add(ast.label(child))
                    elif ckind == "identifier":
                        name = ast.label(child)
                        break
                if flavor == "class" and "abstract" in mods:
                    flavor = "abstract"
                if name:
                    self.class_flavor[name] = flavor
            elif kind == "declaration":
                type_label = ""
                for child in ast.children(nid):
                    ckind = ast.kind(child)
                    if ckind == "type":
                        type_label = ast.label(child)
                    elif ckind == "declarator":
                        self.decl_type[child] = type_label
            elif kind == "param":
                for child in ast.children(nid):
                    if ast.kind(child) == "type":
                        self.decl_type[nid] = ast.label(child)

    def category_of(self, decl: int) -> str:
        type_label = self.decl_type.get(decl, "")
        base = type_label.split("<")[0].split("[")[0].rsplit(".", 1)[-1]
        if type_label.split("<")[0].endswith("[]") or "[]" in type_label:
            return "object"
        if base in PRIMITIVE_TYPES:
            return "primitive"
        flavor = self.class_flavor.get(base)
        if flavor == "enum":
            return "enumeration"
        if flavor in ("interface", "abstract"):
            return "abstract"
        return "object"

    def local_decl(self, ast: NormalizedAst, ident: int, name: str) -> int | None:
        """Innermost visible local declaration of name, or None.

        Walks block ancestors up to the enclosing method/constructor;
        declarations must start before the identifier's own span.
        """
        body = enclosing(ast, ident, ("method", "constructor"))
        if body is None:
            return None
        pos = ast.node(ident).span[0]
        cur = ast.parent(ident)
        while cur != -1:
            kind = ast.kind(cur)
            if kind == "block":
                for child in ast.children(cur):
                    if ast.kind(child) != "declaration":
                        continue
                    for decl in ast.children(child):
                        if (
                            ast.kind(decl) == "declarator"
                            and self._declarator_name(ast, decl) == name
                            and ast.node(decl).span[0] <= pos
                        ):
                            return decl
            elif kind in ("loop", "catch"):
                for child in ast.children(cur):
                    found = self._param_or_init_decl(ast, child, name, pos)
                    if found is not None:
                        return found
            elif kind in ("method", "constructor"):
                for child in ast.children(cur):
                    if ast.kind(child) == "params":
                        for param in ast.children(child):
                            if self._param_name(ast, param) == name:
                                return param
                return None
            cur = ast.parent(cur)
        return None

    def _param_or_init_decl(self, ast, child: int, name: str, pos: int) -> int | None:
        kind = ast.kind(child)
        if kind == "param" and self._param_name(ast, child) == name:
            return child
        if kind == "for_init":
            for init in ast.children(child):
                if ast.kind(init) != "declaration":
                    continue
                for decl in ast.children(init):
                    if (
                        ast.kind(decl) == "declarator"
                        and self._declarator_name(ast, decl) == name
                        and ast.node(decl).span[0] <= pos
                    ):
                        return decl
        return None

    def field_decl(self, ast: NormalizedAst, ident: int, name: str) -> int | None:
        cls = enclosing(ast, ident, ("class",))
        while cls is not None:
            body = next(
                (c for c in ast.children(cls) if ast.kind(c) == "class_body"), None
            )
            if body is not None:
                for member in ast.children(body):
                    if ast.kind(member) != "declaration":
                        continue
                    for decl in ast.children(member):
                        if (
                            ast.kind(decl) == "declarator"
                            and self._declarator_name(ast, decl) == name
                        ):
                            return decl
            parent = ast.parent(cls)
            cls = enclosing(ast, parent, ("class",)) if parent != -1 else None
        return None

    @staticmethod
    def _declarator_name(ast: NormalizedAst, decl: int) -> str:
        children = ast.children(decl)
        return ast.label(children[0]) if children else ""

    @staticmethod
    def _param_name(ast: NormalizedAst, param: int) -> str:
        for child in ast.children(param):
            if ast.kind(child) == "identifier":
                return ast.label(child)
        return ""


def _is_field_access_name(ast: NormalizedAst, ident: int) -> bool:
    parent = ast.parent(ident)
    if parent == -1 or ast.kind(parent) != "field_access":
        return False
    return ast.children(parent)[1] == ident


def _scope_index(ast: NormalizedAst) -> ScopeIndex:
    index = getattr(ast, "_scope_index", None)
    if index is None:
        index = ScopeIndex(ast)
        ast._scope_index = index
    return index
