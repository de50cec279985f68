"""Contextual features around the faulty statement.

The faulty statement is the first changed statement in source order (buggy
side when a statement survives there, otherwise patched side).  Nine string
features record statement kinds around it; seventeen flags describe the
enclosing method and class.
"""

from __future__ import annotations

from ..ast_core.queries import (
    enclosing,
    is_variable_use,
    resolve_variable,
    statement_context,
)
from ..ast_core.tree import NormalizedAst, STATEMENT_KINDS
from .context import DiffView
from .schema import CONTEXTUAL_BINARY_FEATURES, CONTEXTUAL_STRING_FEATURES

_RUNTIME_EXCEPTIONS = frozenset(
    {
        "RuntimeException",
        "NullPointerException",
        "IllegalArgumentException",
        "IllegalStateException",
        "IndexOutOfBoundsException",
        "ArrayIndexOutOfBoundsException",
        "StringIndexOutOfBoundsException",
        "ArithmeticException",
        "ClassCastException",
        "NumberFormatException",
        "UnsupportedOperationException",
        "ConcurrentModificationException",
        "NegativeArraySizeException",
    }
)


def extract_contextual(view: DiffView) -> dict[str, int | str]:
    values: dict[str, int | str] = {name: "none" for name in CONTEXTUAL_STRING_FEATURES}
    values.update({name: 0 for name in CONTEXTUAL_BINARY_FEATURES})

    if view.src_stmts:
        ast, faulty = view.buggy, view.src_stmts[0]
    elif view.dst_stmts:
        ast, faulty = view.patched, view.dst_stmts[0]
    else:
        return values

    values["typeOfFaultyStatement"] = ast.kind(faulty)
    values["typeOfFaultyStatementParent"] = _parent_kind(ast, faulty)
    former, latter = statement_context(ast, faulty, 3)
    for i in range(3):
        if i < len(former):
            values[f"typeOfFaultyStatementBefore{i + 1}"] = ast.kind(former[-1 - i])
        if i < len(latter):
            values[f"typeOfFaultyStatementAfter{i + 1}"] = ast.kind(latter[i])

    cls = enclosing(ast, faulty, ("class",))
    method = enclosing(ast, faulty, ("method", "constructor"))
    values["faultyClassExceptionType"] = _exception_category(ast, cls)
    if method is not None:
        _method_flags(ast, faulty, method, values)
        _similarity_flags(ast, faulty, method, cls, values)
        _local_usage_flags(ast, method, values)
    if cls is not None:
        _field_usage_flags(ast, cls, values)
    _assignment_usage_flags(ast, faulty, values)
    return values


def _parent_kind(ast: NormalizedAst, stmt: int) -> str:
    for anc in ast.ancestors(stmt):
        kind = ast.kind(anc)
        if kind in STATEMENT_KINDS and kind != "block":
            return kind
    return "none"


# ----------------------------------------------------------------- exceptions


def _exception_category(ast: NormalizedAst, cls: int | None) -> str:
    if cls is None:
        return "none"
    names: list[str] = []
    for nid in ast.preorder(cls):
        kind = ast.kind(nid)
        if kind == "throws":
            names.extend(ast.label(t) for t in ast.children(nid))
        elif kind == "catch":
            param = ast.children(nid)[0]
            for child in ast.children(param):
                if ast.kind(child) == "type":
                    names.extend(ast.label(child).split("|"))
        elif kind == "throw":
            expr = ast.children(nid)[0]
            if ast.kind(expr) == "new":
                names.append(ast.label(ast.children(expr)[0]))
    if not names:
        return "none"
    return _classify_exception(names[0])


def _classify_exception(name: str) -> str:
    base = name.split("<")[0].split("[")[0].rsplit(".", 1)[-1]
    if base == "Throwable":
        return "throwable"
    if base in _RUNTIME_EXCEPTIONS:
        return "runtime"
    if base.endswith("Error"):
        return "error"
    if base.endswith("Exception"):
        return "checked"
    return "other"


# -------------------------------------------------------------- method flags


def _method_flags(ast: NormalizedAst, faulty: int, method: int, values: dict) -> None:
    mods = {
        ast.label(c) for c in ast.children(method) if ast.kind(c) == "modifier"
    }
    if "synchronized" in mods or enclosing(ast, faulty, ("synchronized",)) is not None:
        values["inSynchronizedMethod"] = 1
    if any(ast.kind(c) == "throws" for c in ast.children(method)):
        values["methodThrowsException"] = 1

    calls = [nid for nid in ast.preorder(method) if ast.kind(nid) == "call"]
    for call in calls:
        if len(ast.children(call)) == 3:
            values["hasObjectiveMethodCall"] = 1
            receiver = ast.children(call)[0]
            if ast.kind(receiver) != "identifier":
                values["hasInvocationsProneException"] = 1
        if _inside_kind(ast, call, method, "try"):
            values["methodCallWithTryCatch"] = 1
        guard = _guard_of(ast, call, method)
        if guard == "null":
            values["methodCallWithNullGuard"] = 1
        elif guard == "normal":
            values["methodCallWithNormalGuard"] = 1


def _inside_kind(ast: NormalizedAst, node: int, stop: int, kind: str) -> bool:
    cur = ast.parent(node)
    while cur != -1 and cur != stop:
        if ast.kind(cur) == kind:
            return True
        cur = ast.parent(cur)
    return False


def _guard_of(ast: NormalizedAst, node: int, stop: int) -> str | None:
    """Kind of the innermost if guarding node: 'null', 'normal' or None.

    A node sitting inside the condition itself is not guarded by it.
    """
    cur = ast.parent(node)
    child = node
    while cur != -1 and child != stop:
        if ast.kind(cur) == "conditional":
            cond = next(
                (c for c in ast.children(cur) if ast.kind(c) == "condition"), None
            )
            if cond is not None and not (
                child == cond or ast.is_ancestor(cond, node) or cond == node
            ):
                return "null" if _has_null_compare(ast, cond) else "normal"
        child = cur
        cur = ast.parent(cur)
    return None


def _has_null_compare(ast: NormalizedAst, cond: int) -> bool:
    for nid in ast.preorder(cond):
        if ast.kind(nid) != "binary":
            continue
        children = ast.children(nid)
        if len(children) != 3 or ast.label(children[1]) not in ("==", "!="):
            continue
        if any(
            ast.kind(c) == "literal" and ast.label(c) == "null"
            for c in (children[0], children[2])
        ):
            return True
    return False


# ---------------------------------------------------------- similarity flags


def _similarity_flags(
    ast: NormalizedAst, faulty: int, method: int, cls: int | None, values: dict
) -> None:
    patch_vars: dict[str, str] = {}
    for nid in ast.preorder(faulty):
        if ast.kind(nid) == "identifier" and is_variable_use(ast, nid):
            info = resolve_variable(ast, nid)
            patch_vars.setdefault(info.name, info.category)
    if not patch_vars:
        return

    visible = _visible_declarations(ast, method, cls)
    guard = _guard_of(ast, faulty, method) or "normal"
    for category, flag_base in (("object", "Object"), ("primitive", "Primitive")):
        names_in_patch = {n for n, c in patch_vars.items() if c == category}
        if not names_in_patch:
            continue
        similar = any(
            cat == category and name not in names_in_patch
            for name, cat in visible
        )
        if similar:
            suffix = "NullGuard" if guard == "null" else "NormalGuard"
            values[f"similar{flag_base}TypeWith{suffix}"] = 1


def _visible_declarations(
    ast: NormalizedAst, method: int, cls: int | None
) -> list[tuple[str, str]]:
    from ..ast_core.queries import ScopeIndex, _scope_index

    index: ScopeIndex = _scope_index(ast)
    out: list[tuple[str, str]] = []
    for nid in ast.preorder(method):
        kind = ast.kind(nid)
        if kind == "declarator" and nid in index.decl_type:
            out.append((ScopeIndex._declarator_name(ast, nid), index.category_of(nid)))
        elif kind == "param" and nid in index.decl_type:
            out.append((ScopeIndex._param_name(ast, nid), index.category_of(nid)))
    if cls is not None:
        body = next((c for c in ast.children(cls) if ast.kind(c) == "class_body"), None)
        if body is not None:
            for member in ast.children(body):
                if ast.kind(member) != "declaration":
                    continue
                for decl in ast.children(member):
                    if ast.kind(decl) == "declarator":
                        out.append(
                            (ScopeIndex._declarator_name(ast, decl), index.category_of(decl))
                        )
    return out


# --------------------------------------------------------------- usage flags


def _field_usage_flags(ast: NormalizedAst, cls: int, values: dict) -> None:
    body = next((c for c in ast.children(cls) if ast.kind(c) == "class_body"), None)
    if body is None:
        return
    fields = []
    for member in ast.children(body):
        if ast.kind(member) != "declaration":
            continue
        for decl in ast.children(member):
            if ast.kind(decl) == "declarator":
                fields.append(decl)
    if not fields:
        return
    not_used, not_assigned = _usage_of(ast, cls, fields)
    if not_used:
        values["fieldNotUsed"] = 1
    if not_assigned:
        values["fieldNotAssigned"] = 1


def _local_usage_flags(ast: NormalizedAst, method: int, values: dict) -> None:
    locals_ = []
    for nid in ast.preorder(method):
        if ast.kind(nid) != "declaration":
            continue
        for decl in ast.children(nid):
            if ast.kind(decl) == "declarator":
                locals_.append(decl)
    if not locals_:
        return
    not_used, not_assigned = _usage_of(ast, method, locals_)
    if not_used:
        values["localVarNotUsed"] = 1
    if not_assigned:
        values["localVarNotAssigned"] = 1


def _usage_of(ast: NormalizedAst, scope: int, declarators: list[int]) -> tuple[bool, bool]:
    uses: set[str] = set()
    assigned: set[str] = set()
    for nid in ast.preorder(scope):
        kind = ast.kind(nid)
        if kind == "identifier" and is_variable_use(ast, nid):
            parent = ast.parent(nid)
            if ast.kind(parent) == "declarator" and ast.children(parent)[0] == nid:
                continue
            uses.add(ast.label(nid))
        if kind in ("assign", "unary"):
            target = ast.children(nid)[0]
            if kind == "unary":
                ops = [c for c in ast.children(nid) if ast.kind(c) == "operator"]
                if not ops or ast.label(ops[0]) not in ("++", "--"):
                    continue
                target = next(
                    c for c in ast.children(nid) if ast.kind(c) != "operator"
                )
            for t in ast.preorder(target):
                if ast.kind(t) == "identifier" and ast.label(t) not in ("this", "super"):
                    assigned.add(ast.label(t))
    any_not_used = False
    any_not_assigned = False
    for decl in declarators:
        children = ast.children(decl)
        name = ast.label(children[0])
        if name not in uses:
            any_not_used = True
        if len(children) < 2 and name not in assigned:
            any_not_assigned = True
    return any_not_used, any_not_assigned


def _assignment_usage_flags(ast: NormalizedAst, faulty: int, values: dict) -> None:
    for nid in ast.preorder(faulty):
        kind = ast.kind(nid)
        is_assign = kind == "assign"
        is_init = kind == "declarator" and len(ast.children(nid)) > 1
        if not (is_assign or is_init):
            continue
        for sub in ast.preorder(nid):
            if ast.kind(sub) == "identifier" and is_variable_use(ast, sub):
                category = resolve_variable(ast, sub).category
                if category == "object":
                    values["objectUsedInAssignment"] = 1
                elif category == "primitive":
                    values["primitiveUsedInAssignment"] = 1
