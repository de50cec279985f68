"""Code-description flags: operators, variables, statements, tree edits.

The same 50-flag block is computed for three windows: SRC (the changed
statements on both sides), FORMER and LATTER (up to three same-block
statements before/after each changed statement, on both sides).  The ten
tree-edit flags describe the edit script itself, which has no former/latter
analogue, so those slots stay zero outside SRC.
"""

from __future__ import annotations

from ..ast_core.queries import is_variable_use, resolve_variable, statement_context
from ..ast_core.tree import ANCHOR_STATEMENT_KINDS, NormalizedAst
from ..diffing import ADD, DEL, MOV, UPD
from .context import DiffView
from .schema import (
    AST_OPERATION_FEATURES,
    CODE_DESCRIPTION_FEATURES,
    former_name,
    latter_name,
)

_BINARY_OP_FLAGS = {
    "+": "opAdd",
    "-": "opSub",
    "*": "opMul",
    "/": "opDiv",
    "%": "opMod",
    "==": "opEqual",
    "!=": "opNotEqual",
    "<": "opLessThan",
    "<=": "opLessEqual",
    ">": "opGreaterThan",
    ">=": "opGreaterEqual",
    "&": "opBitwise",
    "|": "opBitwise",
    "^": "opBitwise",
    "<<": "opBitwise",
    ">>": "opBitwise",
    ">>>": "opBitwise",
}

_UNARY_OP_FLAGS = {
    "++": "uopInc",
    "+": "uopInc",
    "--": "uopDec",
    "-": "uopDec",
    "~": "opBitwise",
}

_COMPOUND_ASSIGN_FLAGS = {
    "+=": "opAdd",
    "-=": "opSub",
    "*=": "opMul",
    "/=": "opDiv",
    "%=": "opMod",
    "&=": "opBitwise",
    "|=": "opBitwise",
    "^=": "opBitwise",
    "<<=": "opBitwise",
    ">>=": "opBitwise",
    ">>>=": "opBitwise",
}

_CATEGORY_FLAGS = {"primitive": "primVar", "abstract": "abstVar", "enumeration": "enum"}


def extract_code_description(view: DiffView) -> dict[str, int]:
    src_b = _window(view.buggy, view.src_stmts)
    src_p = _window(view.patched, view.dst_stmts)
    former_b, latter_b = _context_windows(view.buggy, view.src_stmts)
    former_p, latter_p = _context_windows(view.patched, view.dst_stmts)

    flags: dict[str, int] = {}
    src = _window_flags(view.buggy, src_b, view.patched, src_p)
    src.update(_edit_flags(view))
    for name in CODE_DESCRIPTION_FEATURES:
        flags[name] = src.get(name, 0)
    former = _window_flags(view.buggy, former_b, view.patched, former_p)
    for name in CODE_DESCRIPTION_FEATURES:
        flags[former_name(name)] = former.get(name, 0)
    latter = _window_flags(view.buggy, latter_b, view.patched, latter_p)
    for name in CODE_DESCRIPTION_FEATURES:
        flags[latter_name(name)] = latter.get(name, 0)
    return flags


def _window(ast: NormalizedAst, stmts: list[int]) -> list[int]:
    nodes: list[int] = []
    for stmt in stmts:
        nodes.extend(ast.preorder(stmt))
    return nodes


def _context_windows(
    ast: NormalizedAst, stmts: list[int]
) -> tuple[list[int], list[int]]:
    former: list[int] = []
    latter: list[int] = []
    for stmt in stmts:
        before, after = statement_context(ast, stmt, 3)
        for s in before:
            former.extend(ast.preorder(s))
        for s in after:
            latter.extend(ast.preorder(s))
    return former, latter


def _window_flags(
    buggy: NormalizedAst,
    buggy_nodes: list[int],
    patched: NormalizedAst,
    patched_nodes: list[int],
) -> dict[str, int]:
    flags: dict[str, int] = {}
    for ast, nodes in ((buggy, buggy_nodes), (patched, patched_nodes)):
        _scan_tree_window(ast, nodes, flags)
    return flags


def _scan_tree_window(ast: NormalizedAst, nodes: list[int], flags: dict[str, int]) -> None:
    for nid in nodes:
        kind = ast.kind(nid)
        if kind == "operator":
            _operator_flag(ast, nid, flags)
        elif kind == "identifier":
            if is_variable_use(ast, nid):
                info = resolve_variable(ast, nid)
                flags["localVar" if info.scope == "local" else "globalVar"] = 1
                cat_flag = _CATEGORY_FLAGS.get(info.category)
                if cat_flag:
                    flags[cat_flag] = 1
                if (
                    info.declared_in is not None
                    and ast.kind(info.declared_in) == "param"
                    and ast.kind(ast.parent(info.declared_in)) == "params"
                ):
                    flags["funcArgument"] = 1
        elif kind == "assign":
            flags["stmtAssign"] = 1
            lhs, _, rhs = ast.children(nid)
            if _is_constant_expr(ast, rhs):
                flags["assignConst"] = 1
            if ast.kind(rhs) == "literal" and _is_zero_literal(ast.label(rhs)):
                flags["assignZero"] = 1
            if _shared_variable(ast, lhs, rhs):
                flags["assignLhs"] = 1
        elif kind == "call":
            if len(ast.children(nid)) == 3:
                flags["callee"] = 1
            if ast.children(ast.children(nid)[-1]):
                flags["callArgument"] = 1
        elif kind == "assignment":
            flags["stmtAssign"] = 1
        elif kind == "conditional":
            flags["stmtCond"] = 1
        elif kind == "invocation":
            flags["stmtCall"] = 1
        elif kind == "loop":
            flags["stmtLoop"] = 1
        elif kind == "field_access":
            flags["memberAccess"] = 1
        elif kind == "return":
            flags["stmtReturn"] = 1
        elif kind == "try":
            flags["stmtTry"] = 1
        elif kind == "case":
            flags["stmtBranch"] = 1
        elif kind == "break":
            flags["stmtBreak"] = 1
        elif kind == "continue":
            flags["stmtContinue"] = 1
        elif kind == "throw":
            flags["stmtThrow"] = 1
        elif kind in ("new", "new_array"):
            flags["stmtNew"] = 1
        elif kind == "cast":
            flags["stmtCast"] = 1
        elif kind == "declaration":
            flags["stmtDecl"] = 1
        elif kind == "literal":
            flags["constant"] = 1


def _operator_flag(ast: NormalizedAst, nid: int, flags: dict[str, int]) -> None:
    parent_kind = ast.kind(ast.parent(nid))
    label = ast.label(nid)
    if parent_kind == "binary":
        flag = _BINARY_OP_FLAGS.get(label)
    elif parent_kind == "unary":
        flag = _UNARY_OP_FLAGS.get(label)
    elif parent_kind == "assign":
        flag = _COMPOUND_ASSIGN_FLAGS.get(label)
    else:
        flag = None
    if flag:
        flags[flag] = 1


def _is_constant_expr(ast: NormalizedAst, expr: int) -> bool:
    saw_literal = False
    for nid in ast.preorder(expr):
        kind = ast.kind(nid)
        if kind == "literal":
            saw_literal = True
        elif kind not in ("unary", "operator", "cast", "type", "binary"):
            return False
    return saw_literal


def _is_zero_literal(text: str) -> bool:
    body = text.replace("_", "").rstrip("lLfFdD")
    if not body:
        return False
    try:
        return (int(body, 0) if body[:2].lower() in ("0x", "0b") else float(body)) == 0
    except ValueError:
        return False


def _shared_variable(ast: NormalizedAst, lhs: int, rhs: int) -> bool:
    lhs_names = {
        ast.label(n)
        for n in ast.preorder(lhs)
        if ast.kind(n) == "identifier" and is_variable_use(ast, n)
    }
    if not lhs_names:
        return False
    for n in ast.preorder(rhs):
        if ast.kind(n) == "identifier" and is_variable_use(ast, n):
            if ast.label(n) in lhs_names:
                return True
    return False


# ------------------------------------------------------------ tree-edit flags


def _edit_flags(view: DiffView) -> dict[str, int]:
    flags = {name: 0 for name in AST_OPERATION_FEATURES}
    buggy, patched = view.buggy, view.patched
    n_buggy = len(buggy.nodes)

    for action in view.script.actions:
        if action.op == ADD:
            kind = patched.kind(action.dst)
            if kind in ANCHOR_STATEMENT_KINDS:
                flags["insertStmt"] = 1
                if kind == "conditional":
                    flags["insertCond"] = 1
        elif action.op == DEL:
            kind = buggy.kind(action.src)
            if kind in ANCHOR_STATEMENT_KINDS:
                flags["removeStmt"] = 1
            if kind == "block":
                flags["removeWholeBlock"] = 1
        elif action.op == MOV and action.src < n_buggy:
            if buggy.kind(action.src) in ANCHOR_STATEMENT_KINDS:
                flags["moveStmt"] = 1
        elif action.op == UPD:
            flags["updateStmt"] = 1
            if buggy.kind(action.src) == "literal":
                flags["updateLiteral"] = 1

    mapped_conds = [
        (b, p)
        for b, p in view.mapped_statement_pairs
        if buggy.kind(b) in ("conditional", "loop")
    ]
    for b, p in mapped_conds:
        cond_b = _condition_child(buggy, b)
        cond_p = _condition_child(patched, p)
        if (cond_b is not None and view.subtree_has_action("buggy", cond_b)) or (
            cond_p is not None and view.subtree_has_action("patched", cond_p)
        ):
            flags["replaceCond"] = 1
            break

    for b, p in view.simple_mapped_pairs:
        if view.subtree_has_action("buggy", b, strict=True) or view.subtree_has_action(
            "patched", p, strict=True
        ):
            flags["replaceStmt"] = 1
            break

    if not flags["removePartialIf"]:
        mapped_ifs = [b for b, _ in view.mapped_statement_pairs if buggy.kind(b) == "conditional"]
        for b in mapped_ifs:
            subtree = set(buggy.preorder(b))
            subtree.discard(b)
            if subtree & view.deleted_nodes:
                flags["removePartialIf"] = 1
                break
    return flags


def _condition_child(ast: NormalizedAst, stmt: int) -> int | None:
    for child in ast.children(stmt):
        if ast.kind(child) == "condition":
            return child
    return None
