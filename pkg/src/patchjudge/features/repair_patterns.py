"""Structural detectors for the 26 repair-pattern flags.

Each detector is a predicate over the edit script plus both trees; the
authoritative prose definition of every detector lives in the bundled
feature catalog document.  notClassified fires exactly when nothing else
does.
"""

from __future__ import annotations

from ..ast_core.tree import ANCHOR_STATEMENT_KINDS, NormalizedAst
from ..diffing import MOV, UPD
from .context import DiffView
from .schema import REPAIR_PATTERN_FEATURES

_ARITH_OPS = frozenset({"+", "-", "*", "/", "%"})
_LOGIC_OPS = frozenset({"&&", "||"})


def extract_repair_patterns(view: DiffView) -> dict[str, int]:
    flags = {name: 0 for name in REPAIR_PATTERN_FEATURES}
    for name, detector in _DETECTORS.items():
        if detector(view):
            flags[name] = 1
    if not any(flags.values()):
        flags["notClassified"] = 1
    return flags


# ------------------------------------------------------------- wrap / unwrap


def _is_if(ast: NormalizedAst, nid: int) -> bool:
    return ast.kind(nid) == "conditional" and not any(
        ast.kind(c) == "case" for c in ast.children(nid)
    )


def _has_else(ast: NormalizedAst, nid: int) -> bool:
    return any(ast.kind(c) == "else" for c in ast.children(nid))


def _added_roots(view: DiffView, kinds: tuple[str, ...]) -> list[int]:
    return [
        p
        for p in sorted(view.added_nodes)
        if view.patched.kind(p) in kinds
    ]


def _mapped_stmt_inside(view: DiffView, wrapper: int, within: int | None = None) -> bool:
    """A statement that survived from the buggy tree now sits under wrapper."""
    scope = wrapper if within is None else within
    for nid in view.patched.preorder(scope):
        if nid == wrapper:
            continue
        if (
            view.patched.kind(nid) in ANCHOR_STATEMENT_KINDS
            and nid in view.matched_dst
        ):
            return True
    return False


def _wraps_if(view: DiffView) -> bool:
    for p in _added_roots(view, ("conditional",)):
        if _is_if(view.patched, p) and not _has_else(view.patched, p):
            if _mapped_stmt_inside(view, p):
                return True
    return False


def _wraps_if_else(view: DiffView) -> bool:
    for p in _added_roots(view, ("conditional",)):
        if _is_if(view.patched, p) and _has_else(view.patched, p):
            if _mapped_stmt_inside(view, p):
                return True
    return False


def _wraps_else(view: DiffView) -> bool:
    for p in _added_roots(view, ("else",)):
        parent = view.patched.parent(p)
        if parent != -1 and parent not in view.added_nodes:
            if _mapped_stmt_inside(view, p):
                return True
    return False


def _wraps_loop(view: DiffView) -> bool:
    return any(
        _mapped_stmt_inside(view, p) for p in _added_roots(view, ("loop",))
    )


def _wraps_try_catch(view: DiffView) -> bool:
    for p in _added_roots(view, ("try",)):
        body = view.patched.children(p)[0]
        if _mapped_stmt_inside(view, p, within=body):
            return True
    return False


def _surviving_stmt_inside(view: DiffView, wrapper: int, within: int | None = None) -> bool:
    """A statement under the deleted buggy wrapper is still mapped somewhere."""
    scope = wrapper if within is None else within
    for nid in view.buggy.preorder(scope):
        if nid == wrapper:
            continue
        if view.buggy.kind(nid) in ANCHOR_STATEMENT_KINDS and view.script.matched_src(nid):
            return True
    return False


def _unwrap_try_catch(view: DiffView) -> bool:
    for b in sorted(view.deleted_nodes):
        if view.buggy.kind(b) == "try":
            body = view.buggy.children(b)[0]
            if _surviving_stmt_inside(view, b, within=body):
                return True
    return False


def _unwrap_if_else(view: DiffView) -> bool:
    for b in sorted(view.deleted_nodes):
        if _is_if_node(view.buggy, b) and _surviving_stmt_inside(view, b):
            return True
    return False


def _is_if_node(ast: NormalizedAst, nid: int) -> bool:
    return ast.kind(nid) == "conditional" and _is_if(ast, nid)


def _wraps_method(view: DiffView) -> bool:
    deleted_digests = {view.buggy_digests[b] for b in view.deleted_nodes}
    for call in _added_roots(view, ("call",)):
        args = view.patched.children(call)[-1]
        for nid in view.patched.preorder(args):
            if nid == args:
                continue
            if nid in view.matched_dst or view.patched_digests[nid] in deleted_digests:
                return True
    return False


def _unwrap_method(view: DiffView) -> bool:
    added_digests = {view.patched_digests[p] for p in view.added_nodes}
    for b in sorted(view.deleted_nodes):
        if view.buggy.kind(b) != "call":
            continue
        args = view.buggy.children(b)[-1]
        for nid in view.buggy.preorder(args):
            if nid == args:
                continue
            if view.script.matched_src(nid) or view.buggy_digests[nid] in added_digests:
                return True
    return False


# ----------------------------------------------------------------- conditions


def _mapped_condition_subtrees(view: DiffView, side: str) -> list[set[int]]:
    ast = view.buggy if side == "buggy" else view.patched
    out = []
    for b, p in view.mapped_statement_pairs:
        stmt = b if side == "buggy" else p
        if ast.kind(stmt) not in ("conditional", "loop"):
            continue
        cond = next((c for c in ast.children(stmt) if ast.kind(c) == "condition"), None)
        if cond is not None:
            out.append(set(ast.preorder(cond)))
    return out


def _op_label_of_binary(ast: NormalizedAst, nid: int) -> str:
    children = ast.children(nid)
    return ast.label(children[1]) if len(children) == 3 else ""


def _exp_logic_expand(view: DiffView) -> bool:
    conds = _mapped_condition_subtrees(view, "patched")
    for p in sorted(view.added_nodes):
        if view.patched.kind(p) != "binary":
            continue
        if _op_label_of_binary(view.patched, p) in _LOGIC_OPS:
            if any(p in cond for cond in conds):
                return True
    return False


def _exp_logic_reduce(view: DiffView) -> bool:
    conds = _mapped_condition_subtrees(view, "buggy")
    for b in sorted(view.deleted_nodes):
        if view.buggy.kind(b) != "binary":
            continue
        if _op_label_of_binary(view.buggy, b) in _LOGIC_OPS:
            if any(b in cond for cond in conds):
                return True
    return False


def _exp_logic_mod(view: DiffView) -> bool:
    conds = _mapped_condition_subtrees(view, "buggy")
    for action in view.upd_actions:
        if any(action.src in cond for cond in conds):
            return True
    return False


def _exp_arith_mod(view: DiffView) -> bool:
    for action in view.upd_actions:
        if view.buggy.kind(action.src) == "operator":
            if view.buggy.label(action.src) in _ARITH_OPS or action.label in _ARITH_OPS:
                return True
    retained_b: set[int] = set()
    retained_p: set[int] = set()
    for b, p in view.simple_mapped_pairs:
        if view.subtree_has_action("buggy", b, strict=True) or view.subtree_has_action(
            "patched", p, strict=True
        ):
            retained_b.update(view.buggy.preorder(b))
            retained_p.update(view.patched.preorder(p))
    for cond in _mapped_condition_subtrees(view, "buggy"):
        retained_b.update(cond)
    for cond in _mapped_condition_subtrees(view, "patched"):
        retained_p.update(cond)
    for p in sorted(view.added_nodes):
        if (
            view.patched.kind(p) == "operator"
            and view.patched.label(p) in _ARITH_OPS
            and p in retained_p
        ):
            return True
    for b in sorted(view.deleted_nodes):
        if (
            view.buggy.kind(b) == "operator"
            and view.buggy.label(b) in _ARITH_OPS
            and b in retained_b
        ):
            return True
    return False


def _added_conditional_blocks(view: DiffView) -> list[int]:
    return _added_roots(view, ("conditional",))


def _cond_block_stmt_kinds(view: DiffView, wrapper: int) -> list[str]:
    kinds = []
    for nid in view.patched.preorder(wrapper):
        if nid == wrapper:
            continue
        if view.patched.kind(nid) in ANCHOR_STATEMENT_KINDS:
            kinds.append(view.patched.kind(nid))
    return kinds


def _cond_block_ret_add(view: DiffView) -> bool:
    for w in _added_conditional_blocks(view):
        for nid in view.patched.preorder(w):
            if nid != w and view.patched.kind(nid) == "return" and nid in view.added_nodes:
                return True
    return False


def _cond_block_exc_add(view: DiffView) -> bool:
    for w in _added_conditional_blocks(view):
        for nid in view.patched.preorder(w):
            if nid != w and view.patched.kind(nid) == "throw" and nid in view.added_nodes:
                return True
    return False


def _cond_block_others_add(view: DiffView) -> bool:
    for w in _added_conditional_blocks(view):
        if any(k not in ("return", "throw") for k in _cond_block_stmt_kinds(view, w)):
            return True
    return False


def _cond_block_rem(view: DiffView) -> bool:
    return any(
        view.buggy.kind(b) == "conditional" for b in view.deleted_nodes
    )


def _null_check_added(view: DiffView, op: str) -> bool:
    for p in sorted(view.added_nodes):
        if view.patched.kind(p) != "binary":
            continue
        children = view.patched.children(p)
        if len(children) != 3 or view.patched.label(children[1]) != op:
            continue
        operands = (children[0], children[2])
        if not any(
            view.patched.kind(c) == "literal" and view.patched.label(c) == "null"
            for c in operands
        ):
            continue
        if any(view.patched.kind(a) == "condition" for a in view.patched.ancestors(p)):
            return True
    return False


def _miss_null_check_p(view: DiffView) -> bool:
    return _null_check_added(view, "==")


def _miss_null_check_n(view: DiffView) -> bool:
    return _null_check_added(view, "!=")


# --------------------------------------------------------------------- other


def _code_move(view: DiffView) -> bool:
    for action in view.mov_actions:
        if view.buggy.kind(action.src) not in ANCHOR_STATEMENT_KINDS:
            continue
        if not any(a in view.added_nodes for a in view.patched.ancestors(action.dst)):
            return True
    return False


def _copy_paste(view: DiffView) -> bool:
    roots = [
        p
        for p in sorted(view.added_nodes)
        if view.patched.parent(p) not in view.added_nodes
    ]
    seen: dict[bytes, int] = {}
    for p in roots:
        if len(list(view.patched.preorder(p))) < 3:
            continue
        digest = view.patched_digests[p]
        seen[digest] = seen.get(digest, 0) + 1
        if seen[digest] >= 2:
            return True
    pairs: dict[tuple[str, str], int] = {}
    for action in view.upd_actions:
        key = (view.buggy.label(action.src), action.label)
        pairs[key] = pairs.get(key, 0) + 1
        if pairs[key] >= 2:
            return True
    return False


def _wrong_var_ref(view: DiffView) -> bool:
    from ..ast_core.queries import is_variable_use

    for action in view.upd_actions:
        if view.buggy.kind(action.src) == "identifier" and is_variable_use(
            view.buggy, action.src
        ):
            return True
    return False


def _wrong_method_ref(view: DiffView) -> bool:
    for action in view.upd_actions:
        if view.buggy.kind(action.src) != "identifier":
            continue
        parent = view.buggy.parent(action.src)
        if parent == -1 or view.buggy.kind(parent) != "call":
            continue
        if view.buggy.children(parent)[-2] == action.src:
            return True
    return False


def _single_line(view: DiffView) -> bool:
    src, dst = view.src_stmts, view.dst_stmts
    if len(src) == 1 and not dst:
        return True
    if len(src) == 1 and len(dst) == 1:
        return view.script.partner_of_src(src[0]) == dst[0]
    return False


def _const_change(view: DiffView) -> bool:
    return any(
        view.buggy.kind(a.src) == "literal" for a in view.upd_actions
    )


_DETECTORS = {
    "wrapsIf": _wraps_if,
    "wrapsElse": _wraps_else,
    "wrapsLoop": _wraps_loop,
    "wrapsTryCatch": _wraps_try_catch,
    "unwrapTryCatch": _unwrap_try_catch,
    "wrapsIfElse": _wraps_if_else,
    "unwrapIfElse": _unwrap_if_else,
    "wrapsMethod": _wraps_method,
    "unwrapMethod": _unwrap_method,
    "expLogicExpand": _exp_logic_expand,
    "expArithMod": _exp_arith_mod,
    "expLogicReduce": _exp_logic_reduce,
    "expLogicMod": _exp_logic_mod,
    "condBlockOthersAdd": _cond_block_others_add,
    "condBlockRem": _cond_block_rem,
    "condBlockExcAdd": _cond_block_exc_add,
    "condBlockRetAdd": _cond_block_ret_add,
    "missNullCheckP": _miss_null_check_p,
    "missNullCheckN": _miss_null_check_n,
    "codeMove": _code_move,
    "copyPaste": _copy_paste,
    "wrongVarRef": _wrong_var_ref,
    "wrongMethodRef": _wrong_method_ref,
    "singleLine": _single_line,
    "constChange": _const_change,
}
