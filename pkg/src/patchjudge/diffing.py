"""Tree differencing: edit scripts between buggy and patched trees.

Matching runs in two phases: a top-down pass anchors isomorphic subtrees
(equal structural digests), then a bottom-up pass pairs containers whose
descendants already match, with a recovery step that aligns the remaining
children of each recovered pair.  Script generation follows the classic
breadth-first insert/update/move + align + post-order delete scheme, applied
against a working copy so every emitted position is valid at its point in
the script.  The contract is the apply round-trip plus single-leaf
minimality, not one specific script.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ast_core.tree import (
    AstNode,
    NormalizedAst,
    all_subtree_digests,
)
from .errors import GrammarMismatchError, InvalidScriptError

UPD, ADD, DEL, MOV = "UPD", "ADD", "DEL", "MOV"

_MIN_ANCHOR_HEIGHT = 2
_MIN_DICE = 0.3


@dataclass(frozen=True)
class EditAction:
    op: str
    src: int | None = None  # buggy/working node id (absent for ADD)
    dst: int | None = None  # patched node id (absent for DEL)
    parent: int | None = None  # working-tree parent for ADD/MOV
    position: int | None = None  # child index for ADD/MOV
    kind: str = ""
    label: str = ""


@dataclass
class EditScript:
    actions: list[EditAction]
    mapping: dict[int, int]  # buggy id -> patched id, unchanged pairs only
    upd_pairs: dict[int, int] = field(default_factory=dict)

    def matched_src(self, buggy_id: int) -> bool:
        return buggy_id in self.mapping or buggy_id in self.upd_pairs

    def partner_of_src(self, buggy_id: int) -> int | None:
        if buggy_id in self.mapping:
            return self.mapping[buggy_id]
        return self.upd_pairs.get(buggy_id)

    def matched_dst_ids(self) -> set[int]:
        ids = set(self.mapping.values())
        ids.update(self.upd_pairs.values())
        return ids


# ------------------------------------------------------------------ matching


def _match_trees(buggy: NormalizedAst, patched: NormalizedAst) -> dict[int, int]:
    dig_b = all_subtree_digests(buggy)
    dig_p = all_subtree_digests(patched)
    heights_b = _heights(buggy)
    heights_p = _heights(patched)
    sizes_b = _sizes(buggy)
    sizes_p = _sizes(patched)

    m: dict[int, int] = {}
    matched_p: set[int] = set()

    def match_subtrees(b: int, p: int) -> None:
        bs = list(buggy.preorder(b))
        ps = list(patched.preorder(p))
        for x, y in zip(bs, ps):
            m[x] = y
            matched_p.add(y)

    # top-down: anchor isomorphic subtrees, tallest first, source order ties
    max_h = max(heights_b[buggy.root], heights_p[patched.root])
    for h in range(max_h, _MIN_ANCHOR_HEIGHT - 1, -1):
        buckets_b: dict[bytes, list[int]] = {}
        for nid in buggy.preorder():
            if heights_b[nid] == h and nid not in m:
                buckets_b.setdefault(dig_b[nid], []).append(nid)
        buckets_p: dict[bytes, list[int]] = {}
        for nid in patched.preorder():
            if heights_p[nid] == h and nid not in matched_p:
                buckets_p.setdefault(dig_p[nid], []).append(nid)
        for digest, list_b in buckets_b.items():
            list_p = buckets_p.get(digest)
            if not list_p:
                continue
            for b, p in zip(list_b, list_p):
                match_subtrees(b, p)

    # bottom-up: recover containers around the anchors
    recovered: list[tuple[int, int]] = []
    has_matched_desc = [False] * len(buggy.nodes)
    for b in buggy.postorder():
        node = buggy.nodes[b]
        for child in node.children:
            if child in m or has_matched_desc[child]:
                has_matched_desc[b] = True
                break
        if b in m or not has_matched_desc[b]:
            continue
        best = _best_candidate(
            buggy, patched, b, m, matched_p, sizes_b, sizes_p, heights_p
        )
        if best is not None:
            m[b] = best
            matched_p.add(best)
            recovered.append((b, best))

    if buggy.root not in m and patched.root not in matched_p:
        if buggy.kind(buggy.root) == patched.kind(patched.root):
            m[buggy.root] = patched.root
            matched_p.add(patched.root)
            recovered.append((buggy.root, patched.root))

    for b, p in recovered:
        _recover_children(buggy, patched, b, p, m, matched_p, dig_b, dig_p)
    return m


def _heights(ast: NormalizedAst) -> list[int]:
    heights = [1] * len(ast.nodes)
    for nid in ast.postorder():
        children = ast.nodes[nid].children
        if children:
            heights[nid] = 1 + max(heights[c] for c in children)
    return heights


def _sizes(ast: NormalizedAst) -> list[int]:
    sizes = [1] * len(ast.nodes)
    for nid in ast.postorder():
        for c in ast.nodes[nid].children:
            sizes[nid] += sizes[c]
    return sizes


def _best_candidate(
    buggy, patched, b, m, matched_p, sizes_b, sizes_p, heights_p
) -> int | None:
    kind = buggy.kind(b)
    seen: dict[int, None] = {}
    for desc in buggy.preorder(b):
        if desc == b or desc not in m:
            continue
        cur = patched.parent(m[desc])
        while cur != -1:
            if cur not in matched_p and patched.kind(cur) == kind and cur not in seen:
                seen[cur] = None
            cur = patched.parent(cur)
    if not seen:
        return None

    descendants_b = set(buggy.preorder(b))
    descendants_b.discard(b)
    scored = []
    for cand in seen:
        cand_desc = set(patched.preorder(cand))
        cand_desc.discard(cand)
        common = sum(1 for x in descendants_b if x in m and m[x] in cand_desc)
        denom = len(descendants_b) + len(cand_desc)
        dice = 2.0 * common / denom if denom else 0.0
        scored.append((-dice, patched.depths[cand], cand))
    scored.sort()
    neg_dice, _, cand = scored[0]
    if -neg_dice >= _MIN_DICE or (b == buggy.root and cand == patched.root):
        return cand
    return None


def _recover_children(buggy, patched, b, p, m, matched_p, dig_b, dig_p) -> None:
    """Pair leftover children of a recovered pair: digest LCS, then same-kind
    positional alignment, recursing into inner pairs."""
    free_b = [c for c in buggy.children(b) if c not in m]
    free_p = [c for c in patched.children(p) if c not in matched_p]
    if not free_b or not free_p:
        return
    lcs = _lcs(free_b, free_p, lambda x, y: dig_b[x] == dig_p[y])
    in_lcs_b = {x for x, _ in lcs}
    in_lcs_p = {y for _, y in lcs}
    for x, y in lcs:
        for u, v in zip(buggy.preorder(x), patched.preorder(y)):
            m[u] = v
            matched_p.add(v)
    rest_b = [c for c in free_b if c not in in_lcs_b]
    rest_p = [c for c in free_p if c not in in_lcs_p]
    by_kind_p: dict[str, list[int]] = {}
    for c in rest_p:
        by_kind_p.setdefault(patched.kind(c), []).append(c)
    for x in rest_b:
        pool = by_kind_p.get(buggy.kind(x))
        if not pool:
            continue
        y = pool.pop(0)
        is_leaf_x = not buggy.children(x)
        is_leaf_y = not patched.children(y)
        if is_leaf_x != is_leaf_y:
            continue
        m[x] = y
        matched_p.add(y)
        if not is_leaf_x:
            _recover_children(buggy, patched, x, y, m, matched_p, dig_b, dig_p)


def _lcs(xs, ys, eq):
    n, k = len(xs), len(ys)
    table = [[0] * (k + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(k - 1, -1, -1):
            if eq(xs[i], ys[j]):
                table[i][j] = table[i + 1][j + 1] + 1
            else:
                table[i][j] = max(table[i + 1][j], table[i][j + 1])
    out = []
    i = j = 0
    while i < n and j < k:
        if eq(xs[i], ys[j]):
            out.append((xs[i], ys[j]))
            i += 1
            j += 1
        elif table[i + 1][j] >= table[i][j + 1]:
            i += 1
        else:
            j += 1
    return out


# ------------------------------------------------------------- working tree


class _WorkTree:
    """Mutable tree used while generating and replaying edit scripts.

    Node ids 0..n-1 mirror the buggy tree; added nodes append after that,
    in script order, so generation and replay agree on addressing.
    """

    def __init__(self, ast: NormalizedAst):
        self.kinds = [n.kind for n in ast.nodes]
        self.labels = [n.label for n in ast.nodes]
        self.children = [list(n.children) for n in ast.nodes]
        self.parent = list(ast.parents)
        self.root = ast.root

    def add_node(self, kind: str, label: str) -> int:
        self.kinds.append(kind)
        self.labels.append(label)
        self.children.append([])
        self.parent.append(-1)
        return len(self.kinds) - 1

    def valid(self, nid) -> bool:
        return isinstance(nid, int) and 0 <= nid < len(self.kinds)

    def insert_child(self, parent: int, position: int, child: int) -> None:
        position = min(position, len(self.children[parent]))
        self.children[parent].insert(position, child)
        self.parent[child] = parent

    def detach(self, nid: int) -> None:
        par = self.parent[nid]
        if par != -1:
            self.children[par].remove(nid)
        self.parent[nid] = -1

    def postorder(self, nid: int):
        out = []
        stack = [(nid, False)]
        while stack:
            cur, expanded = stack.pop()
            if expanded:
                out.append(cur)
                continue
            stack.append((cur, True))
            for child in reversed(self.children[cur]):
                stack.append((child, False))
        return out

    def to_ast(self, source_path: str, grammar_id: str) -> NormalizedAst:
        order = []
        stack = [self.root]
        while stack:
            cur = stack.pop()
            order.append(cur)
            stack.extend(reversed(self.children[cur]))
        remap = {old: new for new, old in enumerate(order)}
        nodes = [
            AstNode(
                remap[old],
                self.kinds[old],
                self.labels[old],
                tuple(remap[c] for c in self.children[old]),
                (0, 0),
            )
            for old in order
        ]
        return NormalizedAst(0, nodes, source_path, grammar_id)


# ---------------------------------------------------------------- edit script


def diff(buggy: NormalizedAst, patched: NormalizedAst) -> EditScript:
    """Compute an edit script turning buggy into a tree isomorphic to patched."""
    if buggy.grammar_id != patched.grammar_id:
        raise GrammarMismatchError(
            f"cannot diff {buggy.grammar_id!r} against {patched.grammar_id!r}"
        )
    matching = _match_trees(buggy, patched)
    actions = _generate_actions(buggy, patched, matching)
    upd_pairs = {
        a.src: a.dst for a in actions if a.op == UPD and a.src < len(buggy.nodes)
    }
    mapping = {b: p for b, p in sorted(matching.items()) if b not in upd_pairs}
    return EditScript(actions=actions, mapping=mapping, upd_pairs=upd_pairs)


def _generate_actions(
    buggy: NormalizedAst, patched: NormalizedAst, matching: dict[int, int]
) -> list[EditAction]:
    work = _WorkTree(buggy)
    w2p: dict[int, int] = dict(matching)
    p2w: dict[int, int] = {p: w for w, p in matching.items()}
    src_in_order: set[int] = set()
    dst_in_order: set[int] = set()
    actions: list[EditAction] = []

    def find_pos(y: int) -> int:
        parent = patched.parent(y)
        siblings = patched.children(parent)
        for c in siblings:
            if c in dst_in_order:
                if c == y:
                    return 0
                break
        v = None
        for c in siblings:
            if c == y:
                break
            if c in dst_in_order:
                v = c
        if v is None:
            return 0
        u = p2w[v]
        return work.children[work.parent[u]].index(u) + 1

    def align_children(w: int, y: int) -> None:
        src_in_order.difference_update(work.children[w])
        dst_in_order.difference_update(patched.children(y))
        s1 = [
            c
            for c in work.children[w]
            if c in w2p and w2p[c] in patched.children(y)
        ]
        s2 = [
            c
            for c in patched.children(y)
            if c in p2w and p2w[c] in work.children[w]
        ]
        lcs = _lcs(s1, s2, lambda a, b: w2p.get(a) == b)
        for a, b in lcs:
            src_in_order.add(a)
            dst_in_order.add(b)
        lcs_pairs = set(lcs)
        for b in s2:
            a = p2w[b]
            if a in s1 and (a, b) not in lcs_pairs:
                k = find_pos(b)
                actions.append(EditAction(MOV, src=a, dst=b, parent=w, position=k))
                work.detach(a)
                work.insert_child(w, k, a)
                src_in_order.add(a)
                dst_in_order.add(b)

    queue = [patched.root]
    while queue:
        y = queue.pop(0)
        queue.extend(patched.children(y))
        if y not in p2w:
            z = p2w[patched.parent(y)]
            k = find_pos(y)
            node = patched.node(y)
            w_new = work.add_node(node.kind, node.label)
            actions.append(
                EditAction(
                    ADD,
                    dst=y,
                    parent=z,
                    position=k,
                    kind=node.kind,
                    label=node.label,
                )
            )
            work.insert_child(z, k, w_new)
            w2p[w_new] = y
            p2w[y] = w_new
            src_in_order.add(w_new)
            dst_in_order.add(y)
            w = w_new
        else:
            w = p2w[y]
            if y != patched.root:
                if work.labels[w] != patched.label(y):
                    actions.append(
                        EditAction(UPD, src=w, dst=y, label=patched.label(y))
                    )
                    work.labels[w] = patched.label(y)
                if w2p.get(work.parent[w]) != patched.parent(y):
                    z = p2w[patched.parent(y)]
                    k = find_pos(y)
                    actions.append(
                        EditAction(MOV, src=w, dst=y, parent=z, position=k)
                    )
                    work.detach(w)
                    work.insert_child(z, k, w)
                    src_in_order.add(w)
                    dst_in_order.add(y)
        align_children(w, y)

    for w in work.postorder(work.root):
        if w not in w2p:
            actions.append(EditAction(DEL, src=w))
            work.detach(w)
    return actions


def apply(buggy: NormalizedAst, script: EditScript) -> NormalizedAst:
    """Replay an edit script on a working copy of buggy.

    The returned tree carries zero-width spans (no concrete source exists
    for it); raises InvalidScriptError on stale node references.
    """
    work = _WorkTree(buggy)
    for action in script.actions:
        if action.op == ADD:
            if not work.valid(action.parent):
                raise InvalidScriptError(f"ADD references unknown parent {action.parent}")
            node = work.add_node(action.kind, action.label)
            work.insert_child(action.parent, action.position, node)
        elif action.op == UPD:
            if not work.valid(action.src):
                raise InvalidScriptError(f"UPD references unknown node {action.src}")
            work.labels[action.src] = action.label
        elif action.op == MOV:
            if not work.valid(action.src) or not work.valid(action.parent):
                raise InvalidScriptError(f"MOV references unknown node {action.src}")
            if action.src == work.root:
                raise InvalidScriptError("cannot move the root")
            work.detach(action.src)
            work.insert_child(action.parent, action.position, action.src)
        elif action.op == DEL:
            if not work.valid(action.src):
                raise InvalidScriptError(f"DEL references unknown node {action.src}")
            if action.src == work.root:
                raise InvalidScriptError("cannot delete the root")
            work.detach(action.src)
        else:
            raise InvalidScriptError(f"unknown op {action.op!r}")
    return work.to_ast(buggy.source_path, buggy.grammar_id)


def changed_statements(
    script: EditScript, buggy: NormalizedAst, patched: NormalizedAst
) -> tuple[list[int], list[int]]:
    """Nearest enclosing statements of every action anchor, outermost only.

    Returns (buggy-side, patched-side) statement ids in source order.  A
    statement contained in another changed statement is dropped, so wrapping
    edits report the wrapper rather than every statement inside it.
    """
    src_set: set[int] = set()
    dst_set: set[int] = set()
    n_buggy = len(buggy.nodes)
    for action in script.actions:
        if action.op in (UPD, DEL, MOV) and action.src is not None and action.src < n_buggy:
            stmt = buggy.nearest_statement(action.src)
            if stmt is not None:
                src_set.add(stmt)
        if action.op in (UPD, ADD, MOV) and action.dst is not None:
            stmt = patched.nearest_statement(action.dst)
            if stmt is not None:
                dst_set.add(stmt)
    return _collapse(buggy, src_set), _collapse(patched, dst_set)


def _collapse(ast: NormalizedAst, stmts: set[int]) -> list[int]:
    kept = [
        s
        for s in stmts
        if not any(a in stmts for a in ast.ancestors(s))
    ]
    return sorted(kept, key=lambda s: (ast.node(s).span[0], s))


def format_script(
    script: EditScript, buggy: NormalizedAst, patched: NormalizedAst
) -> str:
    """Line-oriented debug format: `OP src_path dst_path position`."""
    n_buggy = len(buggy.nodes)
    lines = []
    for action in script.actions:
        src_path = (
            buggy.path(action.src)
            if action.src is not None and action.src < n_buggy
            else "-"
        )
        dst_path = patched.path(action.dst) if action.dst is not None else "-"
        position = str(action.position) if action.position is not None else "-"
        lines.append(f"{action.op} {src_path} {dst_path} {position}")
    return "\n".join(lines)
