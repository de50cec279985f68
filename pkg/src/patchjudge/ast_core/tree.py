"""Language-neutral syntax tree produced by grammar adapters.

Nodes live in a flat table indexed by id (preorder of the source), so the
same tree can be shared read-only across workers.  Only leaves carry labels
(identifier names, literal text, operator symbols); inner nodes are pure
structure.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property

# Statement-level kinds.  Grammar adapters must map every statement-level
# concrete node onto exactly one of these.
STATEMENT_KINDS = (
    "assignment",
    "conditional",
    "loop",
    "try",
    "catch",
    "return",
    "invocation",
    "case",
    "break",
    "continue",
    "throw",
    "declaration",
    "block",
    "method",
    "class",
    "constructor",
    "synchronized",
    "other",
)

# Kinds usable as "the changed statement" anchors.  Plain blocks are
# structural containers, not modification sites, so they never anchor.
ANCHOR_STATEMENT_KINDS = frozenset(STATEMENT_KINDS) - {"block"}


@dataclass(frozen=True)
class AstNode:
    id: int
    kind: str
    label: str
    children: tuple[int, ...]
    span: tuple[int, int]

    @property
    def is_leaf(self) -> bool:
        return not self.children


class NormalizedAst:
    """A single rooted tree over a flat node table.

    Instances are immutable after construction; derived indexes (parents,
    depths) are computed lazily and cached.  Trees built by ``apply`` on an
    edit script carry zero-width spans since they have no concrete source.
    """

    def __init__(self, root: int, nodes: list[AstNode], source_path: str, grammar_id: str):
        self.root = root
        self.nodes = nodes
        self.source_path = source_path
        self.grammar_id = grammar_id

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> AstNode:
        return self.nodes[node_id]

    def kind(self, node_id: int) -> str:
        return self.nodes[node_id].kind

    def label(self, node_id: int) -> str:
        return self.nodes[node_id].label

    def children(self, node_id: int) -> tuple[int, ...]:
        return self.nodes[node_id].children

    @cached_property
    def parents(self) -> list[int]:
        """Parent id per node; the root's parent is -1."""
        parents = [-1] * len(self.nodes)
        for node in self.nodes:
            for child in node.children:
                parents[child] = node.id
        return parents

    def parent(self, node_id: int) -> int:
        return self.parents[node_id]

    def ancestors(self, node_id: int):
        """Yield ancestors from the immediate parent up to the root."""
        cur = self.parents[node_id]
        while cur != -1:
            yield cur
            cur = self.parents[cur]

    def preorder(self, node_id: int | None = None):
        """Yield node ids of the subtree rooted at node_id, preorder."""
        stack = [self.root if node_id is None else node_id]
        while stack:
            cur = stack.pop()
            yield cur
            stack.extend(reversed(self.nodes[cur].children))

    def postorder(self, node_id: int | None = None):
        out = []
        stack = [(self.root if node_id is None else node_id, False)]
        while stack:
            cur, expanded = stack.pop()
            if expanded:
                out.append(cur)
                continue
            stack.append((cur, True))
            for child in reversed(self.nodes[cur].children):
                stack.append((child, False))
        return out

    def is_statement(self, node_id: int) -> bool:
        return self.nodes[node_id].kind in STATEMENT_KINDS

    def nearest_statement(self, node_id: int) -> int | None:
        """Nearest self-or-ancestor whose kind anchors a statement.

        Plain blocks are skipped; returns None when nothing above the node
        is statement-level (e.g. package/import clauses).
        """
        cur = node_id
        while cur != -1:
            if self.nodes[cur].kind in ANCHOR_STATEMENT_KINDS:
                return cur
            cur = self.parents[cur]
        return None

    def subtree_ids(self, node_id: int) -> list[int]:
        return list(self.preorder(node_id))

    def is_ancestor(self, anc: int, node_id: int) -> bool:
        cur = self.parents[node_id]
        while cur != -1:
            if cur == anc:
                return True
            cur = self.parents[cur]
        return False

    @cached_property
    def depths(self) -> list[int]:
        depths = [0] * len(self.nodes)
        for nid in self.preorder():
            for child in self.nodes[nid].children:
                depths[child] = depths[nid] + 1
        return depths

    def child_index(self, node_id: int) -> int:
        parent = self.parents[node_id]
        if parent == -1:
            return 0
        return self.nodes[parent].children.index(node_id)

    def path(self, node_id: int) -> str:
        """Slash-joined child indexes from the root, for debug output."""
        steps: list[str] = []
        cur = node_id
        while self.parents[cur] != -1:
            steps.append(str(self.child_index(cur)))
            cur = self.parents[cur]
        return "/".join(reversed(steps)) or "."

    def node_at_path(self, path: str) -> int:
        cur = self.root
        if path in (".", ""):
            return cur
        for step in path.split("/"):
            cur = self.nodes[cur].children[int(step)]
        return cur


def subtree_digest(ast: NormalizedAst, node_id: int, _cache: dict | None = None) -> bytes:
    """Deterministic structural fingerprint of a subtree.

    Two subtrees share a digest iff they are isomorphic (same kinds, labels,
    child order).  Independent of node ids, spans and hash randomization.
    """
    if _cache is None:
        _cache = {}
    order = ast.postorder(node_id)
    for nid in order:
        if nid in _cache:
            continue
        node = ast.nodes[nid]
        h = hashlib.blake2b(digest_size=16)
        h.update(node.kind.encode())
        h.update(b"\x1f")
        h.update(node.label.encode())
        for child in node.children:
            h.update(b"\x1e")
            h.update(_cache[child])
        _cache[nid] = h.digest()
    return _cache[node_id]


def all_subtree_digests(ast: NormalizedAst) -> dict[int, bytes]:
    cache: dict[int, bytes] = {}
    subtree_digest(ast, ast.root, cache)
    return cache


def isomorphic(a: NormalizedAst, b: NormalizedAst) -> bool:
    """Structural equality: kinds, labels and child order, ignoring spans."""
    return subtree_digest(a, a.root) == subtree_digest(b, b.root)


def validate_tree(ast: NormalizedAst) -> None:
    """Check the structural invariants; raises AssertionError on violation.

    Span containment/ordering is only enforced for concretely parsed trees
    (those with a non-degenerate root span).
    """
    seen_parent: dict[int, int] = {}
    for idx, node in enumerate(ast.nodes):
        assert node.id == idx, f"node id {node.id} does not match table slot {idx}"
        for child in node.children:
            assert child not in seen_parent, f"node {child} has two parents"
            seen_parent[child] = node.id
    reachable = set(ast.preorder())
    assert len(reachable) == len(ast.nodes), "unreachable or cyclic nodes"
    assert ast.root not in seen_parent, "root has a parent"

    root_span = ast.nodes[ast.root].span
    if root_span[1] > root_span[0]:
        for node in ast.nodes:
            prev_end = None
            for child in node.children:
                cspan = ast.nodes[child].span
                assert node.span[0] <= cspan[0] and cspan[1] <= node.span[1], (
                    f"child {child} span {cspan} escapes parent {node.id} span {node.span}"
                )
                if prev_end is not None:
                    assert cspan[0] >= prev_end, f"sibling spans overlap at node {child}"
                prev_end = cspan[1]
    for node in ast.nodes:
        if node.children:
            assert node.label == "", f"inner node {node.id} carries a label"


@dataclass
class TreeBuilder:
    """Accumulates nodes during parsing; ids are assigned in preorder."""

    source_path: str
    grammar_id: str
    nodes: list[AstNode] = field(default_factory=list)

    def add(self, kind: str, label: str, children: list[int], span: tuple[int, int]) -> int:
        node_id = len(self.nodes)
        self.nodes.append(AstNode(node_id, kind, label, tuple(children), span))
        return node_id

    def build(self, root: int) -> NormalizedAst:
        # re-number to preorder so sibling order equals id order
        order = []
        stack = [root]
        while stack:
            cur = stack.pop()
            order.append(cur)
            stack.extend(reversed(self.nodes[cur].children))
        remap = {old: new for new, old in enumerate(order)}
        nodes = [
            AstNode(
                remap[old],
                self.nodes[old].kind,
                self.nodes[old].label,
                tuple(remap[c] for c in self.nodes[old].children),
                self.nodes[old].span,
            )
            for old in order
        ]
        return NormalizedAst(0, nodes, self.source_path, self.grammar_id)
