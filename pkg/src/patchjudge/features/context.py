"""Shared per-diff view used by all three feature extractors."""

from __future__ import annotations

from functools import cached_property

from ..ast_core.tree import ANCHOR_STATEMENT_KINDS, NormalizedAst, all_subtree_digests
from ..diffing import ADD, DEL, EditScript, MOV, UPD, changed_statements

# statement kinds that do not contain other statements
SIMPLE_STATEMENT_KINDS = frozenset(
    {"assignment", "invocation", "return", "throw", "declaration", "break", "continue", "other"}
)


class DiffView:
    """Buggy/patched trees plus an edit script, with derived indexes.

    Everything here is read-only and computed lazily; one instance serves
    the code-description, repair-pattern and contextual extractors.
    """

    def __init__(self, buggy: NormalizedAst, patched: NormalizedAst, script: EditScript):
        self.buggy = buggy
        self.patched = patched
        self.script = script

    @cached_property
    def stmt_pair(self) -> tuple[list[int], list[int]]:
        return changed_statements(self.script, self.buggy, self.patched)

    @property
    def src_stmts(self) -> list[int]:
        return self.stmt_pair[0]

    @property
    def dst_stmts(self) -> list[int]:
        return self.stmt_pair[1]

    @cached_property
    def added_nodes(self) -> set[int]:
        return {a.dst for a in self.script.actions if a.op == ADD}

    @cached_property
    def deleted_nodes(self) -> set[int]:
        return {a.src for a in self.script.actions if a.op == DEL}

    @cached_property
    def matched_dst(self) -> set[int]:
        return self.script.matched_dst_ids()

    @cached_property
    def upd_actions(self) -> list:
        return [a for a in self.script.actions if a.op == UPD]

    @cached_property
    def mov_actions(self) -> list:
        return [a for a in self.script.actions if a.op == MOV and a.src < len(self.buggy.nodes)]

    def is_added(self, patched_id: int) -> bool:
        return patched_id in self.added_nodes

    def is_deleted(self, buggy_id: int) -> bool:
        return buggy_id in self.deleted_nodes

    @cached_property
    def buggy_digests(self) -> dict[int, bytes]:
        return all_subtree_digests(self.buggy)

    @cached_property
    def patched_digests(self) -> dict[int, bytes]:
        return all_subtree_digests(self.patched)

    @cached_property
    def mapped_statement_pairs(self) -> list[tuple[int, int]]:
        """Statement-level pairs present on both sides, buggy source order."""
        pairs = []
        for b, p in sorted(self.script.mapping.items()):
            if self.buggy.kind(b) in ANCHOR_STATEMENT_KINDS:
                pairs.append((b, p))
        return pairs

    @cached_property
    def simple_mapped_pairs(self) -> list[tuple[int, int]]:
        """Mapped pairs of non-container statements (in-place edit scope)."""
        return [
            (b, p)
            for b, p in self.mapped_statement_pairs
            if self.buggy.kind(b) in SIMPLE_STATEMENT_KINDS
        ]

    @cached_property
    def actions_in_buggy(self) -> set[int]:
        """Buggy-side anchors of every action."""
        n = len(self.buggy.nodes)
        out = set()
        for a in self.script.actions:
            if a.op in (UPD, DEL, MOV) and a.src is not None and a.src < n:
                out.add(a.src)
        return out

    @cached_property
    def actions_in_patched(self) -> set[int]:
        out = set()
        for a in self.script.actions:
            if a.op in (UPD, ADD, MOV) and a.dst is not None:
                out.add(a.dst)
        return out

    def subtree_has_action(self, side: str, node: int, strict: bool = False) -> bool:
        ast = self.buggy if side == "buggy" else self.patched
        anchors = self.actions_in_buggy if side == "buggy" else self.actions_in_patched
        for nid in ast.preorder(node):
            if strict and nid == node:
                continue
            if nid in anchors:
                return True
        return False
