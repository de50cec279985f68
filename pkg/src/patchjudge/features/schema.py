"""Versioned feature schema: 202 raw features and their one-hot expansion.

Layout per version "1":
  150 code-description flags (50 each for the SRC, FORMER and LATTER
  windows), 26 repair-pattern flags, 26 contextual features of which 9 are
  strings expanded one-hot over a fixed vocabulary.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..ast_core.tree import STATEMENT_KINDS
from ..errors import SchemaMismatchError

OPERATOR_FEATURES = (
    "opAdd",
    "opSub",
    "opMul",
    "opDiv",
    "opMod",
    "opEqual",
    "opNotEqual",
    "opLessThan",
    "opLessEqual",
    "opGreaterThan",
    "opGreaterEqual",
    "uopInc",
    "uopDec",
    "opBitwise",
)

VARIABLE_FEATURES = ("localVar", "globalVar", "abstVar", "primVar", "enum")

STATEMENT_FEATURES = (
    "assignConst",
    "assignLhs",
    "assignZero",
    "callee",
    "callArgument",
    "stmtCond",
    "stmtCall",
    "stmtLoop",
    "memberAccess",
    "funcArgument",
    "stmtAssign",
    "stmtReturn",
    "stmtTry",
    "stmtBranch",
    "stmtBreak",
    "stmtContinue",
    "stmtThrow",
    "stmtNew",
    "stmtCast",
    "stmtDecl",
    "constant",
)

AST_OPERATION_FEATURES = (
    "insertStmt",
    "insertCond",
    "replaceCond",
    "replaceStmt",
    "removePartialIf",
    "removeWholeBlock",
    "removeStmt",
    "updateStmt",
    "moveStmt",
    "updateLiteral",
)

CODE_DESCRIPTION_FEATURES = (
    OPERATOR_FEATURES + VARIABLE_FEATURES + STATEMENT_FEATURES + AST_OPERATION_FEATURES
)

REPAIR_PATTERN_FEATURES = (
    "wrapsIf",
    "wrapsElse",
    "wrapsLoop",
    "wrapsTryCatch",
    "unwrapTryCatch",
    "wrapsIfElse",
    "unwrapIfElse",
    "wrapsMethod",
    "unwrapMethod",
    "expLogicExpand",
    "expArithMod",
    "expLogicReduce",
    "expLogicMod",
    "condBlockOthersAdd",
    "condBlockRem",
    "condBlockExcAdd",
    "condBlockRetAdd",
    "missNullCheckP",
    "missNullCheckN",
    "codeMove",
    "copyPaste",
    "wrongVarRef",
    "wrongMethodRef",
    "singleLine",
    "constChange",
    "notClassified",
)

CONTEXTUAL_STRING_FEATURES = (
    "typeOfFaultyStatement",
    "typeOfFaultyStatementParent",
    "typeOfFaultyStatementBefore1",
    "typeOfFaultyStatementBefore2",
    "typeOfFaultyStatementBefore3",
    "typeOfFaultyStatementAfter1",
    "typeOfFaultyStatementAfter2",
    "typeOfFaultyStatementAfter3",
    "faultyClassExceptionType",
)

CONTEXTUAL_BINARY_FEATURES = (
    "methodCallWithNullGuard",
    "methodCallWithTryCatch",
    "inSynchronizedMethod",
    "hasObjectiveMethodCall",
    "methodThrowsException",
    "methodCallWithNormalGuard",
    "hasInvocationsProneException",
    "similarObjectTypeWithNormalGuard",
    "similarObjectTypeWithNullGuard",
    "similarPrimitiveTypeWithNormalGuard",
    "similarPrimitiveTypeWithNullGuard",
    "fieldNotAssigned",
    "fieldNotUsed",
    "localVarNotAssigned",
    "localVarNotUsed",
    "objectUsedInAssignment",
    "primitiveUsedInAssignment",
)

STATEMENT_KIND_VOCAB = STATEMENT_KINDS + ("none",)

EXCEPTION_CATEGORY_VOCAB = ("none", "runtime", "checked", "error", "throwable", "other")


def former_name(name: str) -> str:
    return "former" + name[0].upper() + name[1:]


def latter_name(name: str) -> str:
    return "latter" + name[0].upper() + name[1:]


@dataclass(frozen=True)
class FeatureEntry:
    name: str
    kind: str  # binary | string
    group: str


class FeatureSchema:
    def __init__(
        self,
        version: str,
        entries: tuple[FeatureEntry, ...],
        string_vocab: dict[str, tuple[str, ...]],
    ):
        self.version = version
        self.entries = entries
        self.string_vocab = string_vocab
        names = [e.name for e in entries]
        if len(set(names)) != len(names):
            raise SchemaMismatchError("duplicate feature names in schema")
        self.names = tuple(names)
        columns: list[str] = []
        index: dict[str, int] = {}
        for entry in entries:
            if entry.kind == "binary":
                index[entry.name] = len(columns)
                columns.append(entry.name)
            else:
                for value in string_vocab[entry.name]:
                    index[f"{entry.name}_{value}"] = len(columns)
                    columns.append(f"{entry.name}_{value}")
        self.expanded_columns = tuple(columns)
        self.column_index = index

    @property
    def raw_count(self) -> int:
        return len(self.entries)

    @property
    def expanded_length(self) -> int:
        return len(self.expanded_columns)

    def entries_in_group(self, group: str) -> list[FeatureEntry]:
        return [e for e in self.entries if e.group == group]


@lru_cache(maxsize=None)
def build_schema(version: str = "1") -> FeatureSchema:
    if version != "1":
        raise SchemaMismatchError(f"unknown feature schema version {version!r}")
    entries: list[FeatureEntry] = []
    for name in CODE_DESCRIPTION_FEATURES:
        entries.append(FeatureEntry(name, "binary", "code-description-SRC"))
    for name in CODE_DESCRIPTION_FEATURES:
        entries.append(FeatureEntry(former_name(name), "binary", "code-description-FORMER"))
    for name in CODE_DESCRIPTION_FEATURES:
        entries.append(FeatureEntry(latter_name(name), "binary", "code-description-LATTER"))
    for name in REPAIR_PATTERN_FEATURES:
        entries.append(FeatureEntry(name, "binary", "repair-pattern"))
    vocab: dict[str, tuple[str, ...]] = {}
    for name in CONTEXTUAL_STRING_FEATURES:
        entries.append(FeatureEntry(name, "string", "contextual"))
        vocab[name] = (
            EXCEPTION_CATEGORY_VOCAB
            if name == "faultyClassExceptionType"
            else STATEMENT_KIND_VOCAB
        )
    for name in CONTEXTUAL_BINARY_FEATURES:
        entries.append(FeatureEntry(name, "binary", "contextual"))
    return FeatureSchema(version, tuple(entries), vocab)
