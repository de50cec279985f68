"""Corpus ingestion: labeled patches on disk -> patch records.

Layout: ``<root>/<patch_id>/metadata.json`` plus ``buggy/`` and ``patched/``
source trees mirroring repository paths.  Metadata carries project, tool,
label and the file-pair list:

    {"project": "Math", "tool": "Arja", "label": "overfitting",
     "files": [{"buggy": "src/Foo.java", "patched": "src/Foo.java"}]}

Unreadable patches are skipped with a logged warning; only a missing corpus
root aborts the run.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .ast_core.java_lexer import tokenize
from .errors import CorpusNotFoundError, MalformedMetadataError, SourceSyntaxError

logger = logging.getLogger(__name__)

LABELS = ("correct", "overfitting")


@dataclass
class PatchRecord:
    patch_id: str
    project: str
    tool: str
    label: str | None  # correct | overfitting | None when unlabeled
    file_pairs: list[tuple[Path, Path]] = field(default_factory=list)


def ingest(corpus_root: str | Path) -> list[PatchRecord]:
    """One record per readable patch directory, sorted by patch id."""
    root = Path(corpus_root)
    if not root.is_dir():
        raise CorpusNotFoundError(f"corpus root {root} is not a directory")
    records: list[PatchRecord] = []
    for entry in sorted(root.iterdir()):
        if not entry.is_dir():
            continue
        try:
            records.append(_load_patch(entry))
        except MalformedMetadataError as exc:
            logger.warning("skipping patch: %s", exc)
    return records


def _load_patch(patch_dir: Path) -> PatchRecord:
    patch_id = patch_dir.name
    meta_path = patch_dir / "metadata.json"
    if not meta_path.is_file():
        raise MalformedMetadataError(patch_id, "metadata.json missing")
    try:
        meta = json.loads(meta_path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedMetadataError(patch_id, f"unreadable metadata: {exc}") from exc
    for key in ("project", "tool", "files"):
        if key not in meta:
            raise MalformedMetadataError(patch_id, f"metadata field {key!r} missing")
    label = meta.get("label")
    if label is not None and label not in LABELS:
        raise MalformedMetadataError(patch_id, f"unknown label {label!r}")
    pairs: list[tuple[Path, Path]] = []
    for pair in meta["files"]:
        buggy = patch_dir / "buggy" / pair["buggy"]
        patched = patch_dir / "patched" / pair["patched"]
        if not buggy.is_file() or not patched.is_file():
            raise MalformedMetadataError(patch_id, f"missing source file in pair {pair}")
        pairs.append((buggy, patched))
    if not pairs:
        raise MalformedMetadataError(patch_id, "patch has no file pairs")
    return PatchRecord(patch_id, meta["project"], meta["tool"], label, pairs)


def deduplicate(records: list[PatchRecord]) -> list[PatchRecord]:
    """Drop patches whose token content equals an earlier patch.

    Two patches are duplicates iff their file pairs carry identical token
    streams (comments and whitespace stripped) on both the buggy and the
    patched side; paths and formatting are ignored.  First in input order
    wins.
    """
    seen: set[tuple] = set()
    kept: list[PatchRecord] = []
    for record in records:
        try:
            signature = _token_signature(record)
        except (SourceSyntaxError, OSError) as exc:
            logger.warning("skipping patch %s during dedup: %s", record.patch_id, exc)
            continue
        if signature in seen:
            logger.info("dropping duplicate patch %s", record.patch_id)
            continue
        seen.add(signature)
        kept.append(record)
    return kept


def _token_signature(record: PatchRecord) -> tuple:
    pair_sigs = []
    for buggy, patched in record.file_pairs:
        pair_sigs.append((_file_tokens(buggy), _file_tokens(patched)))
    return tuple(sorted(pair_sigs))


def _file_tokens(path: Path) -> tuple:
    return tuple(
        (t.type, t.text) for t in tokenize(path.read_text(), str(path)) if t.type != "eof"
    )
