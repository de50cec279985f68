"""Exception hierarchy shared by all patchjudge modules."""


class PatchjudgeError(Exception):
    """Base class for all toolkit errors."""


class SourceSyntaxError(PatchjudgeError):
    """Concrete parser could not produce a tree.

    ``location`` is the byte offset (start, end) of the offending region.
    """

    def __init__(self, message, location=(0, 0), source_path="<memory>"):
        super().__init__(f"{source_path}[{location[0]}:{location[1]}]: {message}")
        self.location = location
        self.source_path = source_path


class UnknownGrammarError(PatchjudgeError):
    """No grammar adapter registered under the requested grammar id."""


class NotAStatementError(PatchjudgeError):
    """A statement-level query was asked about a non-statement node."""


class GrammarMismatchError(PatchjudgeError):
    """Two trees from different grammars were diffed against each other."""


class InvalidScriptError(PatchjudgeError):
    """An edit action references a node that does not exist."""


class SchemaMismatchError(PatchjudgeError):
    """Feature data does not conform to the expected feature schema."""


class CorpusNotFoundError(PatchjudgeError):
    """Corpus root directory is missing or not a directory."""


class MalformedMetadataError(PatchjudgeError):
    """A patch directory carries unreadable or incomplete metadata."""

    def __init__(self, patch_id, reason):
        super().__init__(f"patch {patch_id!r}: {reason}")
        self.patch_id = patch_id


class EmptyDatasetError(PatchjudgeError):
    """An operation requires at least one dataset row."""


class SingleClassError(PatchjudgeError):
    """Both labels are required but only one is present."""


class TooFewMinorityError(PatchjudgeError):
    """Minority resampling needs at least two minority rows."""


class TooFewRowsError(PatchjudgeError):
    """More folds requested than rows available."""


class SingleGroupError(PatchjudgeError):
    """Leave-one-group-out needs at least two distinct groups."""


class KOutOfRangeError(PatchjudgeError):
    """Requested top-k exceeds the number of available columns."""


class LengthMismatchError(PatchjudgeError):
    """Paired sequences have different lengths."""
