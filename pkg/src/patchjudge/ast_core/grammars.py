"""Grammar adapter registry.

Concrete parsing is pluggable: an adapter declares its grammar id, the file
extensions it claims, and a versioned mapping from concrete node kinds onto
the normalized kind set.  The Java adapter ships by default and loads its
mapping table from the bundled ``grammar_java_v1.json``.
"""

from __future__ import annotations

import json
from importlib import resources

from ..errors import UnknownGrammarError
from .java_parser import JavaParser
from .tree import NormalizedAst


class GrammarAdapter:
    def __init__(self, grammar_id: str, extensions: tuple[str, ...], mapping_version: str):
        self.grammar_id = grammar_id
        self.extensions = extensions
        self.mapping_version = mapping_version

    def parse(self, source_text: str, source_path: str) -> NormalizedAst:
        raise NotImplementedError


class JavaAdapter(GrammarAdapter):
    def __init__(self):
        spec = json.loads(
            resources.files("patchjudge.data").joinpath("grammar_java_v1.json").read_text()
        )
        super().__init__(spec["grammar_id"], tuple(spec["extensions"]), spec["mapping_version"])
        self.kind_map = spec["kinds"]

    def parse(self, source_text: str, source_path: str) -> NormalizedAst:
        return JavaParser(source_text, source_path, self.kind_map, self.grammar_id).parse()


_REGISTRY: dict[str, GrammarAdapter] = {}


def register_adapter(adapter: GrammarAdapter) -> None:
    _REGISTRY[adapter.grammar_id] = adapter


def get_adapter(grammar_id: str) -> GrammarAdapter:
    try:
        return _REGISTRY[grammar_id]
    except KeyError:
        raise UnknownGrammarError(
            f"no grammar adapter registered for {grammar_id!r}"
        ) from None


def adapter_for_path(path: str) -> GrammarAdapter:
    for adapter in _REGISTRY.values():
        if any(str(path).endswith(ext) for ext in adapter.extensions):
            return adapter
    raise UnknownGrammarError(f"no grammar adapter claims file {path!r}")


def parse_source(
    source_text: str, grammar_id: str = "java", source_path: str = "<memory>"
) -> NormalizedAst:
    """Parse concrete source into a normalized tree.

    Pure function of (source_text, grammar_id); raises SourceSyntaxError on
    malformed input and UnknownGrammarError for unregistered grammars.
    """
    return get_adapter(grammar_id).parse(source_text, source_path)


register_adapter(JavaAdapter())
