"""patchjudge: static assessment of automatic-program-repair patches.

Pipeline: parse buggy/patched sources into normalized syntax trees, diff
them into edit scripts, extract a fixed 202-feature description per patch,
and score patches with a deterministic gradient-boosted tree ensemble.
"""

__version__ = "0.1.0"

FEATURE_SCHEMA_VERSION = "1"
