"""Bundled corpus: desk-scale instances with known verdicts.

Each instance exercises one side of a test-construction dichotomy on a
presentation whose word problem the engines decide outright, so the
expected certificate outcome is recorded in the manifest and checked by
the acceptance suite.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def corpus_dir() -> Path:
    return Path(str(resources.files(__package__)))


def bundled_manifest() -> Path:
    path = corpus_dir() / "manifest.tsv"
    if not path.is_file():
        raise FileNotFoundError(f"bundled manifest missing at {path}")
    return path
