"""Bundled example files.

The corpus ships inside the package so the test suite and the CLI examples
run offline.  Files are grouped by extension: .disp holds dispersion specs,
.inst term systems, .graph dependency graphs.
"""

from __future__ import annotations

from pathlib import Path

from .errors import ValidationError

_DIR = Path(__file__).parent / "corpus"

EXTENSIONS = (".disp", ".inst", ".graph")


def corpus_dir() -> Path:
    return _DIR


def corpus_path(name: str) -> Path:
    """Resolve a bundled file by name, extension included."""
    path = _DIR / name
    if not path.is_file():
        raise ValidationError(f"no bundled example named {name!r}")
    return path


def corpus_names(suffix: str | None = None) -> list[str]:
    """Sorted names of bundled files, optionally filtered by extension."""
    names = [p.name for p in _DIR.iterdir()
             if p.suffix in EXTENSIONS and (suffix is None or p.suffix == suffix)]
    return sorted(names)
