"""Access to the example programs and problems shipped inside the package."""

from __future__ import annotations

from importlib import resources

__all__ = ["bundled_names", "load_bundled_text", "resolve_source"]


def _data_dir():
    return resources.files(__package__).joinpath("data")


def bundled_names() -> list:
    return sorted(entry.name for entry in _data_dir().iterdir() if entry.is_file())


def load_bundled_text(name: str) -> str:
    entry = _data_dir().joinpath(name)
    if not entry.is_file():
        raise FileNotFoundError(f"no bundled file named {name!r}")
    return entry.read_text()


def resolve_source(path_or_name: str, suffix: str) -> str:
    """Read a file from disk, falling back to the bundled copy of that name."""
    import os

    if os.path.exists(path_or_name):
        with open(path_or_name, "r", encoding="utf-8") as fh:
            return fh.read()
    candidate = os.path.basename(path_or_name)
    if not candidate.endswith(suffix):
        candidate += suffix
    try:
        return load_bundled_text(candidate)
    except FileNotFoundError:
        raise FileNotFoundError(
            f"{path_or_name!r} is neither a file nor a bundled name"
            f" (bundled: {', '.join(bundled_names())})"
        ) from None
