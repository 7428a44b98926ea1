"""Atomic file emission."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

from ..exceptions import OutputError


def atomic_write_bytes(path: Path, payload: bytes) -> Path:
    """Write ``payload`` to a temporary sibling of ``path`` and rename it into place."""

    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        handle, temp_name = tempfile.mkstemp(
            dir=target.parent, prefix=f".{target.name}.", suffix=".tmp"
        )
        try:
            with os.fdopen(handle, "wb") as fh:
                fh.write(payload)
            os.replace(temp_name, target)
        except BaseException:
            Path(temp_name).unlink(missing_ok=True)
            raise
    except OSError as exc:
        raise OutputError(f"Unable to write {target}: {exc}") from exc
    return target


def atomic_write_text(path: Path, text: str, encoding: str = "utf-8") -> Path:
    return atomic_write_bytes(path, text.encode(encoding))


__all__ = ["atomic_write_bytes", "atomic_write_text"]
