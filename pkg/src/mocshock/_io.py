"""Deterministic, atomic artifact writers."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np


def atomic_write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def format_csv(header, columns, comment: str | None = None) -> str:
    """CSV text with every number in shortest round-trip form (``repr(float)``)."""
    cols = [np.asarray(c, dtype=float).ravel().tolist() for c in columns]
    lines = []
    if comment is not None:
        lines.append(f"# {comment}")
    lines.append(",".join(header))
    lines.extend(",".join(map(repr, row)) for row in zip(*cols))
    return "\n".join(lines) + "\n"


def write_csv(path, header, columns, comment=None) -> Path:
    return atomic_write_text(path, format_csv(header, columns, comment))


def write_json(path, payload) -> Path:
    return atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True, allow_nan=True) + "\n")
