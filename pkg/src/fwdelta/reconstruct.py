"""Streaming patch application with bounded working memory.

The old image is consumed strictly forward (skips and copies only), through
a fixed-size copy buffer, so the routine works below the RAM footprint of
the images involved. Only the patch itself is held in memory.
"""

from __future__ import annotations

import io
import logging
import os
from typing import BinaryIO

from .codec import iter_opcodes
from .errors import DeltaError, MalformedPatchError

log = logging.getLogger(__name__)

DEFAULT_COPY_BUFFER = 4096


def apply_patch(
    old: BinaryIO,
    patch: bytes,
    out,
    copy_buffer: int = DEFAULT_COPY_BUFFER,
) -> int:
    """Rebuild the new image from an old-image stream and a patch.

    `old` needs only read(); forward skips use seek(n, SEEK_CUR) when the
    stream supports it and are read through the copy buffer otherwise.
    Returns the number of bytes written to `out`. On any error the sink's
    partial output is invalid and must be discarded by the caller.
    """
    if copy_buffer < 1:
        raise ValueError("copy_buffer must be positive")
    seekable = getattr(old, "seekable", None)
    can_seek = seekable() if callable(seekable) else False
    written = 0
    for op in iter_opcodes(patch):
        if op.nbd:
            _skip(old, op.nbd, copy_buffer, can_seek)
        remaining = op.nbc
        while remaining:
            chunk = old.read(min(remaining, copy_buffer))
            if not chunk:
                raise MalformedPatchError(
                    f"old image exhausted with {remaining} bytes left to copy"
                )
            out.write(chunk)
            written += len(chunk)
            remaining -= len(chunk)
        if op.literals:
            out.write(op.literals)
            written += op.nba
    return written


def _skip(old: BinaryIO, count: int, copy_buffer: int, can_seek: bool) -> None:
    if can_seek:
        old.seek(count, os.SEEK_CUR)
        return
    while count:
        chunk = old.read(min(count, copy_buffer))
        if not chunk:
            raise MalformedPatchError(f"old image exhausted with {count} bytes left to skip")
        count -= len(chunk)


def verify(old: bytes, expected_new: bytes, patch: bytes) -> bool:
    """True iff applying `patch` to `old` reproduces `expected_new` exactly.

    Decode or apply failures count as False; I/O errors still propagate.
    """
    sink = io.BytesIO()
    try:
        apply_patch(io.BytesIO(old), patch, sink)
    except DeltaError as exc:
        log.debug("patch failed to apply: %s", exc)
        return False
    return sink.getvalue() == expected_new
