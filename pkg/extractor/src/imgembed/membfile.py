"""Writer for the binary image-embedding interchange format.

Layout, all little-endian: magic ``MEMB``, version u16, dim u32, count u32,
then per entry an id length u16, the UTF-8 id bytes, and dim float32 values.
The write is atomic: data goes to a sibling temp file that is renamed over
the target only once complete, so readers never observe a partial file.
"""

from __future__ import annotations

import os
import struct

import numpy as np

MAGIC = b"MEMB"
VERSION = 1


def write_embeddings(entries, path) -> None:
    """Write (id, vector) pairs; ids must be unique, vectors one fixed width."""
    entries = [(meme_id, np.asarray(vector, dtype="<f4")) for meme_id, vector in entries]
    if not entries:
        raise ValueError("refusing to write an empty embedding file")
    first = entries[0][1]
    if first.ndim != 1:
        raise ValueError(f"entry {entries[0][0]!r} has shape {first.shape}, expected a 1-D vector")
    dim = first.shape[0]
    seen: set[str] = set()
    for meme_id, vector in entries:
        if vector.ndim != 1 or vector.shape[0] != dim:
            raise ValueError(f"entry {meme_id!r} has shape {vector.shape}, expected ({dim},)")
        if not meme_id:
            raise ValueError("entry ids must be non-empty")
        if meme_id in seen:
            raise ValueError(f"duplicate id {meme_id!r}")
        if len(meme_id.encode("utf-8")) > 0xFFFF:
            raise ValueError(f"id too long: {meme_id!r}")
        seen.add(meme_id)

    tmp = f"{path}.tmp"
    try:
        with open(tmp, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<HII", VERSION, dim, len(entries)))
            for meme_id, vector in entries:
                raw_id = meme_id.encode("utf-8")
                fh.write(struct.pack("<H", len(raw_id)))
                fh.write(raw_id)
                fh.write(vector.tobytes())
        os.replace(tmp, path)
    except OSError:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
