"""Binary dump format with a JSON sidecar.

Layout, all integers little-endian::

    magic  b"LCETRADE"
    u32    format version
    u32    length of the kind string, then the kind (ascii)
    u32    length of the params JSON, then the JSON (utf-8, sorted keys)
    u32    number of arrays
    per array: u32 name length, name, u32 ndim, ndim x u64 shape, int64 data

Everything is a function of the structure, so identical builds give
identical bytes.
"""
from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

from .structures import Built, restore_structure
from .text import Text, parse_generator

__all__ = ["MAGIC", "VERSION", "DumpError", "encode", "decode", "write_dump", "read_dump", "load_text"]

MAGIC = b"LCETRADE"
VERSION = 1


class DumpError(ValueError):
    pass


def _pack_str(data: bytes) -> bytes:
    return struct.pack("<I", len(data)) + data


def encode(kind: str, params: dict, arrays: dict[str, np.ndarray]) -> bytes:
    out = [MAGIC, struct.pack("<I", VERSION), _pack_str(kind.encode("ascii"))]
    out.append(_pack_str(json.dumps(params, sort_keys=True).encode("utf-8")))
    out.append(struct.pack("<I", len(arrays)))
    for name in sorted(arrays):
        arr = np.ascontiguousarray(arrays[name], dtype="<i8")
        out.append(_pack_str(name.encode("utf-8")))
        out.append(struct.pack("<I", arr.ndim))
        out.append(struct.pack(f"<{arr.ndim}Q", *arr.shape))
        out.append(arr.tobytes())
    return b"".join(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data, self.pos = data, 0

    def take(self, size: int) -> bytes:
        if self.pos + size > len(self.data):
            raise DumpError("truncated dump")
        chunk = self.data[self.pos:self.pos + size]
        self.pos += size
        return chunk

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def string(self) -> bytes:
        return self.take(self.u32())


def decode(data: bytes) -> tuple[str, dict, dict[str, np.ndarray]]:
    r = _Reader(data)
    if r.take(len(MAGIC)) != MAGIC:
        raise DumpError("not a structure dump (bad magic)")
    version = r.u32()
    if version != VERSION:
        raise DumpError(f"unsupported dump version {version}")
    try:
        kind = r.string().decode("ascii")
        params = json.loads(r.string().decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DumpError(f"malformed dump header: {exc}") from None
    arrays: dict[str, np.ndarray] = {}
    for _ in range(r.u32()):
        name = r.string().decode("utf-8")
        ndim = r.u32()
        shape = struct.unpack(f"<{ndim}Q", r.take(8 * ndim))
        count = int(np.prod(shape)) if ndim else 1
        arrays[name] = np.frombuffer(r.take(8 * count), dtype="<i8").reshape(shape).astype(np.int64)
    if r.pos != len(data):
        raise DumpError("trailing bytes after the last array")
    return kind, params, arrays


def load_text(spec: str) -> Text:
    """A text from ``file:PATH`` or a generator string."""
    if spec.startswith("file:"):
        path = spec[len("file:"):]
        return Text(Path(path).read_bytes(), spec)
    return parse_generator(spec)


def write_dump(built: Built, path: str | Path) -> dict:
    """Write the dump and its ``.json`` sidecar; returns the sidecar content."""
    path = Path(path)
    arrays = built.to_arrays()
    data = encode(built.kind, built.params, arrays)
    path.write_bytes(data)
    meta = {
        "kind": built.kind,
        "params": built.params,
        "words": built.words,
        "samples": built.samples,
        "arrays": {k: list(v.shape) for k, v in sorted(arrays.items())},
        "sha256": hashlib.sha256(data).hexdigest(),
        "version": VERSION,
    }
    if built.report is not None:
        meta["verification"] = built.report.to_dict()
    Path(str(path) + ".json").write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")
    return meta


def read_dump(path: str | Path, text: Text | None = None) -> Built:
    """Load a dump; the text is regenerated from the recorded spec unless given."""
    kind, params, arrays = decode(Path(path).read_bytes())
    if text is None:
        spec = params.get("text")
        if not spec:
            raise DumpError("dump does not record how to obtain its text")
        text = load_text(spec)
    try:
        return restore_structure(kind, text, params, arrays)
    except KeyError as exc:
        raise DumpError(f"dump is missing field {exc}") from None
