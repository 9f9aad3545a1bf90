"""Binary cache for :class:`~repzeta.groups.ConjugacyData`.

Layout (little endian)::

    magic "RZCD" | format u32 | key (64 bytes, ascii, zero padded)
    descriptor length u32 | group descriptor JSON (scheme, n, ring)
    order u64 | classes u64 | exponent u64
    class table: classes x (representative, size, inverse class, element order) as u64
    element -> class array: order x i32, in enumeration order
    sha256 of everything above (32 bytes)

The key combines the group spec digest with the package version, so a new
version never reads an old file.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import struct
from pathlib import Path

import numpy as np

from . import __version__ as VERSION
from .groups import ConjugacyData, conjugacy_classes

log = logging.getLogger(__name__)

MAGIC = b"RZCD"
FORMAT = 1
ENV_VAR = "REPZETA_CACHE_DIR"


class CacheCorruption(IOError):
    pass


def cache_key(spec, version=None):
    return f"{spec.digest()}-v{version or VERSION}-f{FORMAT}"


def encode(data, key):
    r = data.num_classes
    desc = json.dumps(data.group.spec.to_json(), sort_keys=True).encode()
    head = MAGIC + struct.pack("<I", FORMAT) + key.encode().ljust(64, b"\0")
    head += struct.pack("<I", len(desc)) + desc
    head += struct.pack("<QQQ", data.order, r, data.exponent)
    table = np.stack([data.representatives, data.sizes, data.inverse_class, data.class_orders],
                     axis=1).astype("<u8")
    body = head + table.tobytes() + data.class_of_element.astype("<i4").tobytes()
    return body + hashlib.sha256(body).digest()


def decode(blob, group, key):
    if len(blob) < 100 or blob[:4] != MAGIC:
        raise CacheCorruption("bad magic or truncated header")
    body, digest = blob[:-32], blob[-32:]
    if hashlib.sha256(body).digest() != digest:
        raise CacheCorruption("checksum mismatch")
    (fmt,) = struct.unpack_from("<I", body, 4)
    stored_key = body[8:72].rstrip(b"\0").decode()
    if fmt != FORMAT or stored_key != key:
        return None
    (dlen,) = struct.unpack_from("<I", body, 72)
    off = 76 + dlen
    if json.loads(body[76:off]) != group.spec.to_json():
        return None
    order, r, exponent = struct.unpack_from("<QQQ", body, off)
    if order != group.order:
        raise CacheCorruption("group order does not match enumeration")
    off += 24
    table = np.frombuffer(body, dtype="<u8", count=4 * r, offset=off).reshape(r, 4).astype(np.int64)
    off += 32 * r
    cls = np.frombuffer(body, dtype="<i4", count=order, offset=off).astype(np.int32)
    if off + 4 * order != len(body):
        raise CacheCorruption("unexpected payload length")
    ident = int(group.index_of(group.identity()))
    return ConjugacyData(group, cls, table[:, 0].copy(), table[:, 1].copy(), table[:, 2].copy(),
                         table[:, 3].copy(), ident, int(exponent))


class ConjugacyCache:
    def __init__(self, directory=None):
        directory = directory or os.environ.get(ENV_VAR)
        self.directory = Path(directory) if directory else None
        self.hits = 0
        self.misses = 0

    @property
    def enabled(self):
        return self.directory is not None

    def path_for(self, spec):
        return self.directory / f"{cache_key(spec)}.rzc"

    def load(self, group):
        if not self.enabled:
            return None
        path = self.path_for(group.spec)
        if not path.exists():
            self.misses += 1
            return None
        try:
            data = decode(path.read_bytes(), group, cache_key(group.spec))
        except CacheCorruption as exc:
            log.warning("discarding corrupt cache file %s: %s", path, exc)
            self.misses += 1
            return None
        if data is None:
            self.misses += 1
            return None
        self.hits += 1
        return data

    def store(self, data):
        if not self.enabled:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path_for(data.group.spec)
        tmp = path.with_suffix(".tmp")
        tmp.write_bytes(encode(data, cache_key(data.group.spec)))
        tmp.replace(path)

    def conjugacy(self, group, budget):
        data = self.load(group)
        if data is None:
            data = conjugacy_classes(group, budget)
            self.store(data)
        return data


def cache_roundtrip(data, directory):
    """Write ``data`` to ``directory`` and read it back."""
    cache = ConjugacyCache(directory)
    cache.store(data)
    out = cache.load(data.group)
    if out is None:
        raise CacheCorruption("freshly written cache entry could not be read")
    return out
