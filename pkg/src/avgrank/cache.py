"""Binary a_p cache.

Layout (all integers little-endian int64):

    bytes 0..7    magic b"APCACHE1"
    bytes 8..15   format version (currently 1)
    bytes 16..23  record count n
    then n records of 4 int64 each: (r, s, p, a_p)

Records are sorted lexicographically by (r, s, p) with no duplicates, and
every a_p must satisfy the Hasse bound; loading validates all of this and
raises CorruptCacheError with a specific message otherwise.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .arith import PrimeTable, sieve_primes
from .curves import ap
from .families import enumerate_C
from .weights import h_X

__all__ = [
    "MAGIC",
    "VERSION",
    "CorruptCacheError",
    "ApCache",
    "cache_build",
    "cache_save",
    "cache_load",
    "u1_sweep",
]

MAGIC = b"APCACHE1"
VERSION = 1
_HEADER = struct.Struct("<8sqq")


class CorruptCacheError(RuntimeError):
    """The cache file failed a structural or arithmetic validity check."""


@dataclass(frozen=True)
class ApCache:
    """In-memory view of a cache: a sorted (n, 4) int64 array of (r, s, p, a_p)."""

    records: np.ndarray

    def __post_init__(self):
        if self.records.ndim != 2 or self.records.shape[1] != 4:
            raise ValueError("records must be an (n, 4) array")

    def __len__(self) -> int:
        return len(self.records)

    def lookup(self, r: int, s: int, p: int) -> int | None:
        """a_p for the given key, or None when absent (binary search)."""
        key = np.array([r, s, p], dtype=np.int64)
        lo, hi = 0, len(self.records)
        while lo < hi:
            mid = (lo + hi) // 2
            row = self.records[mid, :3]
            if tuple(row) < tuple(key):
                lo = mid + 1
            else:
                hi = mid
        if lo < len(self.records) and (self.records[lo, :3] == key).all():
            return int(self.records[lo, 3])
        return None


def cache_build(T: float, X: float, primes: PrimeTable | None = None) -> ApCache:
    """Traces of every minimal curve in the box for all 5 <= p <= X."""
    if primes is None:
        primes = sieve_primes(int(X))
    ps = [p for p in primes.in_range(5, X)]
    rows = []
    for cur in enumerate_C(T):
        for p in ps:
            rows.append((cur.r, cur.s, p, ap(cur, p).ap))
    rows.sort()
    arr = np.asarray(rows, dtype=np.int64).reshape(len(rows), 4)
    return ApCache(records=arr)


def cache_save(cache: ApCache, path: str | Path) -> None:
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, len(cache)))
        fh.write(np.ascontiguousarray(cache.records, dtype="<i8").tobytes())


def cache_load(path: str | Path) -> ApCache:
    """Read and fully validate a cache file."""
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < _HEADER.size:
        raise CorruptCacheError(f"corrupt cache {path}: truncated header")
    magic, version, count = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CorruptCacheError(f"corrupt cache {path}: bad magic {magic!r}")
    if version != VERSION:
        raise CorruptCacheError(f"corrupt cache {path}: unsupported version {version}")
    if count < 0:
        raise CorruptCacheError(f"corrupt cache {path}: negative record count")
    body = raw[_HEADER.size :]
    if len(body) != count * 32:
        raise CorruptCacheError(
            f"corrupt cache {path}: expected {count * 32} record bytes, found {len(body)}"
        )
    rec = np.frombuffer(body, dtype="<i8").astype(np.int64).reshape(count, 4)
    if count > 1:
        keys = rec[:, :3]
        prev, curr = keys[:-1], keys[1:]
        le = (
            (prev[:, 0] < curr[:, 0])
            | ((prev[:, 0] == curr[:, 0]) & (prev[:, 1] < curr[:, 1]))
            | ((prev[:, 0] == curr[:, 0]) & (prev[:, 1] == curr[:, 1]) & (prev[:, 2] < curr[:, 2]))
        )
        if not le.all():
            i = int(np.argmin(le))
            raise CorruptCacheError(
                f"corrupt cache {path}: records not strictly sorted at index {i + 1}"
            )
    bad = rec[:, 3] * rec[:, 3] > 4 * rec[:, 2]
    if bad.any():
        i = int(np.argmax(bad))
        raise CorruptCacheError(
            f"corrupt cache {path}: Hasse bound violated at index {i}: "
            f"(r={rec[i, 0]}, s={rec[i, 1]}, p={rec[i, 2]}, ap={rec[i, 3]})"
        )
    return ApCache(records=rec)


def u1_sweep(T: float, X: float, cache: ApCache | None = None) -> list[float]:
    """U1 for every curve of C(T), optionally served from a cache.

    With a cache covering the box, the per-curve trace computations are
    replaced by binary-search lookups; any missing key falls back to
    direct evaluation.
    """
    primes = sieve_primes(int(X))
    ps = list(primes.in_range(5, X))
    out = []
    for cur in enumerate_C(T):
        terms = []
        for p in ps:
            a = cache.lookup(cur.r, cur.s, p) if cache is not None else None
            if a is None:
                a = ap(cur, p).ap
            terms.append(-(math.log(p) / p) * h_X(math.log(p), X) * a)
        out.append(math.fsum(terms))
    return out
