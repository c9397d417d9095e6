"""
Integer mixing used for predictor table indexing.

All functions are numba-compiled and operate on int64 values; 64-bit inputs
are handled as their two's-complement int64 bit pattern and 32-bit results
are always in ``[0, 2**32)``. The plain-Python wrappers at the bottom accept
any non-negative 64-bit integer.
"""
from __future__ import annotations

import numpy as np
from numba import njit

M32 = 0xFFFFFFFF
FOLD_WIDTHS = (8, 16, 32)


@njit(cache=True, inline="always")
def rotl64(x, r):
    r = r & 63
    if r == 0:
        return x
    return (x << r) | ((x >> (64 - r)) & ((1 << r) - 1))


@njit(cache=True, inline="always")
def fold_xor(x, width):
    mask = (1 << width) - 1
    acc = 0
    for k in range(64 // width):
        acc ^= (x >> (k * width)) & mask
    return acc


@njit(cache=True, inline="always")
def wang4shift32(x):
    x = ((~x) + (x << 15)) & M32
    x ^= x >> 12
    x = (x + (x << 2)) & M32
    x ^= x >> 4
    x = (x * 2057) & M32
    x ^= x >> 16
    return x


@njit(cache=True, inline="always")
def wang3shift32(x):
    x = (x ^ 61) ^ (x >> 16)
    x = (x + (x << 3)) & M32
    x ^= x >> 4
    x = (x * 0x27D4EB2D) & M32
    x ^= x >> 15
    return x


@njit(cache=True, inline="always")
def jenkins32_(x):
    x = (x + 0x7ED55D16 + (x << 12)) & M32
    x = (x ^ 0xC761C23C) ^ (x >> 19)
    x = (x + 0x165667B1 + (x << 5)) & M32
    x = ((x + 0xD3A2646C) ^ (x << 9)) & M32
    x = (x + 0xFD7046C5 + (x << 3)) & M32
    x = (x ^ 0xB55A4F09) ^ (x >> 16)
    return x


@njit(cache=True, inline="always")
def hash7shift32(x):
    x = (x - (x << 6)) & M32
    x ^= x >> 17
    x = (x - (x << 9)) & M32
    x ^= (x << 4) & M32
    x = (x - (x << 3)) & M32
    x ^= (x << 10) & M32
    x ^= x >> 15
    return x


@njit(cache=True, inline="always")
def hybrid32(x):
    return jenkins32_(wang4shift32(x)) ^ hash7shift32(wang3shift32(x))


@njit(cache=True)
def _map_hash(fn_id, xs, out):
    for i in range(xs.shape[0]):
        x = xs[i] & M32
        if fn_id == 0:
            out[i] = wang4shift32(x)
        elif fn_id == 1:
            out[i] = wang3shift32(x)
        elif fn_id == 2:
            out[i] = jenkins32_(x)
        elif fn_id == 3:
            out[i] = hash7shift32(x)
        else:
            out[i] = hybrid32(x)
    return out


@njit(cache=True)
def _map_fold(xs, width, out):
    for i in range(xs.shape[0]):
        out[i] = fold_xor(xs[i], width)
    return out


# ---------------------------------------------------------------------------
# Python-facing API
# ---------------------------------------------------------------------------

def as_i64(x: int) -> int:
    """Reinterpret an unsigned 64-bit value as int64."""
    x = int(x) & 0xFFFFFFFFFFFFFFFF
    return x - (1 << 64) if x >> 63 else x


def folded_xor(x: int, width: int) -> int:
    """XOR of the ``64 // width`` consecutive ``width``-bit segments of ``x``."""
    if width not in FOLD_WIDTHS:
        raise ValueError(f"fold width must be one of {FOLD_WIDTHS}, got {width}")
    return int(fold_xor(as_i64(x), width))


def wang4shift(x: int) -> int:
    return int(wang4shift32(int(x) & M32))


def wang3shift(x: int) -> int:
    return int(wang3shift32(int(x) & M32))


def jenkins32(x: int) -> int:
    return int(jenkins32_(int(x) & M32))


def hash7shift(x: int) -> int:
    return int(hash7shift32(int(x) & M32))


def four_hybrid12(x: int, table_size: int) -> int:
    """Index in ``[0, table_size)`` from the four-function hash cascade."""
    _check_pow2(table_size)
    return int(hybrid32(int(x) & M32)) & (table_size - 1)


HASH_IDS = {"wang4shift": 0, "wang3shift": 1, "jenkins32": 2, "hash7shift": 3, "hybrid": 4}


def hash_array(name: str, xs: np.ndarray) -> np.ndarray:
    """Vectorized form of one of the 32-bit hashes (``hybrid`` = unreduced cascade)."""
    xs = np.ascontiguousarray(xs, dtype=np.int64)
    return _map_hash(HASH_IDS[name], xs, np.empty_like(xs))


def four_hybrid12_array(xs: np.ndarray, table_size: int) -> np.ndarray:
    _check_pow2(table_size)
    return hash_array("hybrid", xs) & (table_size - 1)


def folded_xor_array(xs: np.ndarray, width: int) -> np.ndarray:
    if width not in FOLD_WIDTHS:
        raise ValueError(f"fold width must be one of {FOLD_WIDTHS}, got {width}")
    xs = np.ascontiguousarray(xs).view(np.int64) if np.asarray(xs).dtype == np.uint64 \
        else np.ascontiguousarray(xs, dtype=np.int64)
    return _map_fold(xs, width, np.empty_like(xs))


def _check_pow2(n: int) -> None:
    if n < 1 or n & (n - 1):
        raise ValueError(f"table size must be a power of two, got {n}")
