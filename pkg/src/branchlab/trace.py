"""
Branch traces and the ``.gbpt`` binary format.

Layout (all integers little-endian)::

    header   magic "GBPT" | version u16 = 1 | site_count u16 | event_count u64
    site     site_id u16 | kernel_ordinal u8 | line_tag u16 | synthetic_pc u64
             | name_len u8 | name bytes (ASCII)
    event    site_id u16 | outcome u8 (0 = not taken, 1 = taken)
"""
from __future__ import annotations

import struct
from array import array
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, Sequence

import numpy as np

from .sites import KERNEL_OF_ORDINAL, BranchSite

MAGIC = b"GBPT"
VERSION = 1

_HEADER = struct.Struct("<4sHHQ")
_SITE = struct.Struct("<HBHQB")
EVENT_DTYPE = np.dtype([("site", "<u2"), ("outcome", "u1")])

HEADER_SIZE = _HEADER.size
SITE_FIXED_SIZE = _SITE.size
EVENT_SIZE = EVENT_DTYPE.itemsize


class TraceError(ValueError):
    """Base class for malformed trace data."""


class BadMagicError(TraceError):
    pass


class UnsupportedVersionError(TraceError):
    pass


class TruncatedTraceError(TraceError):
    pass


class UnknownSiteError(TraceError):
    pass


class TraceFormatError(TraceError):
    """Structurally invalid content (bad outcome byte, trailing data, ...)."""


@dataclass(eq=False)
class Trace:
    """Ordered branch events plus the table of sites they refer to."""

    sites: list[BranchSite]
    site_ids: np.ndarray = field(default_factory=lambda: np.zeros(0, np.uint16))
    outcomes: np.ndarray = field(default_factory=lambda: np.zeros(0, np.uint8))

    def __post_init__(self):
        self.site_ids = np.ascontiguousarray(self.site_ids, dtype=np.uint16)
        self.outcomes = np.ascontiguousarray(self.outcomes, dtype=np.uint8)
        if self.site_ids.shape != self.outcomes.shape or self.site_ids.ndim != 1:
            raise ValueError("site_ids and outcomes must be 1-d and equally long")
        ids = [s.site_id for s in self.sites]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate site_id in site table")
        if len(self.outcomes) and self.outcomes.max() > 1:
            raise ValueError("outcomes must be 0 or 1")
        if len(self.site_ids):
            unknown = np.setdiff1d(np.unique(self.site_ids), ids)
            if len(unknown):
                raise UnknownSiteError(f"events reference unknown site ids {unknown.tolist()}")

    def __len__(self) -> int:
        return len(self.site_ids)

    def __eq__(self, other):
        if not isinstance(other, Trace):
            return NotImplemented
        return (
            self.sites == other.sites
            and np.array_equal(self.site_ids, other.site_ids)
            and np.array_equal(self.outcomes, other.outcomes)
        )

    def site_table(self) -> dict[int, BranchSite]:
        return {s.site_id: s for s in self.sites}

    def pcs(self) -> np.ndarray:
        """Synthetic PC of every event, as uint64."""
        if not self.sites:
            return np.zeros(len(self), dtype=np.uint64)
        lut = np.zeros(max(s.site_id for s in self.sites) + 1, dtype=np.uint64)
        for s in self.sites:
            lut[s.site_id] = s.synthetic_pc
        return lut[self.site_ids]

    def head(self, k: int) -> "Trace":
        return Trace(self.sites, self.site_ids[:k], self.outcomes[:k])


class TraceSink:
    """Append-only event receiver used by the kernels.

    Events are stored as one 16-bit code ``site_id << 1 | outcome`` so the hot
    path is a single ``array.append``. Kernels may grab :attr:`put` and
    precomputed codes from :meth:`code`.
    """

    def __init__(self, sites: Sequence[BranchSite]):
        self.sites = list(sites)
        self._codes = array("H")
        self.put = self._codes.append

    @staticmethod
    def code(site: BranchSite | int, taken: bool) -> int:
        sid = site.site_id if isinstance(site, BranchSite) else site
        return (sid << 1) | int(bool(taken))

    def emit(self, site: BranchSite | int, taken: bool) -> None:
        self.put(self.code(site, taken))

    def extend(self, codes: Iterable[int] | np.ndarray) -> None:
        if isinstance(codes, np.ndarray):
            self._codes.frombytes(codes.astype(np.uint16).tobytes())
        else:
            self._codes.extend(codes)

    def __len__(self) -> int:
        return len(self._codes)

    def to_trace(self) -> Trace:
        codes = np.frombuffer(self._codes, dtype=np.uint16).copy()
        return Trace(self.sites, codes >> 1, (codes & 1).astype(np.uint8))


# ---------------------------------------------------------------------------
# binary I/O
# ---------------------------------------------------------------------------

def encode_trace(t: Trace) -> bytes:
    parts = [_HEADER.pack(MAGIC, VERSION, len(t.sites), len(t))]
    for s in t.sites:
        name = s.name.encode("ascii")
        if len(name) > 255:
            raise ValueError(f"site name too long: {s.name!r}")
        parts.append(_SITE.pack(s.site_id, s.kernel_ordinal, s.line_tag,
                                s.synthetic_pc, len(name)))
        parts.append(name)
    events = np.empty(len(t), dtype=EVENT_DTYPE)
    events["site"] = t.site_ids
    events["outcome"] = t.outcomes
    parts.append(events.tobytes())
    return b"".join(parts)


def write_trace(t: Trace, out: BinaryIO | str) -> int:
    """Serialize ``t``; ``out`` is a binary stream or a path. Returns bytes written."""
    data = encode_trace(t)
    if isinstance(out, (str, bytes)) or hasattr(out, "__fspath__"):
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        out.write(data)
    return len(data)


def decode_trace(data: bytes) -> Trace:
    if len(data) < HEADER_SIZE:
        if data[:len(MAGIC)] != MAGIC[:len(data)]:
            raise BadMagicError("not a GBPT trace")
        raise TruncatedTraceError(f"header needs {HEADER_SIZE} bytes, got {len(data)}")
    magic, version, n_sites, n_events = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise BadMagicError(f"bad magic {magic!r}")
    if version != VERSION:
        raise UnsupportedVersionError(f"unsupported trace version {version}")

    pos = HEADER_SIZE
    sites = []
    for _ in range(n_sites):
        if pos + SITE_FIXED_SIZE > len(data):
            raise TruncatedTraceError("truncated inside site table")
        sid, ordinal, line, pc, name_len = _SITE.unpack_from(data, pos)
        pos += SITE_FIXED_SIZE
        if pos + name_len > len(data):
            raise TruncatedTraceError("truncated inside site name")
        try:
            name = data[pos:pos + name_len].decode("ascii")
        except UnicodeDecodeError:
            raise TraceFormatError("site name is not ASCII") from None
        pos += name_len
        kernel = KERNEL_OF_ORDINAL.get(ordinal, f"k{ordinal}")
        sites.append(BranchSite(sid, kernel, line, pc, name))

    need = n_events * EVENT_SIZE
    have = len(data) - pos
    if have < need:
        raise TruncatedTraceError(f"expected {n_events} events, stream ends after "
                                  f"{have // EVENT_SIZE}")
    if have > need:
        raise TraceFormatError(f"{have - need} trailing bytes after {n_events} events")
    events = np.frombuffer(data, dtype=EVENT_DTYPE, count=n_events, offset=pos)
    if n_events and events["outcome"].max() > 1:
        raise TraceFormatError("outcome byte must be 0 or 1")
    return Trace(sites, events["site"].copy(), events["outcome"].copy())


def read_trace(src: BinaryIO | str) -> Trace:
    """Parse a ``.gbpt`` stream or path; raises a :class:`TraceError` subclass."""
    if isinstance(src, (str, bytes)) or hasattr(src, "__fspath__"):
        with open(src, "rb") as fh:
            data = fh.read()
    else:
        data = src.read()
    return decode_trace(data)
