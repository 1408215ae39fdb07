"""Quantisation of segment models and the bit-exact container format.

Coefficient magnitudes are quantised to ``floor(|c| / delta + 1/2)`` and
terms that quantise to zero are dropped; within each segment the surviving
(index, magnitude, sign) triples are sorted by ascending atom index.  Three
streams serialise the model: ``st_ind`` holds each segment's first sorted
index followed by successive index differences, with segments separated by
the symbol 0 (indices are 1-based so 0 never occurs inside a segment);
``st_cf`` concatenates the magnitudes; ``st_sg`` the sign bits (0 positive,
1 negative).

The on-disk container (extension ``.secg``) is documented byte-by-byte in
docs/formats.md.  Decoding is the exact inverse of encoding; containers are
deterministic functions of the model.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .dictionary import Dictionary
from .entropy import (
    deserialize_table,
    huffman_decode,
    huffman_encode,
    pack_bits,
    serialize_table,
    unpack_bits,
)
from .errors import CorruptContainerError, CorruptModelError

__all__ = [
    "QuantizedSegment",
    "QuantizedModel",
    "quantize",
    "dequantize_reconstruct",
    "build_streams",
    "parse_streams",
    "encode",
    "decode",
    "write_container",
    "read_container",
]


@dataclass(frozen=True)
class QuantizedSegment:
    """Per-segment triples, sorted by strictly increasing atom index; no
    stored magnitude is zero."""

    indices: tuple[int, ...]
    magnitudes: tuple[int, ...]
    signs: tuple[int, ...]


@dataclass
class QuantizedModel:
    delta: float
    n_b: int
    n_total: int               # original sample count (Q*n_b minus padding)
    dictionary_id: str
    segments: list[QuantizedSegment]

    @property
    def q(self) -> int:
        return len(self.segments)

    @property
    def term_count(self) -> int:
        return sum(len(s.indices) for s in self.segments)


def quantize(approxs, delta: float, n_b: int, n_total: int, dictionary_id: str) -> QuantizedModel:
    """Quantise per-segment approximations into a :class:`QuantizedModel`."""
    if delta <= 0:
        raise ValueError("quantisation step delta must be positive")
    segments = []
    for a in approxs:
        c = np.asarray(a.coefficients, dtype=float)
        mags = np.floor(np.abs(c) / delta + 0.5).astype(np.int64)
        signs = (c < 0).astype(np.int64)
        idx = np.asarray(a.indices, dtype=np.int64)
        keep = mags > 0
        idx, mags, signs = idx[keep], mags[keep], signs[keep]
        order = np.argsort(idx, kind="stable")
        segments.append(
            QuantizedSegment(
                tuple(int(i) for i in idx[order]),
                tuple(int(m) for m in mags[order]),
                tuple(int(s) for s in signs[order]),
            )
        )
    return QuantizedModel(float(delta), n_b, n_total, dictionary_id, segments)


def dequantize_reconstruct(model: QuantizedModel, dictionary: Dictionary) -> np.ndarray:
    """Rebuild the signal: per segment ``sum_i sign * magnitude * delta * atom``.

    Returns the uncropped ``n_b * Q`` vector; callers trim to
    ``model.n_total``.  Magnitudes times ``delta`` are midpoint estimates of
    the coefficient moduli.
    """
    if model.dictionary_id != dictionary.id:
        raise CorruptModelError(
            f"model was built for dictionary {model.dictionary_id!r}, "
            f"got {dictionary.id!r}"
        )
    out = np.zeros(model.n_b * model.q)
    for qi, seg in enumerate(model.segments):
        if not seg.indices:
            continue
        idx = np.asarray(seg.indices, dtype=int)
        if idx.min() < 1 or idx.max() > dictionary.size:
            raise CorruptModelError(
                f"segment {qi}: atom index outside 1..{dictionary.size}"
            )
        coeff = (
            np.asarray(seg.magnitudes, dtype=float)
            * np.where(np.asarray(seg.signs) == 0, 1.0, -1.0)
            * model.delta
        )
        out[qi * model.n_b : (qi + 1) * model.n_b] = coeff @ dictionary.matrix[idx - 1]
    return out


# ---------------------------------------------------------------------------
# Stream construction
# ---------------------------------------------------------------------------

def build_streams(model: QuantizedModel) -> tuple[list[int], list[int], list[int]]:
    """Return (st_ind, st_cf, st_sg) as integer lists."""
    st_ind: list[int] = []
    st_cf: list[int] = []
    st_sg: list[int] = []
    for qi, seg in enumerate(model.segments):
        if qi:
            st_ind.append(0)
        prev = 0
        for i, idx in enumerate(seg.indices):
            st_ind.append(idx if i == 0 else idx - prev)
            prev = idx
        st_cf.extend(seg.magnitudes)
        st_sg.extend(seg.signs)
    return st_ind, st_cf, st_sg


def parse_streams(st_ind, st_cf, st_sg, q: int) -> list[QuantizedSegment]:
    """Inverse of :func:`build_streams`; validates structure."""
    runs: list[list[int]] = [[]]
    for v in st_ind:
        if v == 0:
            runs.append([])
        elif v < 0:
            raise CorruptContainerError(f"negative value {v} in index stream")
        else:
            runs[-1].append(v)
    if len(runs) != q:
        raise CorruptContainerError(
            f"index stream holds {len(runs)} segments, header says {q}"
        )
    total = sum(len(r) for r in runs)
    if len(st_cf) != total or len(st_sg) != total:
        raise CorruptContainerError(
            f"stream lengths disagree: {total} indices, {len(st_cf)} magnitudes, "
            f"{len(st_sg)} signs"
        )
    segments = []
    pos = 0
    for run in runs:
        indices = []
        acc = 0
        for i, v in enumerate(run):
            acc = v if i == 0 else acc + v
            indices.append(acc)
        mags = st_cf[pos : pos + len(run)]
        signs = st_sg[pos : pos + len(run)]
        pos += len(run)
        if any(m <= 0 for m in mags):
            raise CorruptContainerError("zero or negative stored magnitude")
        segments.append(QuantizedSegment(tuple(indices), tuple(mags), tuple(signs)))
    return segments


# ---------------------------------------------------------------------------
# Container format (.secg) -- see docs/formats.md
# ---------------------------------------------------------------------------

_MAGIC = b"SECG"
_VERSION = 1
_FLAG_HUFFMAN = 0x01
_U64_MAX = 0xFFFFFFFFFFFFFFFF


def _stream_width(values) -> int:
    top = max(values, default=0)
    return 1 if top < 0x100 else 2 if top < 0x10000 else 4 if top < 0x100000000 else 8


def _write_raw_stream(out: bytearray, values) -> None:
    width = _stream_width(values)
    out += struct.pack("<IB", len(values), width)
    out += np.asarray(values, dtype=f"<u{width}").tobytes()


_RAW_SENTINEL = 0xFFFFFFFF


def _write_huffman_stream(out: bytearray, values) -> None:
    if not values:
        out += struct.pack("<I", 0)  # empty table sentinel: zero symbols
        out += struct.pack("<I", 0)
        return
    if max(values) >= _RAW_SENTINEL:
        # symbol too large for the u32 table header (degenerate duals can
        # produce astronomically quantised magnitudes); store raw instead
        out += struct.pack("<I", _RAW_SENTINEL)
        _write_raw_stream(out, values)
        return
    payload, nbits, table = huffman_encode(values)
    out += serialize_table(table)
    out += struct.pack("<I", nbits)
    out += payload


def encode(model: QuantizedModel, use_huffman: bool) -> bytes:
    """Serialise a model to container bytes."""
    for seg in model.segments:
        if any(v > _U64_MAX for v in seg.indices) or any(v > _U64_MAX for v in seg.magnitudes):
            raise CorruptModelError("stream value exceeds 64-bit range")
    st_ind, st_cf, st_sg = build_streams(model)
    ident = model.dictionary_id.encode()
    out = bytearray()
    out += _MAGIC
    out += struct.pack("<BB", _VERSION, _FLAG_HUFFMAN if use_huffman else 0)
    out += struct.pack("<II", model.n_b, model.q)
    out += struct.pack("<Q", model.n_total)
    out += struct.pack("<d", model.delta)
    out += struct.pack("<H", len(ident)) + ident
    if use_huffman:
        _write_huffman_stream(out, st_ind)
        _write_huffman_stream(out, st_cf)
    else:
        _write_raw_stream(out, st_ind)
        _write_raw_stream(out, st_cf)
    out += struct.pack("<I", len(st_sg))
    out += pack_bits(st_sg)
    return bytes(out)


class _Cursor:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, fmt: str):
        try:
            vals = struct.unpack_from(fmt, self.data, self.pos)
        except struct.error:
            raise CorruptContainerError(
                "container truncated", position=self.pos
            ) from None
        self.pos += struct.calcsize(fmt)
        return vals

    def take_bytes(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CorruptContainerError("container truncated", position=self.pos)
        b = self.data[self.pos : self.pos + n]
        self.pos += n
        return b


def _read_raw_stream(cur: _Cursor) -> list[int]:
    count, width = cur.take("<IB")
    if width not in (1, 2, 4, 8):
        raise CorruptContainerError(f"bad stream value width {width}", position=cur.pos - 1)
    raw = cur.take_bytes(width * count)
    return np.frombuffer(raw, dtype=f"<u{width}").astype(int).tolist()


def _read_huffman_stream(cur: _Cursor) -> list[int]:
    try:
        (n,) = struct.unpack_from("<I", cur.data, cur.pos)
    except struct.error:
        raise CorruptContainerError("container truncated", position=cur.pos) from None
    if n == _RAW_SENTINEL:
        cur.pos += 4
        return _read_raw_stream(cur)
    table, cur.pos = deserialize_table(cur.data, cur.pos)
    (nbits,) = cur.take("<I")
    payload = cur.take_bytes((nbits + 7) // 8)
    if not table.pairs:
        if nbits:
            raise CorruptContainerError("payload bits with empty table", position=cur.pos)
        return []
    return huffman_decode(payload, nbits, table)


def decode(container: bytes) -> QuantizedModel:
    """Exact inverse of :func:`encode`; fails fast on malformed input."""
    cur = _Cursor(container)
    if cur.take_bytes(4) != _MAGIC:
        raise CorruptContainerError("bad magic; not a .secg container", position=0)
    version, flags = cur.take("<BB")
    if version != _VERSION:
        raise CorruptContainerError(f"unsupported container version {version}", position=4)
    n_b, q = cur.take("<II")
    (n_total,) = cur.take("<Q")
    (delta,) = cur.take("<d")
    (id_len,) = cur.take("<H")
    try:
        ident = cur.take_bytes(id_len).decode()
    except UnicodeDecodeError:
        raise CorruptContainerError("dictionary id is not valid UTF-8", position=cur.pos) from None
    if n_b < 1 or q < 1 or not delta > 0:
        raise CorruptContainerError(
            f"implausible header: n_b={n_b} Q={q} delta={delta}", position=6
        )
    if flags & _FLAG_HUFFMAN:
        st_ind = _read_huffman_stream(cur)
        st_cf = _read_huffman_stream(cur)
    else:
        st_ind = _read_raw_stream(cur)
        st_cf = _read_raw_stream(cur)
    (nsigns,) = cur.take("<I")
    st_sg = unpack_bits(cur.take_bytes((nsigns + 7) // 8), nsigns)
    if cur.pos != len(container):
        raise CorruptContainerError(
            f"{len(container) - cur.pos} trailing bytes after payload", position=cur.pos
        )
    try:
        segments = parse_streams(st_ind, st_cf, st_sg, q)
    except CorruptContainerError:
        raise
    model = QuantizedModel(delta, n_b, n_total, ident, segments)
    for qi, seg in enumerate(model.segments):
        if any(b <= a for a, b in zip(seg.indices, seg.indices[1:])):
            raise CorruptContainerError(f"segment {qi}: indices not strictly increasing")
    return model


def write_container(path, model: QuantizedModel, use_huffman: bool = True) -> int:
    """Encode to a file; returns the byte size written."""
    data = encode(model, use_huffman)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)


def read_container(path) -> QuantizedModel:
    with open(path, "rb") as fh:
        return decode(fh.read())
