"""Canonical Huffman coding of nonnegative-integer streams.

Codes are canonical (assigned lexicographically by code length, then
symbol), so a table is fully described by its code lengths and the encoder
is deterministic: the same stream always yields the same bits.  Tables are
serialised as the run-length-encoded length array up to the largest symbol.
Bits are packed most-significant-first.
"""

from __future__ import annotations

import heapq
import struct
from collections import Counter
from dataclasses import dataclass

from .errors import CorruptStreamError

__all__ = ["HuffmanTable", "huffman_encode", "huffman_decode", "pack_bits", "unpack_bits"]


@dataclass(frozen=True)
class HuffmanTable:
    """Code lengths as (symbol, length) pairs sorted by symbol.

    Stored sparsely: symbols can be arbitrarily large integers (coefficient
    magnitudes occasionally are), so a dense array indexed by symbol is not
    an option.
    """

    pairs: tuple[tuple[int, int], ...]

    @property
    def max_symbol(self) -> int:
        return self.pairs[-1][0] if self.pairs else -1

    def codes(self) -> dict[int, tuple[int, int]]:
        """Symbol -> (code value, length), canonical order."""
        coded = sorted((l, s) for s, l in self.pairs)
        out = {}
        code = 0
        prev_len = coded[0][0] if coded else 0
        for l, s in coded:
            code <<= l - prev_len
            out[s] = (code, l)
            code += 1
            prev_len = l
        return out


def _code_lengths(freq: Counter) -> HuffmanTable:
    symbols = sorted(freq)
    if len(symbols) == 1:
        return HuffmanTable(((symbols[0], 1),))  # degenerate alphabet: one 1-bit code
    # heap items carry an insertion counter so tie-breaking is deterministic
    heap = [(freq[s], i, (s,)) for i, s in enumerate(symbols)]
    heapq.heapify(heap)
    counter = len(heap)
    depth = {s: 0 for s in symbols}
    while len(heap) > 1:
        fa, _, ga = heapq.heappop(heap)
        fb, _, gb = heapq.heappop(heap)
        for s in ga + gb:
            depth[s] += 1
        heapq.heappush(heap, (fa + fb, counter, ga + gb))
        counter += 1
    return HuffmanTable(tuple(sorted(depth.items())))


class BitWriter:
    def __init__(self):
        self.buf = bytearray()
        self.acc = 0
        self.nbits = 0

    def write(self, value: int, length: int) -> None:
        self.acc = (self.acc << length) | value
        self.nbits += length
        while self.nbits >= 8:
            self.nbits -= 8
            self.buf.append((self.acc >> self.nbits) & 0xFF)
        self.acc &= (1 << self.nbits) - 1

    def getvalue(self) -> bytes:
        if self.nbits:
            return bytes(self.buf) + bytes([(self.acc << (8 - self.nbits)) & 0xFF])
        return bytes(self.buf)


class BitReader:
    def __init__(self, data: bytes, nbits: int):
        if len(data) * 8 < nbits:
            raise CorruptStreamError(f"payload holds {len(data) * 8} bits, {nbits} declared")
        self.data = data
        self.nbits = nbits
        self.pos = 0

    def read_bit(self) -> int:
        if self.pos >= self.nbits:
            raise CorruptStreamError("bit stream exhausted mid-symbol")
        byte = self.data[self.pos >> 3]
        bit = (byte >> (7 - (self.pos & 7))) & 1
        self.pos += 1
        return bit


def huffman_encode(stream) -> tuple[bytes, int, HuffmanTable]:
    """Encode a nonempty sequence of nonnegative ints.

    Returns ``(payload bytes, payload bit count, table)``.
    """
    stream = list(stream)
    if not stream:
        raise ValueError("cannot Huffman-code an empty stream")
    table = _code_lengths(Counter(stream))
    codes = table.codes()
    w = BitWriter()
    nbits = 0
    for s in stream:
        code, l = codes[s]
        w.write(code, l)
        nbits += l
    return w.getvalue(), nbits, table


def huffman_decode(payload: bytes, nbits: int, table: HuffmanTable) -> list[int]:
    """Exact inverse of :func:`huffman_encode` for the given table."""
    by_code = {cl: s for s, cl in table.codes().items()}
    if not by_code and nbits > 0:
        raise CorruptStreamError("nonempty payload with empty table")
    max_len = max((l for _, l in by_code), default=0)
    r = BitReader(payload, nbits)
    out = []
    while r.pos < nbits:
        code = 0
        length = 0
        while True:
            code = (code << 1) | r.read_bit()
            length += 1
            sym = by_code.get((code, length))
            if sym is not None:
                out.append(sym)
                break
            if length > max_len:
                raise CorruptStreamError(
                    f"invalid prefix at bit {r.pos}: no code of length <= {max_len} matches"
                )
    return out


# ---------------------------------------------------------------------------
# Serialisation: max symbol count, then the length array run-length encoded
# ---------------------------------------------------------------------------

def serialize_table(table: HuffmanTable) -> bytes:
    """RLE of the dense length array over symbols 0..max_symbol (0 = no
    code); gaps between coded symbols become zero runs."""
    n = table.max_symbol + 1
    out = bytearray(struct.pack("<I", n))
    pos = 0
    i = 0
    pairs = table.pairs
    while pos < n:
        if i < len(pairs) and pairs[i][0] == pos:
            l = pairs[i][1]
            j = i
            while j < len(pairs) and pairs[j][0] == pairs[i][0] + (j - i) and pairs[j][1] == l:
                j += 1
            run = j - i
            i = j
        else:
            l = 0
            nxt = pairs[i][0] if i < len(pairs) else n
            run = nxt - pos
        out += struct.pack("<IB", run, l)
        pos += run
    return bytes(out)


def deserialize_table(data: bytes, offset: int = 0) -> tuple[HuffmanTable, int]:
    """Returns the table and the offset just past it."""
    try:
        (n,) = struct.unpack_from("<I", data, offset)
        if n == 0xFFFFFFFF:
            raise CorruptStreamError("reserved table-size sentinel")
        offset += 4
        pairs: list[tuple[int, int]] = []
        pos = 0
        while pos < n:
            run, l = struct.unpack_from("<IB", data, offset)
            offset += 5
            if run == 0 or pos + run > n:
                raise CorruptStreamError("bad run length in Huffman table")
            if l > 0:
                pairs.extend((pos + k, l) for k in range(run))
            pos += run
    except struct.error:
        raise CorruptStreamError("truncated Huffman table") from None
    return HuffmanTable(tuple(pairs)), offset


# ---------------------------------------------------------------------------
# Plain bit packing (used for the sign stream)
# ---------------------------------------------------------------------------

def pack_bits(bits) -> bytes:
    w = BitWriter()
    for b in bits:
        w.write(int(b) & 1, 1)
    return w.getvalue()


def unpack_bits(data: bytes, count: int) -> list[int]:
    if len(data) < (count + 7) // 8:
        raise CorruptStreamError(f"bit payload too short for {count} bits")
    r = BitReader(data, count)
    return [r.read_bit() for _ in range(count)]
