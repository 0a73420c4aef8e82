"""Self-delimiting Fibonacci-code stream codec.

Codeword for an integer v >= 1: its Fibonacci-base digits emitted
least-significant-first, followed by one extra 1.  Because canonical
digits never contain "11", the appended 1 meets the expansion's leading
1 (now last) to form the codeword's only "11", which therefore marks the
end of every codeword.  Encoding converts each value from binary with the
package's adder-tree conversion; decoding rebuilds the value from the
digit weights.

Stream layout (byte-exact, for cross-implementation compatibility):

    bytes 0..3   magic  b"ZKCS"
    byte  4      format version, currently 1
    bytes 5..12  number of encoded integers, big-endian
    bytes 13..   codeword bits packed MSB-first within each byte,
                 zero-padded to a byte boundary

Zero cannot be encoded (no codeword ends a "11" for it); callers that
need it should shift their domain by one.
"""

import struct
from dataclasses import dataclass

import numpy as np

from . import convert, core
from .core import DIGIT_DTYPE

__all__ = ["CodeStream", "CorruptStreamError", "encode_stream", "decode_stream",
           "codeword_bits", "encode_payload_bits"]

MAGIC = b"ZKCS"
VERSION = 1
_HEADER = struct.Struct(">4sBQ")


class CorruptStreamError(ValueError):
    """The byte stream is not a well-formed code stream."""


@dataclass(frozen=True)
class CodeStream:
    """Header fields plus the packed codeword payload."""

    count: int
    payload: bytes

    def to_bytes(self) -> bytes:
        return _HEADER.pack(MAGIC, VERSION, self.count) + self.payload

    @staticmethod
    def from_bytes(raw: bytes) -> "CodeStream":
        if len(raw) < _HEADER.size:
            raise CorruptStreamError("truncated header")
        magic, version, count = _HEADER.unpack_from(raw)
        if magic != MAGIC:
            raise CorruptStreamError("bad magic")
        if version != VERSION:
            raise CorruptStreamError(f"unsupported version {version}")
        return CodeStream(count, raw[_HEADER.size:])


def codeword_bits(v: int) -> np.ndarray:
    """Bits of one codeword: reversed digit expansion plus the closing 1."""
    if v < 1:
        raise ValueError(f"Fibonacci code is defined for integers >= 1, got {v}")
    digits = convert.binary_to_zeck(convert.int_to_bits(v))
    return np.concatenate([digits[::-1], np.ones(1, dtype=DIGIT_DTYPE)])


def encode_payload_bits(values) -> np.ndarray:
    """Concatenated codeword bits, before byte packing."""
    words = [codeword_bits(int(v)) for v in values]
    if not words:
        return np.zeros(0, dtype=DIGIT_DTYPE)
    return np.concatenate(words)


def encode_stream(values) -> CodeStream:
    values = list(values)
    bits = encode_payload_bits(values)
    payload = np.packbits(bits.astype(np.uint8), bitorder="big").tobytes()
    return CodeStream(len(values), payload)


def decode_stream(stream: CodeStream) -> list[int]:
    """Exact inverse of :func:`encode_stream`.

    Raises ``CorruptStreamError`` when a codeword is truncated or when
    bits remain beyond the declared count (other than zero padding within
    the final byte).
    """
    bits = np.unpackbits(np.frombuffer(stream.payload, dtype=np.uint8),
                         bitorder="big")
    out: list[int] = []
    pos = 0
    n = bits.size
    for _ in range(stream.count):
        v = 0
        idx = 0
        prev = 0
        while True:
            if pos >= n:
                raise CorruptStreamError("truncated codeword")
            bit = int(bits[pos])
            pos += 1
            if bit == 1 and prev == 1:
                break
            if bit == 1:
                v += core.fib(2 + idx)
            prev = bit
            idx += 1
        out.append(v)
    leftover = bits[pos:]
    if leftover.size >= 8 or np.any(leftover):
        raise CorruptStreamError("count does not match payload")
    return out
