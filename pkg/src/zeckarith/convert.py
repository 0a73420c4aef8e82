"""Conversion between binary and Fibonacci-base representation.

Binary to Fibonacci base works like hardware would: one operand per input
bit (the Fibonacci-base form of the matching power of two for a set bit,
zero for a clear bit), reduced by a balanced binary tree of Fibonacci-base
adders.  Zero operands are fed into the tree rather than filtered, so the
tree shape depends only on the input width; with ``n`` leaves the
reduction depth is exactly ``ceil(log2 n)``.

The opposite direction sums the binary forms of the selected Fibonacci
numbers through the same balanced tree shape, using exact integers.

Bit sequences are int8 arrays over {0,1}, most-significant-first, with the
same zero convention as digit sequences (empty internally, "0" as text).
"""

import threading

import numpy as np

from . import adder, core
from .core import ContractError, InvariantError, DIGIT_DTYPE

__all__ = [
    "pow2_zeck",
    "binary_to_zeck",
    "zeck_to_binary",
    "parse_bits",
    "bits_to_string",
    "bits_to_int",
    "int_to_bits",
]

_POW2: list[np.ndarray] = []
_POW2_LOCK = threading.Lock()


def parse_bits(s: str) -> np.ndarray:
    if not s or any(ch not in "01" for ch in s):
        raise ValueError(f"malformed binary string {s!r}")
    return core.strip_leading_zeros(core.parse_digits(s))


def bits_to_string(bits) -> str:
    return core.zeck_to_string(bits)  # same zero convention, digits 0/1


def bits_to_int(bits) -> int:
    b = core.as_digits(bits)
    n = 0
    for c in b.tolist():
        n = (n << 1) | c
    return n


def int_to_bits(n: int) -> np.ndarray:
    if n < 0:
        raise ValueError("int_to_bits requires n >= 0")
    if n == 0:
        return np.zeros(0, dtype=DIGIT_DTYPE)
    return np.asarray([int(ch) for ch in bin(n)[2:]], dtype=DIGIT_DTYPE)


def pow2_zeck(i: int) -> np.ndarray:
    """Fibonacci-base form of 2**i, built by the doubling chain.

    Each new entry is computed with the package's own adder
    (``add(Z(2^(i-1)), Z(2^(i-1)))``) and cross-checked against the greedy
    oracle at construction time; a mismatch is an invariant failure.
    """
    if i < 0:
        raise ValueError("pow2_zeck requires i >= 0")
    _ensure_pow2(i)
    return _POW2[i].copy()


def _ensure_pow2(i: int) -> None:
    if i < len(_POW2):
        return
    with _POW2_LOCK:
        if not _POW2:
            _POW2.append(np.asarray([1], dtype=DIGIT_DTYPE))
        while len(_POW2) <= i:
            nxt = adder.add(_POW2[-1], _POW2[-1])
            expect = core.greedy_zeckendorf(1 << len(_POW2))
            if not np.array_equal(nxt, expect):
                raise InvariantError(
                    f"doubling chain disagrees with the greedy oracle at 2^{len(_POW2)}"
                )
            _POW2.append(nxt)


def binary_to_zeck(bits, *, stats: dict | None = None) -> np.ndarray:
    """Convert a binary sequence by a balanced tree of Fibonacci-base adders.

    With ``stats`` given, fills in ``leaves``, ``depth`` and ``adds`` so the
    tree shape can be asserted (depth == ceil(log2 leaves)).
    """
    b = core.as_digits(bits)
    if b.size and (b.min() < 0 or b.max() > 1):
        raise ValueError("binary_to_zeck requires bits in {0,1}")
    n = b.size
    if n == 0:
        _fill(stats, 0, 0, 0)
        return b[:0]
    _ensure_pow2(n - 1)
    zero = np.zeros(0, dtype=DIGIT_DTYPE)
    operands = [
        _POW2[n - 1 - j] if b[j] else zero
        for j in range(n)
    ]
    out, depth, adds = _tree_reduce(operands, adder.add)
    _fill(stats, n, depth, adds)
    return out


def zeck_to_binary(z, *, stats: dict | None = None) -> np.ndarray:
    """Exact binary form of a canonical sequence via balanced-tree summation."""
    d = core.as_digits(z)
    if not core.is_canonical(d):
        raise ContractError("zeck_to_binary requires canonical input")
    d = core.strip_leading_zeros(d)
    n = d.size
    if n == 0:
        _fill(stats, 0, 0, 0)
        return d[:0]
    operands = [
        core.fib(2 + n - 1 - j) if d[j] else 0
        for j in range(n)
    ]
    total, depth, adds = _tree_reduce(operands, lambda a, b: a + b)
    _fill(stats, n, depth, adds)
    return int_to_bits(total)


def _tree_reduce(level: list, combine) -> tuple[object, int, int]:
    # Pairwise rounds; an odd element is carried through without an add, so
    # depth stays ceil(log2 n) for n leaves.
    depth = 0
    adds = 0
    while len(level) > 1:
        nxt = []
        for i in range(0, len(level) - 1, 2):
            nxt.append(combine(level[i], level[i + 1]))
            adds += 1
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
        depth += 1
    return level[0], depth, adds


def _fill(stats: dict | None, leaves: int, depth: int, adds: int) -> None:
    if stats is not None:
        stats["leaves"] = leaves
        stats["depth"] = depth
        stats["adds"] = adds
