"""Multiplication, division with remainder, and square root with remainder.

Two independent multiplication routes: ``mul_fenwick`` stays entirely in
Fibonacci base, accumulating partial products that follow the Fibonacci
recurrence (so an n-digit multiplier costs O(n) Fibonacci-base additions);
``mul_binary`` converts both operands to binary, multiplies by quadratic
shift-and-add, and converts back.  Division and square root also go
through binary, using the restoring bit-serial algorithms.
"""

import numpy as np

from . import adder, convert, core
from .core import ContractError

__all__ = ["mul_fenwick", "mul_binary", "divrem", "sqrt_rem"]


def _checked(z, what: str) -> np.ndarray:
    d = core.as_digits(z)
    if not core.is_canonical(d):
        raise ContractError(f"{what} requires canonical input")
    return core.strip_leading_zeros(d)


def mul_fenwick(a, b, *, stats: dict | None = None) -> np.ndarray:
    """Product of two canonical sequences without leaving Fibonacci base.

    Walks the multiplier's digits while growing partial products
    P(k) = a * F(k) by P(k) = P(k-1) + P(k-2), adding P(k) into the
    accumulator wherever digit k of ``b`` is set.
    """
    a = _checked(a, "mul_fenwick")
    b = _checked(b, "mul_fenwick")
    if a.size == 0 or b.size == 0:
        _count(stats, 0)
        return a[:0]
    n = b.size
    adds = 0
    acc = a[:0]
    prev = None
    cur = a  # P(2) = a * F(2)
    av = core.value(a) if __debug__ else 0
    for k in range(2, n + 2):
        if k == 3:
            cur, prev = adder.add(a, a), cur
            adds += 1
        elif k > 3:
            cur, prev = adder.add(cur, prev), cur
            adds += 1
        if __debug__:
            assert core.value(cur) == av * core.fib(k)
        if b[n - 1 - (k - 2)] == 1:
            acc = adder.add(acc, cur)
            adds += 1
    _count(stats, adds)
    return acc


def mul_binary(a, b) -> np.ndarray:
    """Product via binary: convert, shift-and-add multiply, convert back."""
    a = _checked(a, "mul_binary")
    b = _checked(b, "mul_binary")
    x = convert.bits_to_int(convert.zeck_to_binary(a))
    yb = convert.zeck_to_binary(b)
    prod = 0
    shift = 0
    for bit in yb.tolist()[::-1]:
        if bit:
            prod += x << shift
        shift += 1
    return convert.binary_to_zeck(convert.int_to_bits(prod))


def divrem(x, d) -> tuple[np.ndarray, np.ndarray]:
    """Quotient and remainder with 0 <= r < d, computed via binary.

    Restoring long division over the dividend's bit sequence.
    """
    x = _checked(x, "divrem")
    d = _checked(d, "divrem")
    if d.size == 0:
        raise ZeroDivisionError("division by zero")
    xb = convert.zeck_to_binary(x)
    dv = convert.bits_to_int(convert.zeck_to_binary(d))
    rem = 0
    qbits = []
    for bit in xb.tolist():
        rem = (rem << 1) | bit
        if rem >= dv:
            rem -= dv
            qbits.append(1)
        else:
            qbits.append(0)
    q = convert.binary_to_zeck(core.strip_leading_zeros(
        np.asarray(qbits, dtype=core.DIGIT_DTYPE)))
    r = convert.binary_to_zeck(convert.int_to_bits(rem))
    return q, r


def sqrt_rem(x) -> tuple[np.ndarray, np.ndarray]:
    """Floor square root and remainder r = x - s*s, computed via binary.

    Restoring digit-by-digit method over bit pairs.
    """
    x = _checked(x, "sqrt_rem")
    n = convert.bits_to_int(convert.zeck_to_binary(x))
    width = n.bit_length()
    if width % 2:
        width += 1
    rem = 0
    root = 0
    for shift in range(width - 2, -1, -2):
        rem = (rem << 2) | ((n >> shift) & 3)
        cand = (root << 2) | 1
        root <<= 1
        if rem >= cand:
            rem -= cand
            root |= 1
    s = convert.binary_to_zeck(convert.int_to_bits(root))
    r = convert.binary_to_zeck(convert.int_to_bits(rem))
    return s, r


def _count(stats: dict | None, adds: int) -> None:
    if stats is not None:
        stats["adds"] = adds
