"""Fibonacci numbers, digit-sequence primitives and the greedy oracle.

Every integer ``n >= 0`` has exactly one expansion ``n = sum(d_k * F(k))``
over the Fibonacci numbers ``F(2)=1, F(3)=2, F(4)=3, ...`` with digits
``d_k`` in {0, 1} and no two adjacent ones.  This module provides that
expansion (``greedy_zeckendorf``), its exact inverse (``value``) and the
shared digit-sequence plumbing used by every other module.

Digit sequences are numpy ``int8`` arrays stored most-significant-first:
the last element is the coefficient of F(2) = 1, the element before it of
F(3) = 2, and so on.  Alphabets by role:

* canonical sequences: {0, 1}, no two adjacent ones, no leading zero;
* working sequences (inside the adder passes): {0, 1, 2, 3};
* signed working sequences (inside subtraction): {-1, 0, +1}.

Zero is the empty array internally and the string ``"0"`` externally.
``value`` and ``greedy_zeckendorf`` are deliberately independent of the
window-rewrite machinery so they can act as the oracle for it.
"""

import threading
from bisect import bisect_right
from typing import Iterable, Sequence

import numpy as np

DIGIT_DTYPE = np.int8

__all__ = [
    "ContractError",
    "InvariantError",
    "fib",
    "value",
    "greedy_zeckendorf",
    "is_canonical",
    "parse_digits",
    "parse_zeck",
    "digits_to_string",
    "zeck_to_string",
    "strip_leading_zeros",
    "random_canonical",
    "as_digits",
]


class ContractError(ValueError):
    """An operation was called with input violating its stated precondition."""


class InvariantError(RuntimeError):
    """An internal postcondition failed; this always signals a bug."""


# ---------------------------------------------------------------------------
# Fibonacci numbers

# _FIB[k] == F(k) with F(0)=0, F(1)=1; indices below 2 are internal only.
_FIB: list[int] = [0, 1, 1, 2]
_FIB_LOCK = threading.Lock()


def _extend_fib_to(k: int) -> None:
    # Single-writer extension; list reads are safe concurrently under the GIL.
    with _FIB_LOCK:
        while len(_FIB) <= k:
            _FIB.append(_FIB[-1] + _FIB[-2])


def _extend_fib_past(n: int) -> None:
    with _FIB_LOCK:
        while _FIB[-1] <= n:
            _FIB.append(_FIB[-1] + _FIB[-2])


def fib(k: int) -> int:
    """Return F(k) for k >= 2, with F(2) = 1 and F(3) = 2.

    Values are memoized, so repeated calls cost amortized constant work
    per new index.  Indices below 2 are outside the numeral system and
    raise ``ValueError``.
    """
    if k < 2:
        raise ValueError(f"Fibonacci index must be >= 2, got {k}")
    if k >= len(_FIB):
        _extend_fib_to(k)
    return _FIB[k]


# ---------------------------------------------------------------------------
# Digit-sequence plumbing

def as_digits(seq) -> np.ndarray:
    """Coerce a string, list or array into an int8 digit array (no copy if possible)."""
    if isinstance(seq, np.ndarray):
        if seq.dtype == DIGIT_DTYPE:
            return seq
        return seq.astype(DIGIT_DTYPE)
    if isinstance(seq, str):
        return parse_digits(seq)
    return np.asarray(list(seq), dtype=DIGIT_DTYPE)


def parse_digits(s: str) -> np.ndarray:
    """Parse a working-digit string over '0'..'3', most-significant-first.

    Any other character (including signs and whitespace) is rejected.
    """
    if not s:
        raise ValueError("empty digit string")
    raw = np.frombuffer(s.encode("ascii", errors="replace"), dtype=np.uint8)
    d = raw.astype(np.int16) - ord("0")
    if d.min() < 0 or d.max() > 3:
        raise ValueError(f"malformed digit string {s!r}: only '0'..'3' allowed")
    return d.astype(DIGIT_DTYPE)


def parse_zeck(s: str) -> np.ndarray:
    """Parse a canonical digit string; returns the stripped internal form.

    ``"0"`` parses to the empty array.  Non-canonical strings (digits above
    1, adjacent ones, leading zeros) raise ``ContractError``.
    """
    d = parse_digits(s)
    if not is_canonical(d):
        raise ContractError(f"non-canonical digit string {s!r}")
    return strip_leading_zeros(d)


def digits_to_string(seq) -> str:
    """Format any digit sequence; -1 prints as 'N' (machine-readable traces)."""
    d = as_digits(seq)
    if d.size == 0:
        return "0"
    return "".join("N" if c == -1 else chr(ord("0") + c) for c in d.tolist())


def zeck_to_string(seq) -> str:
    """External string form of a canonical sequence; zero prints as "0"."""
    d = strip_leading_zeros(as_digits(seq))
    if d.size == 0:
        return "0"
    return "".join(chr(ord("0") + c) for c in d.tolist())


def strip_leading_zeros(seq) -> np.ndarray:
    d = as_digits(seq)
    nz = np.flatnonzero(d)
    if nz.size == 0:
        return d[:0]
    return d[nz[0]:]


def is_canonical(seq) -> bool:
    """True iff the sequence is a canonical expansion (or the canonical zero).

    Accepts any working sequence; digits outside {0, 1}, adjacent ones, or a
    superfluous leading zero all make it non-canonical.  The empty sequence
    and the single digit "0" are both the canonical zero.
    """
    d = as_digits(seq)
    if d.size == 0:
        return True
    if d.min() < 0 or d.max() > 1:
        return False
    if np.any((d[1:] == 1) & (d[:-1] == 1)):
        return False
    if d[0] == 0 and d.size > 1:
        return False
    return True


# ---------------------------------------------------------------------------
# Exact valuation (the oracle direction)

def value(seq) -> int:
    """Exact integer value sum(d_k * F(k)) of any digit sequence.

    Works for every alphabet used in the package, including signed digits,
    so each rewrite pass can be value-checked.  Uses a split recursion with
    the index-shift identity F(e+L) = F(L)*F(e+1) + F(L-1)*F(e), which keeps
    the oracle fast even on sequences with tens of thousands of digits.
    """
    d = as_digits(seq).tolist()
    n = len(d)
    if n == 0:
        return 0
    _extend_fib_to(n + 3)
    return _value_pair(d, 0, n)[0]


def _value_pair(d: list, lo: int, hi: int) -> tuple[int, int]:
    # Returns (sum d_i*F(e_i), sum d_i*F(e_i + 1)) treating the slice as a
    # standalone number whose last digit sits at F(2).
    n = hi - lo
    if n <= 48:
        a = 0
        ap = 0
        e = n + 1
        for i in range(lo, hi):
            c = d[i]
            if c:
                a += c * _FIB[e]
                ap += c * _FIB[e + 1]
            e -= 1
        return a, ap
    mid = lo + n // 2
    ah, ahp = _value_pair(d, lo, mid)
    al, alp = _value_pair(d, mid, hi)
    length_lo = hi - mid
    fl = _FIB[length_lo]
    fl1 = _FIB[length_lo - 1]
    return fl * ahp + fl1 * ah + al, fl * (ah + ahp) + fl1 * ahp + alp


# ---------------------------------------------------------------------------
# Greedy expansion (the oracle for everything else)

def greedy_zeckendorf(n: int) -> np.ndarray:
    """Canonical expansion of ``n >= 0`` by repeatedly taking the largest F(k).

    This is the independent reference construction: it never touches the
    window-rewrite adder, so the two can be checked against each other.
    """
    if n < 0:
        raise ValueError(f"greedy_zeckendorf requires n >= 0, got {n}")
    if n == 0:
        return np.zeros(0, dtype=DIGIT_DTYPE)
    _extend_fib_past(n)
    # bisect_right lands after the run of values <= n; F(1) == F(2) == 1 makes
    # the list non-decreasing, and preferring the later index keeps k >= 2.
    k = bisect_right(_FIB, n) - 1
    digits = np.zeros(k - 1, dtype=DIGIT_DTYPE)
    rem = n
    i = k
    while rem:
        if _FIB[i] <= rem:
            digits[k - i] = 1
            rem -= _FIB[i]
            i -= 2  # adjacent index can never fit: rem < F(i-1) after the take
        else:
            i -= 1
    return digits


def random_canonical(length: int, rng: np.random.Generator) -> np.ndarray:
    """Random canonical sequence of exactly ``length`` digits (MSB set).

    Ones are placed with gaps >= 2 drawn geometrically, which approximates
    the natural digit density of canonical expansions.  ``length == 0``
    returns the canonical zero.  Intended for tests and benchmarks.
    """
    if length == 0:
        return np.zeros(0, dtype=DIGIT_DTYPE)
    d = np.zeros(length, dtype=DIGIT_DTYPE)
    est = length // 2 + 2
    gaps = 1 + rng.geometric(0.55, size=est)  # each gap >= 2
    pos = np.concatenate(([0], np.cumsum(gaps)))
    pos = pos[pos < length]
    d[pos] = 1
    return d


def values_of(seqs: Iterable[Sequence[int]]) -> list[int]:
    """Convenience: exact values of several sequences."""
    return [value(s) for s in seqs]
