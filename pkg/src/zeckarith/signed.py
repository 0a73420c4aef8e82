"""Sign-magnitude numbers and subtraction via a preliminary cancel pass.

Opposite-sign addition works on the position-wise difference of the two
magnitudes, a sequence over {-1, 0, +1}.  A linear scan finds the first
nonzero digit: its sign is the sign of the result, and if it is negative
the whole sequence is flipped so the leading nonzero is +1
(``detect_and_orient``).  The oriented sequence then goes through
``preliminary_pass``, a left-to-right width-3 sweep that carries positive
weight rightward and cancels every negative digit, emitting a {0,1,2}
sequence (twos flanked by zeros) that the unsigned adder pipeline accepts
from its elimination stage onward.

The eight sweep rules cannot act on a negative digit in the very last
position once its positive partner is adjacent, because the window can no
longer be placed with the partner at its head.  Two value-preserving
right-edge rewrites close that gap during finalization:
``(1,-1) -> (0,1)`` (F(3) - F(2) = F(2)) and ``(2,-1) -> (1,1)``
(2*F(3) - F(2) = F(3) + F(2)).  Any other leftover negative digit is an
invariant failure, flagged rather than patched.
"""

from dataclasses import dataclass

import numpy as np

from . import adder, core
from .accel import jit_kernel
from .core import ContractError, InvariantError, DIGIT_DTYPE

__all__ = [
    "SignedZeck",
    "digitwise_diff",
    "detect_and_orient",
    "preliminary_pass",
    "add_signed",
    "subtract",
    "parse_signed",
]

# Width-3 rules keyed on the full window; -1 prints as 'N' in rule names.
PRELIM_RULES: dict[tuple[int, int, int], tuple[str, tuple[int, int, int]]] = {
    (1, 0, 0): ("100", (0, 1, 1)),
    (1, -1, 0): ("1N0", (0, 0, 1)),
    (1, -1, 1): ("1N1", (0, 0, 2)),
    (1, 0, -1): ("10N", (0, 1, 0)),
    (2, 0, 0): ("200", (1, 1, 1)),
    (2, -1, 0): ("2N0", (1, 0, 1)),
    (2, -1, 1): ("2N1", (1, 0, 2)),
    (2, 0, -1): ("20N", (1, 1, 0)),
}

# Right-edge cancellations applied after the sweep (see module docstring).
PRELIM_EDGE_RULES: dict[tuple[int, int], tuple[str, tuple[int, int]]] = {
    (1, -1): ("1Nend", (0, 1)),
    (2, -1): ("2Nend", (1, 1)),
}


@dataclass(frozen=True, eq=False)
class SignedZeck:
    """A sign flag plus a canonical magnitude; zero is always non-negative."""

    negative: bool
    magnitude: np.ndarray

    @staticmethod
    def make(negative: bool, magnitude) -> "SignedZeck":
        mag = core.strip_leading_zeros(core.as_digits(magnitude))
        if not core.is_canonical(mag):
            raise ContractError("SignedZeck magnitude must be canonical")
        if mag.size == 0:
            negative = False
        return SignedZeck(bool(negative), mag)

    @staticmethod
    def from_int(n: int) -> "SignedZeck":
        return SignedZeck.make(n < 0, core.greedy_zeckendorf(abs(n)))

    def to_int(self) -> int:
        v = core.value(self.magnitude)
        return -v if self.negative else v

    def __str__(self) -> str:
        return ("-" if self.negative else "") + core.zeck_to_string(self.magnitude)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignedZeck):
            return NotImplemented
        return self.negative == other.negative and np.array_equal(
            self.magnitude, other.magnitude
        )


def parse_signed(s: str) -> SignedZeck:
    """Parse an optionally sign-prefixed canonical digit string."""
    neg = False
    body = s
    if s[:1] in ("+", "-"):
        neg = s[0] == "-"
        body = s[1:]
    return SignedZeck.make(neg, core.parse_zeck(body))


# ---------------------------------------------------------------------------
# Kernels

@jit_kernel
def _ddiff_kernel(a, b):
    """Position-wise a - b over {-1,0,+1}, left-padded with three zeros.

    Returns (out, err); err 1/2 flag non-canonical a/b.
    """
    la = a.shape[0]
    lb = b.shape[0]
    n = la if la > lb else lb
    if n == 0:
        n = 1
    n += 3
    out = np.zeros(n, dtype=np.int8)
    prev = 0
    for i in range(la):
        c = a[i]
        if c < 0 or c > 1 or (c == 1 and prev == 1) or (i == 0 and c == 0 and la > 1):
            return out, 1
        prev = c
        out[n - la + i] += c
    prev = 0
    for i in range(lb):
        c = b[i]
        if c < 0 or c > 1 or (c == 1 and prev == 1) or (i == 0 and c == 0 and lb > 1):
            return out, 2
        prev = c
        out[n - lb + i] -= c
    return out, 0


@jit_kernel
def _prelim_kernel(s):
    """Left-to-right cancel sweep plus right-edge finalization, in place.

    Returns (firings, edge_firings, err); err 3 = precondition violation,
    1 = uncovered configuration or invalid output digit.
    """
    n = s.shape[0]
    if n < 3 or s[0] != 0 or s[1] != 0 or s[2] != 0:
        return 0, 0, 3
    for i in range(n):
        c = s[i]
        if c < -1 or c > 1:
            return 0, 0, 3
        if c != 0:
            if c == -1:
                return 0, 0, 3  # first nonzero must be +1 (orient first)
            break
    fir = 0
    for i in range(n - 2):
        a = s[i]
        if a == 1:
            b = s[i + 1]
            c = s[i + 2]
            if b == 0:
                if c == 0:  # 100 -> 011
                    s[i] = 0
                    s[i + 1] = 1
                    s[i + 2] = 1
                    fir += 1
                elif c == -1:  # 10N -> 010
                    s[i] = 0
                    s[i + 1] = 1
                    s[i + 2] = 0
                    fir += 1
            elif b == -1:
                if c == 0:  # 1N0 -> 001
                    s[i] = 0
                    s[i + 1] = 0
                    s[i + 2] = 1
                    fir += 1
                elif c == 1:  # 1N1 -> 002
                    s[i] = 0
                    s[i + 1] = 0
                    s[i + 2] = 2
                    fir += 1
        elif a == 2:
            b = s[i + 1]
            c = s[i + 2]
            if b == 0:
                if c == 0:  # 200 -> 111
                    s[i] = 1
                    s[i + 1] = 1
                    s[i + 2] = 1
                    fir += 1
                elif c == -1:  # 20N -> 110
                    s[i] = 1
                    s[i + 1] = 1
                    s[i + 2] = 0
                    fir += 1
            elif b == -1:
                if c == 0:  # 2N0 -> 101
                    s[i] = 1
                    s[i + 1] = 0
                    s[i + 2] = 1
                    fir += 1
                elif c == 1:  # 2N1 -> 102
                    s[i] = 1
                    s[i + 1] = 0
                    s[i + 2] = 2
                    fir += 1
    efir = 0
    if s[n - 1] == -1:
        if s[n - 2] == 1:  # F(3) - F(2) = F(2)
            s[n - 2] = 0
            s[n - 1] = 1
            efir += 1
        elif s[n - 2] == 2:  # 2F(3) - F(2) = F(3) + F(2)
            s[n - 2] = 1
            s[n - 1] = 1
            efir += 1
        else:
            return fir, efir, 1  # negative digit with no positive partner
    for i in range(n):
        c = s[i]
        if c < 0 or c > 2:
            return fir, efir, 1
        if c == 2:
            if i == 0 or s[i - 1] != 0:
                return fir, efir, 1
            if i + 1 < n and s[i + 1] != 0:
                return fir, efir, 1
    return fir, efir, 0


# ---------------------------------------------------------------------------
# Public operations

def digitwise_diff(a, b) -> np.ndarray:
    """Position-wise difference of two canonical sequences, right-aligned.

    Same three-zero left padding as :func:`zeckarith.adder.digitwise_sum`.
    """
    out, err = _ddiff_kernel(core.as_digits(a), core.as_digits(b))
    if err:
        raise ContractError("digitwise_diff requires canonical inputs")
    return out


def detect_and_orient(t) -> tuple[bool, np.ndarray]:
    """Sign of the first nonzero digit, flipping the sequence if negative.

    Returns ``(negative, oriented)`` where ``oriented`` has a +1 as its
    first nonzero digit and ``value(oriented) == -value(t)`` whenever a
    flip happened.  An all-zero sequence is non-negative and unchanged.
    """
    t = core.as_digits(t)
    if t.size and (t.min() < -1 or t.max() > 1):
        raise ContractError("detect_and_orient requires digits in {-1,0,+1}")
    nz = np.flatnonzero(t)
    if nz.size == 0 or t[nz[0]] == 1:
        return False, t.copy()
    return True, (-t).astype(DIGIT_DTYPE)


def preliminary_pass(t) -> np.ndarray:
    """Eliminate negative digits from an oriented difference sequence.

    Precondition: three leading zeros and a non-negative leading nonzero
    digit (apply :func:`detect_and_orient` first).  The output is a valid
    input for ``stage1_eliminate``: digits in {0,1,2}, twos flanked by
    zeros, value unchanged.
    """
    buf = core.as_digits(t).copy()
    fir, efir, err = _prelim_kernel(buf)
    _raise_prelim(err)
    return buf


def add_signed(x: SignedZeck, y: SignedZeck) -> SignedZeck:
    """Signed addition: same signs add magnitudes, opposite signs cancel."""
    if x.negative == y.negative:
        return SignedZeck.make(x.negative, adder.add(x.magnitude, y.magnitude))
    pos, neg = (x, y) if not x.negative else (y, x)
    t = digitwise_diff(pos.magnitude, neg.magnitude)
    flipped, t = detect_and_orient(t)
    work = preliminary_pass(t)
    # The sweep preserves the zero padding, but the elimination stage's
    # leading-zero precondition is re-checked and restored explicitly.
    if work.size < 4 or work[0] != 0:
        work = np.concatenate(
            [np.zeros(max(1, 4 - work.size), dtype=DIGIT_DTYPE), work]
        )
    work = adder.stage1_eliminate(work)
    work = adder.stage2_right_to_left(work)
    mag = adder.stage2_left_to_right(work)
    return SignedZeck.make(flipped, mag)


def subtract(x: SignedZeck, y: SignedZeck) -> SignedZeck:
    """x - y, by flipping the sign of y and adding."""
    return add_signed(x, SignedZeck.make(not y.negative, y.magnitude))


def _raise_prelim(err: int) -> None:
    if err == 3:
        raise ContractError(
            "preliminary_pass requires an oriented {-1,0,+1} sequence "
            "with three leading zeros"
        )
    if err:
        raise InvariantError("uncovered preliminary-pass configuration")


# ---------------------------------------------------------------------------
# Traced variant (shared rule table)

def preliminary_pass_traced(t) -> tuple[np.ndarray, adder.PassTrace]:
    buf = core.as_digits(t).tolist()
    n = len(buf)
    if n < 3 or buf[0] or buf[1] or buf[2]:
        raise ContractError("preliminary_pass requires three leading zeros")
    snaps: list[tuple[int, str, str, str]] = []
    fir = 0
    for i in range(n - 2):
        key = (buf[i], buf[i + 1], buf[i + 2])
        rule = PRELIM_RULES.get(key)
        if rule is None:
            continue
        name, repl = rule
        before = core.digits_to_string(buf[i:i + 3])
        buf[i], buf[i + 1], buf[i + 2] = repl
        snaps.append((i, name, before, core.digits_to_string(buf[i:i + 3])))
        fir += 1
    efir = 0
    if buf[n - 1] == -1:
        rule = PRELIM_EDGE_RULES.get((buf[n - 2], buf[n - 1]))
        if rule is None:
            raise InvariantError("uncovered preliminary-pass configuration")
        name, repl = rule
        before = core.digits_to_string(buf[n - 2:])
        buf[n - 2], buf[n - 1] = repl
        snaps.append((n - 2, name, before, core.digits_to_string(buf[n - 2:])))
        efir += 1
    trace = adder.PassTrace("signed_prelim", n - 2, fir, efir, snaps)
    return np.asarray(buf, dtype=DIGIT_DTYPE), trace


def add_signed_traced(
    x: SignedZeck, y: SignedZeck
) -> tuple[SignedZeck, list[adder.PassTrace]]:
    """Signed addition returning the per-pass traces of the pipeline."""
    if x.negative == y.negative:
        mag, traces = adder.add_traced(x.magnitude, y.magnitude)
        return SignedZeck.make(x.negative, mag), traces
    pos, neg = (x, y) if not x.negative else (y, x)
    t = digitwise_diff(pos.magnitude, neg.magnitude)
    flipped, t = detect_and_orient(t)
    work, prelim_trace = preliminary_pass_traced(t)
    work, t1 = adder._stage1_traced(work)
    work, t2 = adder._stage2_traced(work, "stage2_rl")
    work, t3 = adder._stage2_traced(work, "stage2_lr")
    mag = core.strip_leading_zeros(work)
    return SignedZeck.make(flipped, mag), [prelim_trace, t1, t2, t3]
