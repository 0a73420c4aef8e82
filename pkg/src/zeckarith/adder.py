"""Unsigned addition in three window passes over a working digit sequence.

The pipeline: ``digitwise_sum`` adds two canonical sequences position by
position (alphabet {0,1,2}, every 2 flanked by zeros, three zeros of left
padding), then

* ``stage1_eliminate``   - one left-to-right sweep of a width-4 window that
  removes all digits above 1, finishing with a fixed right-edge cleanup;
* ``stage2_right_to_left`` - a width-3 sweep applying 011 -> 100, after
  which the sequence provably contains no "1011" substring;
* ``stage2_left_to_right`` - the same rule swept the other way, which
  clears every remaining "11" without creating new ones.

Each rewrite replaces a window by an equal-valued window (by the Fibonacci
recurrence), so every pass conserves the represented value; the sweeps
place the window exactly ``n - w + 1`` times, making the whole addition
three linear passes.

Hot loops live in ``@jit_kernel`` functions (numba by default, plain
Python when disabled); the traced variants used by the CLI and golden
tests are separate pure-Python implementations driven by the same rule
table.
"""

from dataclasses import dataclass

import numpy as np

from . import core
from .accel import jit_kernel
from .core import ContractError, InvariantError, DIGIT_DTYPE

__all__ = [
    "PassTrace",
    "digitwise_sum",
    "stage1_eliminate",
    "stage2_right_to_left",
    "stage2_left_to_right",
    "add",
    "add_traced",
]

# Width-4 rules, keyed on the first three window symbols (mutually
# exclusive by construction).  Entry: (name, replacement of the first three
# symbols, whether the fourth symbol is incremented).  The increment only
# applies while the fourth symbol is at most 2.
STAGE1_RULES: dict[tuple[int, int, int], tuple[str, tuple[int, int, int], bool]] = {
    (0, 2, 0): ("020x", (1, 0, 0), True),
    (0, 3, 0): ("030x", (1, 1, 0), True),
    (0, 2, 1): ("021x", (1, 1, 0), False),
    (0, 1, 2): ("012x", (1, 0, 1), False),
}

# Width-3 rule shared by both stage-2 passes.
STAGE2_RULE: dict[tuple[int, int, int], tuple[str, tuple[int, int, int]]] = {
    (0, 1, 1): ("011", (1, 0, 0)),
}

PAD = 3  # leading zeros added by digitwise_sum / digitwise_diff


@dataclass
class PassTrace:
    """Exact per-pass accounting: window placements, firings, optional snapshots.

    ``steps`` is the number of window placements (``max(0, n - w + 1)``);
    ``firings`` counts sweep-rule applications and never exceeds ``steps``.
    Right-edge cleanup rewrites are tallied separately in
    ``cleanup_firings`` since they happen after the last placement.
    Snapshots are ``(offset, rule name, before, after)`` tuples covering the
    rewritten span.
    """

    pass_id: str
    steps: int
    firings: int
    cleanup_firings: int = 0
    snapshots: list[tuple[int, str, str, str]] | None = None

    def lines(self) -> list[str]:
        if not self.snapshots:
            return []
        return [
            f"{self.pass_id} offset={off} rule={name} {before} -> {after}"
            for off, name, before, after in self.snapshots
        ]


# ---------------------------------------------------------------------------
# Kernels

@jit_kernel
def _dsum_kernel(a, b):
    """Position-wise sum of two canonical sequences, left-padded with 3 zeros.

    Returns (out, err): err 1/2 flag non-canonical a/b, err 3 flags a
    flanking violation in the result (impossible from canonical inputs).
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
        out[n - lb + i] += c
    for i in range(n):
        if out[i] == 2:
            if out[i - 1] != 0:
                return out, 3
            if i + 1 < n and out[i + 1] != 0:
                return out, 3
    return out, 0


@jit_kernel
def _stage1_kernel(s):
    """Width-4 sweep plus right-edge cleanup, in place.

    Returns (firings, cleanup_firings, err); err codes:
    3 precondition violation, 1 uncovered cleanup configuration,
    2 digit above 1 left after cleanup.
    """
    n = s.shape[0]
    # Preconditions: alphabet {0,1,2}, leading zero, every 2 flanked by
    # zeros (right boundary counts as a zero).
    if s[0] != 0:
        return 0, 0, 3
    for i in range(n):
        c = s[i]
        if c < 0 or c > 2:
            return 0, 0, 3
        if c == 2:
            if i == 0 or s[i - 1] != 0:
                return 0, 0, 3
            if i + 1 < n and s[i + 1] != 0:
                return 0, 0, 3
    fir = 0
    for i in range(n - 3):
        if s[i] != 0:
            continue
        b = s[i + 1]
        c = s[i + 2]
        if b == 2:
            if c == 0:
                x = s[i + 3]
                if x <= 2:  # 020x -> 100x'
                    s[i] = 1
                    s[i + 1] = 0
                    s[i + 2] = 0
                    s[i + 3] = x + 1
                    fir += 1
            elif c == 1:  # 021x -> 110x
                s[i] = 1
                s[i + 1] = 1
                s[i + 2] = 0
                fir += 1
        elif b == 3:
            if c == 0:
                x = s[i + 3]
                if x <= 2:  # 030x -> 110x'
                    s[i] = 1
                    s[i + 1] = 1
                    s[i + 2] = 0
                    s[i + 3] = x + 1
                    fir += 1
        elif b == 1:
            if c == 2:  # 012x -> 101x
                s[i] = 1
                s[i + 1] = 0
                s[i + 2] = 1
                fir += 1
    # Right-edge cleanup: examine the third, then the fourth position of the
    # final window.  A 2 or 3 in the third position forces a 0 in the
    # fourth, so at most one rewrite from each group can apply.
    cfir = 0
    p = s[n - 3]
    q = s[n - 2]
    r = s[n - 1]
    if q == 3:
        if p != 0 or r != 0:
            return fir, cfir, 1
        s[n - 3] = 1
        s[n - 2] = 1
        s[n - 1] = 1
        cfir += 1
    elif q == 2:
        if p == 0:
            if r == 0:
                s[n - 3] = 1
                s[n - 2] = 0
                s[n - 1] = 1
                cfir += 1
            elif r == 1:
                # created 2 whose follower is a 1: the sweep rule 021 -> 110
                # applied at the edge (2F(e+1) + F(e) = F(e+2) + F(e+1))
                s[n - 3] = 1
                s[n - 2] = 1
                s[n - 1] = 0
                cfir += 1
            else:
                return fir, cfir, 1
        elif p == 1 and r == 0 and s[n - 4] == 0:
            s[n - 4] = 1
            s[n - 3] = 0
            s[n - 2] = 1
            s[n - 1] = 0
            cfir += 1
        else:
            return fir, cfir, 1
    elif r == 3:
        if q != 0:
            return fir, cfir, 1
        s[n - 2] = 1
        s[n - 1] = 1
        cfir += 1
    elif r == 2:
        if q == 0:
            s[n - 2] = 1
            s[n - 1] = 0
            cfir += 1
        elif q == 1 and s[n - 3] == 0:
            s[n - 3] = 1
            s[n - 2] = 0
            s[n - 1] = 1
            cfir += 1
        else:
            return fir, cfir, 1
    for i in range(n):
        if s[i] < 0 or s[i] > 1:
            return fir, cfir, 2
    return fir, cfir, 0


@jit_kernel
def _stage2_rl_kernel(s):
    """Right-to-left 011 -> 100 sweep, in place.

    Returns (firings, err); err 3 = non-binary input, 2 = "1011" survived
    (contradicts the no-1011 lemma, i.e. a bug).
    """
    n = s.shape[0]
    for i in range(n):
        if s[i] < 0 or s[i] > 1:
            return 0, 3
    fir = 0
    for i in range(n - 3, -1, -1):
        if s[i] == 0 and s[i + 1] == 1 and s[i + 2] == 1:
            s[i] = 1
            s[i + 1] = 0
            s[i + 2] = 0
            fir += 1
    for i in range(n - 3):
        if s[i] == 1 and s[i + 1] == 0 and s[i + 2] == 1 and s[i + 3] == 1:
            return fir, 2
    return fir, 0


@jit_kernel
def _stage2_lr_kernel(s):
    """Left-to-right 011 -> 100 sweep, in place.

    Returns (firings, first_nonzero, err); err 3 = precondition violation
    (non-binary digits or a "1011" substring), 2 = non-canonical output.
    """
    n = s.shape[0]
    for i in range(n):
        if s[i] < 0 or s[i] > 1:
            return 0, -1, 3
    for i in range(n - 3):
        if s[i] == 1 and s[i + 1] == 0 and s[i + 2] == 1 and s[i + 3] == 1:
            return 0, -1, 3
    fir = 0
    for i in range(n - 2):
        if s[i] == 0 and s[i + 1] == 1 and s[i + 2] == 1:
            s[i] = 1
            s[i + 1] = 0
            s[i + 2] = 0
            fir += 1
    first = -1
    prev = 0
    for i in range(n):
        c = s[i]
        if c == 1 and prev == 1:
            return fir, -1, 2
        if c == 1 and first < 0:
            first = i
        prev = c
    return fir, first, 0


# ---------------------------------------------------------------------------
# Public passes

def digitwise_sum(a, b) -> np.ndarray:
    """Position-wise sum of two canonical sequences, right-aligned.

    The result is left-padded with three zeros beyond the longer input so
    that every later pass (including the signed preliminary pass, which
    reuses this convention) finds the leading zero it requires.  Raises
    ``ContractError`` on non-canonical input.
    """
    a = core.as_digits(a)
    b = core.as_digits(b)
    out, err = _dsum_kernel(a, b)
    if err == 1 or err == 2:
        raise ContractError("digitwise_sum requires canonical inputs")
    if err == 3:
        raise InvariantError("digitwise_sum produced an unflanked 2")
    return out


def stage1_eliminate(s) -> np.ndarray:
    """Remove every digit above 1 in one left-to-right width-4 sweep.

    Precondition: alphabet {0,1,2}, leading digit 0, every 2 flanked by
    zeros (a trailing 2 counts as followed by zero), length >= 4.
    The output is over {0,1} and has the same value.
    """
    buf = _checked_copy(s, min_len=4, what="stage1_eliminate")
    fir, cfir, err = _stage1_kernel(buf)
    _raise_stage1(err)
    return buf


def stage2_right_to_left(s) -> np.ndarray:
    """Apply 011 -> 100 right to left; output contains no "1011"."""
    buf = _checked_copy(s, min_len=3, what="stage2_right_to_left")
    fir, err = _stage2_rl_kernel(buf)
    if err == 3:
        raise ContractError("stage2_right_to_left requires digits in {0,1}")
    if err == 2:
        raise InvariantError("'1011' present after the right-to-left pass")
    return buf


def stage2_left_to_right(s) -> np.ndarray:
    """Apply 011 -> 100 left to right and strip to canonical form.

    Precondition: digits in {0,1} and no "1011" substring (guaranteed by
    the right-to-left pass).
    """
    buf = _checked_copy(s, min_len=3, what="stage2_left_to_right")
    fir, first, err = _stage2_lr_kernel(buf)
    if err == 3:
        raise ContractError(
            "stage2_left_to_right requires digits in {0,1} with no '1011'"
        )
    if err == 2:
        raise InvariantError("non-canonical output after the left-to-right pass")
    if first < 0:
        return buf[:0]
    return buf[first:]


def add(a, b) -> np.ndarray:
    """Canonical sum of two canonical sequences via the three-pass pipeline."""
    work, err = _dsum_kernel(core.as_digits(a), core.as_digits(b))
    if err == 1 or err == 2:
        raise ContractError("add requires canonical inputs")
    if err == 3:
        raise InvariantError("digitwise_sum produced an unflanked 2")
    fir, cfir, err = _stage1_kernel(work)
    _raise_stage1(err)
    fir, err = _stage2_rl_kernel(work)
    if err:
        raise InvariantError("'1011' present after the right-to-left pass")
    fir, first, err = _stage2_lr_kernel(work)
    if err:
        raise InvariantError("non-canonical output after the left-to-right pass")
    if first < 0:
        return work[:0]
    return work[first:]


def _checked_copy(s, min_len: int, what: str) -> np.ndarray:
    buf = core.as_digits(s).copy()
    if buf.size < min_len:
        raise ContractError(f"{what} requires at least {min_len} digits")
    return buf


def _raise_stage1(err: int) -> None:
    if err == 3:
        raise ContractError(
            "stage1_eliminate requires digits in {0,1,2}, a leading zero "
            "and every 2 flanked by zeros"
        )
    if err == 1:
        raise InvariantError("uncovered right-edge cleanup configuration")
    if err == 2:
        raise InvariantError("digit above 1 survived stage 1")


# ---------------------------------------------------------------------------
# Traced (pure Python) pipeline, shared rule table, used by CLI and goldens

def _stage1_traced(s) -> tuple[np.ndarray, PassTrace]:
    buf = core.as_digits(s).tolist()
    n = len(buf)
    snaps: list[tuple[int, str, str, str]] = []
    fir = 0
    for i in range(n - 3):
        key = (buf[i], buf[i + 1], buf[i + 2])
        rule = STAGE1_RULES.get(key)
        if rule is None:
            continue
        name, repl, bump = rule
        if bump and buf[i + 3] > 2:
            continue
        before = core.digits_to_string(buf[i:i + 4])
        buf[i], buf[i + 1], buf[i + 2] = repl
        if bump:
            buf[i + 3] += 1
        snaps.append((i, name, before, core.digits_to_string(buf[i:i + 4])))
        fir += 1
    cfir = 0
    p, q, r = buf[n - 3], buf[n - 2], buf[n - 1]
    if q == 3:
        _expect(p == 0 and r == 0, "cleanup: 3 in third position not flanked")
        snaps.append((n - 3, "030", "030", "111"))
        buf[n - 3:] = [1, 1, 1]
        cfir += 1
    elif q == 2:
        if p == 0 and r == 0:
            snaps.append((n - 3, "020", "020", "101"))
            buf[n - 3:] = [1, 0, 1]
        elif p == 0 and r == 1:
            snaps.append((n - 3, "021", "021", "110"))
            buf[n - 3:] = [1, 1, 0]
        elif p == 1 and r == 0 and buf[n - 4] == 0:
            snaps.append((n - 4, "0120", "0120", "1010"))
            buf[n - 4:] = [1, 0, 1, 0]
        else:
            raise InvariantError("cleanup: unsupported context for 2 in third position")
        cfir += 1
    elif r == 3:
        _expect(q == 0, "cleanup: 3 in fourth position not preceded by 0")
        snaps.append((n - 2, "03", "03", "11"))
        buf[n - 2:] = [1, 1]
        cfir += 1
    elif r == 2:
        if q == 0:
            snaps.append((n - 2, "02", "02", "10"))
            buf[n - 2:] = [1, 0]
        elif q == 1 and p == 0:
            snaps.append((n - 3, "012", "012", "101"))
            buf[n - 3:] = [1, 0, 1]
        else:
            raise InvariantError("cleanup: 2 in fourth position not preceded by 0 or 01")
        cfir += 1
    _expect(max(buf) <= 1, "digit above 1 survived stage 1")
    trace = PassTrace("stage1", n - 3, fir, cfir, snaps)
    return np.asarray(buf, dtype=DIGIT_DTYPE), trace


def _stage2_traced(s, pass_id: str) -> tuple[np.ndarray, PassTrace]:
    buf = core.as_digits(s).tolist()
    n = len(buf)
    snaps: list[tuple[int, str, str, str]] = []
    fir = 0
    offsets = range(n - 3, -1, -1) if pass_id == "stage2_rl" else range(n - 2)
    steps = max(0, n - 2)
    for i in offsets:
        key = (buf[i], buf[i + 1], buf[i + 2])
        rule = STAGE2_RULE.get(key)
        if rule is None:
            continue
        name, repl = rule
        before = core.digits_to_string(buf[i:i + 3])
        buf[i], buf[i + 1], buf[i + 2] = repl
        snaps.append((i, name, before, core.digits_to_string(buf[i:i + 3])))
        fir += 1
    trace = PassTrace(pass_id, steps, fir, 0, snaps)
    return np.asarray(buf, dtype=DIGIT_DTYPE), trace


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise InvariantError(msg)


def add_traced(a, b) -> tuple[np.ndarray, list[PassTrace]]:
    """Like :func:`add`, returning per-pass traces with rewrite snapshots."""
    work = digitwise_sum(a, b)
    work, t1 = _stage1_traced(work)
    work, t2 = _stage2_traced(work, "stage2_rl")
    work, t3 = _stage2_traced(work, "stage2_lr")
    out = core.strip_leading_zeros(work)
    if not core.is_canonical(out):
        raise InvariantError("non-canonical output after the left-to-right pass")
    return out, [t1, t2, t3]
