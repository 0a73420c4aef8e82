import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zeckarith import core
from zeckarith.core import (
    ContractError,
    fib,
    greedy_zeckendorf,
    is_canonical,
    parse_digits,
    parse_zeck,
    value,
    zeck_to_string,
)

from conftest import dstr


class TestFib:
    def test_base_cases(self):
        assert fib(2) == 1
        assert fib(3) == 2

    def test_f10(self):
        assert fib(10) == 55

    def test_below_domain(self):
        with pytest.raises(ValueError):
            fib(1)
        with pytest.raises(ValueError):
            fib(0)

    def test_recurrence_up_to_500(self):
        for k in range(4, 501):
            assert fib(k) == fib(k - 1) + fib(k - 2)


class TestValue:
    def test_single_digit(self):
        assert value("100") == 3

    def test_working_digits(self):
        assert value("201") == 7

    def test_empty_is_zero(self):
        assert value([]) == 0
        assert value("0") == 0

    def test_signed_digits(self):
        assert value([1, -1, 0]) == 3 - 2
        assert value([1, 0, -1, 0, 0]) == 8 - 3

    def test_split_recursion_matches_direct_sum(self, rng):
        for length in (1, 47, 48, 49, 50, 97, 400, 3000):
            d = rng.integers(-1, 2, size=length).astype(np.int8)
            direct = sum(
                int(c) * fib(2 + length - 1 - i)
                for i, c in enumerate(d.tolist())
                if c
            )
            assert value(d) == direct


class TestGreedy:
    def test_zero(self):
        assert greedy_zeckendorf(0).size == 0
        assert zeck_to_string(greedy_zeckendorf(0)) == "0"

    def test_examples(self):
        assert zeck_to_string(greedy_zeckendorf(7)) == "1010"
        assert zeck_to_string(greedy_zeckendorf(24)) == "1000100"

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            greedy_zeckendorf(-1)

    def test_bijection_small(self):
        seen = set()
        for n in range(100_000):
            g = greedy_zeckendorf(n)
            assert value(g) == n
            assert is_canonical(g)
            s = zeck_to_string(g)
            assert s not in seen
            seen.add(s)

    def test_uniqueness_by_enumeration(self):
        # Every canonical digit string of length <= 20 has a distinct value,
        # and the values exactly cover an initial segment of the naturals.
        values = {0}
        stack = [(1,)]
        while stack:
            d = stack.pop()
            v = value(list(d))
            assert v not in values
            values.add(v)
            if len(d) < 20:
                stack.append(d + (0,))
                if d[-1] == 0:
                    stack.append(d + (1,))
        assert values == set(range(len(values)))
        assert len(values) == fib(22)  # strings up to length 20 reach F(22)-1

    @given(st.integers(min_value=0, max_value=10**30))
    @settings(max_examples=200, deadline=None)
    def test_round_trip_large(self, n):
        assert value(greedy_zeckendorf(n)) == n


class TestCanonical:
    @pytest.mark.parametrize(
        "s,want",
        [
            ("1010", True),
            ("110", False),
            ("020", False),
            ("0", True),
            ("1", True),
            ("01", False),
            ("00", False),
            ("101001010010", True),
        ],
    )
    def test_cases(self, s, want):
        assert is_canonical(s) is want

    def test_empty_is_canonical_zero(self):
        assert is_canonical([])


class TestStrings:
    def test_parse_rejects_garbage(self):
        for bad in ("", "12a", "1 0", "-10", "4"):
            with pytest.raises(ValueError):
                parse_digits(bad)

    def test_parse_zeck_rejects_non_canonical(self):
        for bad in ("110", "011", "20"):
            with pytest.raises(ContractError):
                parse_zeck(bad)

    def test_zero_forms(self):
        assert parse_zeck("0").size == 0
        assert zeck_to_string([]) == "0"

    def test_negative_digit_prints_as_n(self):
        assert dstr([1, -1, 0]) == "1N0"


class TestRandomCanonical:
    def test_exact_length_and_canonical(self, rng):
        for length in (1, 2, 3, 10, 1000):
            d = core.random_canonical(length, rng)
            assert d.size == length
            assert d[0] == 1
            assert is_canonical(d)

    def test_zero_length(self, rng):
        assert core.random_canonical(0, rng).size == 0


def test_fib_memo_is_thread_safe():
    import threading

    errors = []

    def worker(base):
        try:
            for k in range(2, 400):
                assert fib(base + k) == fib(base + k - 1) + fib(base + k - 2)
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [threading.Thread(target=worker, args=(i * 37 + 2,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
