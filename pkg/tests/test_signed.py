import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zeckarith import core, signed
from zeckarith.core import ContractError, value
from zeckarith.signed import (
    SignedZeck,
    add_signed,
    detect_and_orient,
    digitwise_diff,
    parse_signed,
    preliminary_pass,
    subtract,
)


class TestSignedZeck:
    def test_zero_normalization(self):
        z = SignedZeck.make(True, [])
        assert not z.negative and str(z) == "0"

    def test_round_trip_int(self):
        for n in (-100, -1, 0, 1, 7, 24, 10**12):
            assert SignedZeck.from_int(n).to_int() == n

    def test_parse_and_print(self):
        assert str(parse_signed("-101")) == "-101"
        assert str(parse_signed("+1010")) == "1010"
        assert str(parse_signed("-0")) == "0"

    def test_parse_rejects_non_canonical(self):
        with pytest.raises(ContractError):
            parse_signed("-110")


class TestDigitwiseDiff:
    def test_examples(self):
        assert digitwise_diff("1000", "100").tolist() == [0, 0, 0, 1, -1, 0, 0]
        assert digitwise_diff("1", "1").tolist() == [0, 0, 0, 0]
        assert digitwise_diff("1010", "100").tolist() == [0, 0, 0, 1, -1, 1, 0]

    def test_rejects_non_canonical(self):
        with pytest.raises(ContractError):
            digitwise_diff("011", "1")

    def test_value(self, rng):
        for _ in range(300):
            a = core.random_canonical(int(rng.integers(0, 40)), rng)
            b = core.random_canonical(int(rng.integers(0, 40)), rng)
            assert value(digitwise_diff(a, b)) == value(a) - value(b)


class TestDetectAndOrient:
    def test_all_zero(self):
        neg, out = detect_and_orient([0, 0, 0, 0])
        assert not neg and out.tolist() == [0, 0, 0, 0]

    def test_leading_positive_unchanged(self):
        neg, out = detect_and_orient([0, 1, -1, 0])
        assert not neg and out.tolist() == [0, 1, -1, 0]

    def test_leading_negative_flipped(self):
        neg, out = detect_and_orient([0, -1, 1, 0, 0])
        assert neg and out.tolist() == [0, 1, -1, 0, 0]

    def test_flip_negates_value(self, rng):
        for _ in range(300):
            t = rng.integers(-1, 2, size=int(rng.integers(1, 50))).astype(np.int8)
            neg, out = detect_and_orient(t)
            if neg:
                assert value(out) == -value(t)
            else:
                assert np.array_equal(out, t)


class TestPreliminaryPass:
    def test_single_cancel(self):
        out = preliminary_pass(np.array([0, 0, 0, 1, -1, 0, 0], np.int8))
        assert out.tolist() == [0, 0, 0, 0, 0, 1, 0]

    def test_cancel_to_two(self):
        out = preliminary_pass(np.array([0, 0, 0, 1, -1, 1, 0], np.int8))
        assert out.tolist() == [0, 0, 0, 0, 0, 2, 0]

    def test_edge_cancel(self):
        # 5 - 1 leaves the negative digit in the last position; the edge
        # rewrite (1,-1) -> (0,1) finishes the job.
        t = digitwise_diff("1000", "1")
        out = preliminary_pass(t)
        assert value(out) == 4
        assert out.min() >= 0

    def test_requires_orientation(self):
        with pytest.raises(ContractError):
            preliminary_pass(np.array([0, 0, 0, -1, 0, 1], np.int8))

    def test_requires_padding(self):
        with pytest.raises(ContractError):
            preliminary_pass(np.array([0, 1, -1], np.int8))

    def test_output_feeds_stage1(self, rng):
        from zeckarith import adder

        for _ in range(1000):
            a = core.random_canonical(int(rng.integers(0, 60)), rng)
            b = core.random_canonical(int(rng.integers(0, 60)), rng)
            _, t = detect_and_orient(digitwise_diff(a, b))
            out = preliminary_pass(t)
            assert value(out) == value(t)
            assert out.min() >= 0 and out.max() <= 2
            for i in np.flatnonzero(out == 2):
                assert out[i - 1] == 0
                assert i == out.size - 1 or out[i + 1] == 0
            # must be accepted by the elimination stage
            res = adder.stage1_eliminate(out)
            assert value(res) == value(out)

    def test_traced_matches_kernel(self, rng):
        for _ in range(300):
            a = core.random_canonical(int(rng.integers(0, 40)), rng)
            b = core.random_canonical(int(rng.integers(0, 40)), rng)
            _, t = detect_and_orient(digitwise_diff(a, b))
            got, trace = signed.preliminary_pass_traced(t)
            assert np.array_equal(got, preliminary_pass(t))
            assert trace.steps == max(0, t.size - 2)
            assert trace.firings <= trace.steps


class TestAddSigned:
    @pytest.mark.parametrize(
        "x,y,want",
        [(5, -3, "10"), (3, -5, "-10"), (-4, -3, "-1010")],
    )
    def test_examples(self, x, y, want):
        assert str(add_signed(SignedZeck.from_int(x), SignedZeck.from_int(y))) == want

    def test_exhaustive_small(self):
        nums = [SignedZeck.from_int(n) for n in range(-150, 151)]
        for x in range(-150, 151):
            for y in range(-150, 151):
                got = add_signed(nums[x + 150], nums[y + 150])
                assert got.to_int() == x + y, (x, y)
                if x + y == 0:
                    assert not got.negative

    @given(
        st.integers(min_value=-(10**18), max_value=10**18),
        st.integers(min_value=-(10**18), max_value=10**18),
    )
    @settings(max_examples=150, deadline=None)
    def test_matches_integers(self, x, y):
        got = add_signed(SignedZeck.from_int(x), SignedZeck.from_int(y))
        assert got.to_int() == x + y


class TestSubtract:
    @pytest.mark.parametrize(
        "x,y,want",
        [(7, 3, "101"), (0, 0, "0"), (3, 7, "-101")],
    )
    def test_examples(self, x, y, want):
        assert str(subtract(SignedZeck.from_int(x), SignedZeck.from_int(y))) == want

    def test_sign_correctness(self):
        for x in range(0, 120):
            for y in range(0, 120):
                got = subtract(SignedZeck.from_int(x), SignedZeck.from_int(y))
                assert got.to_int() == x - y
                assert got.negative == (x < y)
