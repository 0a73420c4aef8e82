import numpy as np
import pytest

from zeckarith import adder, automaton, core
from zeckarith.automaton import (
    PASS_IDS,
    compile_pass,
    cost_report,
    direct_pass,
    prefix,
    random_pass_input,
    run_parallel_prefix,
    run_scan,
    scan,
    transduce,
)
from zeckarith.core import ContractError, greedy_zeckendorf, value


@pytest.fixture(scope="module")
def machines():
    return {pid: compile_pass(pid) for pid in PASS_IDS}


class TestCompile:
    def test_state_budget(self, machines):
        for t in machines.values():
            assert t.n_states <= 256

    def test_stage2_lr_small(self, machines):
        assert machines["stage2_lr"].n_states <= 8

    def test_stage1_pending_states(self, machines):
        t = machines["stage1"]
        full = sum(1 for lbl in t.state_labels if len(lbl) == 3)
        assert full <= 64
        assert (t.alpha_min, t.alpha_max) == (0, 3)

    def test_directions(self, machines):
        assert machines["stage2_rl"].direction == "RL"
        assert machines["stage1"].direction == "LR"

    def test_unknown_pass(self):
        with pytest.raises(ValueError):
            compile_pass("bogus")


class TestScan:
    def test_rl_reversal_example(self, machines):
        t = machines["stage2_rl"]
        out = run_scan(t, core.parse_digits("0110")[::-1])[::-1]
        assert out.tolist() == [1, 0, 0, 0]
        assert transduce(t, "0110").tolist() == [1, 0, 0, 0]

    def test_stage1_example(self, machines):
        out = transduce(machines["stage1"], "000201")
        assert out.tolist() == [0, 0, 1, 0, 1, 0]

    def test_prelim_example(self, machines):
        out = transduce(
            machines["signed_prelim"], np.array([0, 0, 0, 1, -1, 0, 0], np.int8)
        )
        assert out.tolist() == [0, 0, 0, 0, 0, 1, 0]

    def test_lr_noop(self, machines):
        assert transduce(machines["stage2_lr"], "0101").tolist() == [0, 1, 0, 1]

    def test_alphabet_contract(self, machines):
        with pytest.raises(ContractError):
            run_scan(machines["stage2_lr"], "0120")

    def test_scan_equals_direct_random(self, machines, rng):
        for pid in PASS_IDS:
            t = machines[pid]
            for _ in range(1500):
                n = int(rng.integers(4, 150))
                s = random_pass_input(pid, n, rng)
                assert np.array_equal(transduce(t, s), direct_pass(pid, s)), (
                    pid,
                    s.tolist(),
                )

    def test_scan_equals_direct_exhaustive_adds(self, machines):
        for x in range(150):
            for y in range(150):
                w = adder.digitwise_sum(greedy_zeckendorf(x), greedy_zeckendorf(y))
                w1 = transduce(machines["stage1"], w)
                assert np.array_equal(w1, adder.stage1_eliminate(w))
                w2 = transduce(machines["stage2_rl"], w1)
                assert np.array_equal(w2, adder.stage2_right_to_left(w1))
                w3 = transduce(machines["stage2_lr"], w2)
                assert np.array_equal(w3, direct_pass("stage2_lr", w2))


class TestPrefix:
    def test_single_chunk_degenerates_to_scan(self, machines, rng):
        t = machines["stage1"]
        s = random_pass_input("stage1", 64, rng)
        assert np.array_equal(run_parallel_prefix(t, s, 64), run_scan(t, s))

    def test_chunk_independence(self, machines, rng):
        for pid in PASS_IDS:
            t = machines[pid]
            for _ in range(250):
                n = int(rng.integers(4, 200))
                s = random_pass_input(pid, n, rng)
                feed = s[::-1] if t.direction == "RL" else s
                want = run_scan(t, feed)
                for chunk in (1, 2, 3, 8, 64, n):
                    got = run_parallel_prefix(t, feed, chunk)
                    assert np.array_equal(got, want), (pid, chunk, n)

    def test_work_and_height(self, machines, rng):
        t = machines["stage2_rl"]
        for n in (16, 100, 1024, 4000):
            s = rng.integers(0, 2, size=n).astype(np.int8)
            run = prefix(t, s, 1)
            rep = cost_report(run)
            assert rep.leaves == n
            assert rep.tree_height == (n - 1).bit_length()
            assert rep.compositions <= 2 * n
            for chunk in (2, 7, 64, n):
                rep = cost_report(prefix(t, s, chunk))
                assert rep.compositions <= 2 * n
                assert rep.tree_height == (rep.leaves - 1).bit_length()

    def test_chunk_contract(self, machines):
        with pytest.raises(ContractError):
            prefix(machines["stage1"], "0000", 0)


class TestCostReport:
    def test_scan_placements(self, machines, rng):
        t = machines["stage1"]
        s = random_pass_input("stage1", 100, rng)
        rep = cost_report(scan(t, s))
        assert rep.placements == 97
        assert rep.transitions == 100
        assert rep.firings <= rep.placements

    def test_prefix_height_1024(self, machines, rng):
        s = rng.integers(0, 2, size=1024).astype(np.int8)
        rep = cost_report(prefix(machines["stage2_rl"], s, 1))
        assert rep.tree_height == 10

    def test_firings_match_direct_trace(self, machines, rng):
        for _ in range(100):
            a = core.random_canonical(int(rng.integers(1, 40)), rng)
            b = core.random_canonical(int(rng.integers(1, 40)), rng)
            _, traces = adder.add_traced(a, b)
            w = adder.digitwise_sum(a, b)
            rep = cost_report(scan(machines["stage1"], w))
            assert rep.firings == traces[0].firings


def test_value_preserved_by_transduction(machines, rng):
    for pid in PASS_IDS:
        t = machines[pid]
        for _ in range(200):
            n = int(rng.integers(4, 120))
            s = random_pass_input(pid, n, rng)
            assert value(transduce(t, s)) == value(s)
