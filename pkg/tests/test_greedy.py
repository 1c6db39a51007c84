import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rom_mis.errors import DimensionMismatch
from rom_mis.generators import gen_greedy_lb, gen_similar_size, gen_sparse_bounded
from rom_mis.geometry import HyperRect, intersects, is_independent_set
from rom_mis.greedy import GreedyState, greedy_decisions, greedy_run, greedy_step
from rom_mis.oracle import brute_force_mis


def iv(a, b):
    return HyperRect.interval(a, b)


def test_greedy_step_examples():
    s = GreedyState(1)
    assert greedy_step(s, iv(0, 2))
    assert not greedy_step(s, iv(1, 3))
    s = GreedyState(1)
    greedy_step(s, iv(0, 1))
    assert greedy_step(s, iv(2, 3))
    assert s.accepted == [iv(0, 1), iv(2, 3)]
    assert s.decisions == [True, True]


def test_greedy_step_dimension_check():
    with pytest.raises(DimensionMismatch):
        greedy_step(GreedyState(2), iv(0, 1))


def test_fig1_orders():
    inst = gen_greedy_lb(16)
    units = inst.objects[:4]
    blockers = inst.objects[4:]
    assert len(greedy_run(units + blockers)) == 4
    assert len(greedy_run(blockers[:1] + units + blockers[1:])) == 1


def test_disjoint_boxes_all_taken():
    objs = [HyperRect([2 * i, 0], [2 * i + 1, 1]) for i in range(20)]
    rng = np.random.default_rng(0)
    order = [objs[i] for i in rng.permutation(20)]
    assert len(greedy_run(order)) == 20


def _is_maximal(seq, out):
    return all(any(intersects(h, g) for g in out) for h in seq if h not in out)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 40), st.integers(0, 10), st.integers(0, 40), st.integers(0, 10)),
                min_size=1, max_size=25))
def test_greedy_output_independent_and_maximal(rows):
    seq = [HyperRect([a, c], [a + b, c + e]) for a, b, c, e in rows]
    out = greedy_run(seq)
    assert is_independent_set(out)
    assert _is_maximal(seq, out)


def test_backends_agree_for_intervals():
    rng = np.random.default_rng(3)
    seq = [iv(int(a), int(a) + int(b)) for a, b in zip(rng.integers(0, 1000, 3000), rng.integers(0, 30, 3000))]
    assert greedy_decisions(seq, "naive") == greedy_decisions(seq, "interval")


def test_degree_bound():
    # greedy on a graph of max degree k returns at least n / (k + 1) vertices
    rng = np.random.default_rng(5)
    for _ in range(30):
        inst = gen_similar_size(2, 2, 14, seed=rng)
        objs = inst.objects
        deg = max(sum(1 for g in objs if g is not h and intersects(g, h)) for h in objs)
        for _ in range(5):
            order = [objs[i] for i in rng.permutation(len(objs))]
            assert len(greedy_run(order)) * (deg + 1) >= len(objs)


@pytest.mark.parametrize("delta,d", [(2, 1), (3, 2)])
def test_similar_size_bound_small(delta, d):
    rng = np.random.default_rng(delta * 10 + d)
    for _ in range(20):
        inst = gen_similar_size(delta, d, 12, seed=rng)
        opt = brute_force_mis(inst.objects)[0]
        order = [inst.objects[i] for i in rng.permutation(inst.n)]
        assert opt <= (2 * delta) ** d * len(greedy_run(order))


def test_sparse_thin_bound_small():
    rng = np.random.default_rng(9)
    for D in (1, 2, 3):
        for _ in range(10):
            inst = gen_sparse_bounded(-(-14 // D) + 1, D, 14, seed=rng)
            opt = brute_force_mis(inst.objects)[0]
            order = [inst.objects[i] for i in rng.permutation(inst.n)]
            assert opt <= 3 * D * len(greedy_run(order))
