import random

from timefinger import DoubleEndedQueue, WorkingSetQueue
from timefinger.oracle import NaivePQ


def stamps(q):
    return [x.ts for x in q.nodes_chrono()]


def test_insert_into_empty():
    q = DoubleEndedQueue()
    q.insert(5)
    assert q.rank_profile() == ([], [0])


def test_min_on_either_side():
    for first, second in ((1, 2), (2, 1)):
        q = DoubleEndedQueue()
        q.insert(first)
        q.insert(second)
        # force the older element into the left row
        for _ in range(6):
            q.insert(100)
        assert q.left.trees, q.rank_profile()
        assert q.find_min().key == 1
        assert not q.validate()


def test_insert_only_run_keeps_balance():
    q = DoubleEndedQueue()
    for i in range(5000):
        q.insert(i)
        lm, rm = q.maxranks()
        if q.left.trees:
            assert abs(lm - rm) <= 1
        else:
            assert rm <= 1
    assert not q.validate()
    assert q.moves > 0


def test_first_move_goes_left_and_keeps_chronology():
    # an empty row counts as rank -1, so the first move comes at right rank 1
    q = DoubleEndedQueue()
    n = 0
    while not q.left.trees:
        q.insert(n)
        n += 1
    assert q.rank_profile()[0] == [0]
    assert q.left.trees[0].ts == 1
    s = stamps(q)
    assert s == sorted(s) and len(set(s)) == len(s)
    assert not q.validate()


def test_draining_the_left_row_refills_it_from_the_right():
    q = DoubleEndedQueue()
    hs = [q.insert(i) for i in range(2000)]
    while len(hs) > 10:
        q.delete(hs.pop(0))
        lm, rm = q.maxranks()
        assert q.left.trees or rm <= 0
        assert abs(lm - rm) <= 1
        s = stamps(q)
        assert s == sorted(s)
    assert not q.validate()


def test_insert_cost_is_amortized_constant():
    q = DoubleEndedQueue()
    for i in range(100_000):
        q.insert(i)
    assert q.meter.total() / 100_000 < 8


def mean_delete_cost(live, order, rounds=5000):
    q = DoubleEndedQueue()
    hs = [q.insert(i) for i in range(live)]
    total = 0
    for r in range(rounds):
        h = hs.pop(0) if order == "fifo" else hs.pop()
        q.delete(h)
        total += q.last_cost
        hs.append(q.insert(live + r))
    assert not q.validate()
    return total / rounds


def test_fifo_and_lifo_delete_costs_do_not_grow():
    for order in ("fifo", "lifo"):
        small = mean_delete_cost(100, order)
        large = mean_delete_cost(10_000, order)
        assert large <= small * 1.25 + 1, (order, small, large)
        assert large < 16


def test_q_is_n_minus_w_minus_one_at_every_delete():
    rng = random.Random(5)
    ref = NaivePQ()
    ids = []
    for _ in range(3000):
        if not ids or rng.random() < 0.55:
            ids.append(ref.insert(rng.randint(0, 50)))
            continue
        hid = ids.pop(rng.randrange(len(ids)))
        n = len(ref)
        w, q, _ = ref.measure(hid)
        assert q == n - w - 1
        assert (ref.measure_w(hid), ref.measure_q(hid)) == (w, q)
        ref.delete(hid)


def test_random_trace_keeps_balance_after_every_operation():
    rng = random.Random(11)
    q = DoubleEndedQueue()
    hs = []
    for step in range(20_000):
        r = rng.random()
        if not hs or r < 0.5:
            hs.append(q.insert(rng.randint(0, 1000)))
        elif r < 0.6:
            h = q.pop_min()
            hs.remove(h)
        elif r < 0.8:
            # bias deletes towards both ends to force moves in both directions
            i = rng.choice((0, -1)) if rng.random() < 0.7 else rng.randrange(len(hs))
            q.delete(hs.pop(i))
        else:
            q.find_min()
        if q.left.trees and q.right.trees:
            lm, rm = q.maxranks()
            assert abs(lm - rm) <= 1
        if step % 101 == 0:
            assert not q.validate()
    assert not q.validate()


def test_without_rebalancing_matches_single_row():
    rng = random.Random(3)
    d, w = DoubleEndedQueue(), WorkingSetQueue()
    d.rebalance = lambda: None
    pairs = []
    for _ in range(20_000):
        if not pairs or rng.random() < 0.55:
            k = rng.randint(0, 500)
            pairs.append((d.insert(k), w.insert(k)))
        elif rng.random() < 0.5:
            a, b = d.pop_min(), w.pop_min()
            assert (a.id, a.key) == (b.id, b.key)
            pairs = [p for p in pairs if p[0].id != a.id]
        else:
            a, b = pairs.pop(rng.randrange(len(pairs)))
            d.delete(a)
            w.delete(b)
        assert not d.left.trees
        assert [t.rank for t in d.right.trees] == w.rank_profile()
