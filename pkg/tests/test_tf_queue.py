import random

import pytest

from timefinger import ConfigurationError, DoubleEndedQueue, TimeFingerQueue
from timefinger.oracle import NaivePQ


def test_two_fingers_and_no_inserts_make_three_epochs():
    q = TimeFingerQueue()
    q.set_time_finger()
    q.set_time_finger()
    assert q.finger_count == 2
    assert q.epoch_sizes() == [0, 0, 0]


def test_insert_lands_in_the_live_epoch():
    q = TimeFingerQueue()
    a, b = q.insert(1), q.insert(2)
    q.set_time_finger()
    c, d = q.insert(3), q.insert(4)
    assert [q.epoch_of(h) for h in (a, b, c, d)] == [0, 0, 1, 1]
    q.delete(b)
    assert q.epoch_sizes() == [1, 2]
    assert not q.validate()


def test_finalized_epochs_still_serve_deletes_and_min():
    q = TimeFingerQueue()
    hs = [q.insert(k) for k in (5, 1, 7)]
    q.set_time_finger()
    q.insert(3)
    assert q.find_min().key == 1
    q.delete(hs[1])
    assert q.find_min().key == 3
    assert q.delete_min() == 3
    assert q.delete_min() == 5
    assert q.epoch_sizes() == [1, 0]


def test_finger_limit_is_a_configuration_error():
    q = TimeFingerQueue(max_fingers=2)
    q.set_time_finger()
    q.set_time_finger()
    with pytest.raises(ConfigurationError):
        q.set_time_finger()
    with pytest.raises(ConfigurationError):
        TimeFingerQueue(max_fingers=-1)


def test_zero_fingers_matches_a_single_depq():
    rng = random.Random(8)
    t, d = TimeFingerQueue(), DoubleEndedQueue()
    pairs = []
    for _ in range(20_000):
        r = rng.random()
        if not pairs or r < 0.5:
            k = rng.randint(0, 300)
            pairs.append((t.insert(k), d.insert(k)))
        elif r < 0.7:
            a, b = t.pop_min(), d.pop_min()
            assert (a.id, a.key) == (b.id, b.key)
            pairs = [p for p in pairs if p[0].id != a.id]
        elif r < 0.9:
            a, b = pairs.pop(rng.randrange(len(pairs)))
            t.delete(a)
            d.delete(b)
        else:
            assert t.find_min().id == d.find_min().id
        assert t.epochs[0].rank_profile() == d.rank_profile()


def test_find_min_cost_grows_only_with_finger_count():
    rng = random.Random(4)
    for f in range(9):
        q = TimeFingerQueue(max_fingers=8)
        for j in range(f + 1):
            for _ in range(rng.randint(0, 50)):
                q.insert(rng.randint(0, 10 ** 6))
            if j < f:
                q.set_time_finger()
        if len(q):
            q.find_min()
            assert q.last_cost <= 3 * (f + 1)


def test_random_trace_with_fingers_matches_oracle():
    rng = random.Random(21)
    q, ref = TimeFingerQueue(max_fingers=4), NaivePQ()
    pairs = []
    for step in range(20_000):
        r = rng.random()
        if r < 0.001 and q.finger_count < 4:
            q.set_time_finger()
            ref.set_time_finger()
        elif not pairs or r < 0.5:
            k = rng.randint(-100, 100)
            pairs.append((q.insert(k), ref.insert(k)))
        elif r < 0.65:
            key, hid = ref.find_min()
            h = q.pop_min()
            assert h.key == key
            i = next(i for i, (_, n) in enumerate(pairs) if n == hid)
            assert pairs.pop(i)[0].id == h.id
            ref.delete(hid)
        elif r < 0.9:
            h, n = pairs.pop(rng.randrange(len(pairs)))
            assert q.epoch_of(h) == ref.record(n)[3]
            q.delete(h)
            ref.delete(n)
        else:
            assert q.find_min().key == ref.find_min()[0]
            assert q.last_cost <= 3 * (q.finger_count + 1)
        if step % 211 == 0:
            assert not q.validate()
    assert q.finger_count == 4
    assert not q.validate()


def test_deletes_next_to_a_finger_stay_cheap():
    # two large epochs; deleting right next to the finger is cheap from both sides
    costs = []
    for n in (1000, 30_000):
        q = TimeFingerQueue()
        before = [q.insert(i) for i in range(n)]
        q.set_time_finger()
        after = [q.insert(i) for i in range(n)]
        total = 0
        for _ in range(500):
            q.delete(before.pop())
            total += q.last_cost
            q.delete(after.pop(0))
            total += q.last_cost
        costs.append(total / 1000)
        assert not q.validate()
    assert costs[1] <= costs[0] * 1.25 + 1, costs
