import random

import pytest
from hypothesis import settings
from hypothesis import strategies as st
from hypothesis.stateful import RuleBasedStateMachine, invariant, precondition, rule

from timefinger import (
    DoubleEndedQueue,
    EmptyQueueError,
    StaleHandleError,
    TimeFingerQueue,
    WorkingSetQueue,
    WrongQueueError,
)
from timefinger.core_tree import chronological_order
from timefinger.oracle import NaivePQ

QUEUES = [WorkingSetQueue, DoubleEndedQueue, TimeFingerQueue]


def keys_chrono(q):
    return [x.key for x in q.nodes_chrono()]


def test_insert_into_empty():
    q = WorkingSetQueue()
    q.insert(5)
    assert q.rank_profile() == [0]
    assert q.find_min().key == 5


def test_three_inserts_join_into_one_tree():
    q = WorkingSetQueue()
    for k in (3, 1, 2):
        q.insert(k)
    assert q.rank_profile() == [1]
    root = q.row.trees[0]
    assert root.key == 1
    assert [x.key for x in chronological_order(root)] == [3, 1, 2]
    assert q.find_min().key == 1


def test_delete_min_single():
    q = WorkingSetQueue()
    q.insert(5)
    assert q.delete_min() == 5
    assert len(q) == 0
    with pytest.raises(EmptyQueueError):
        q.find_min()


def test_delete_min_after_three():
    q = WorkingSetQueue()
    for k in (3, 1, 2):
        q.insert(k)
    assert q.delete_min() == 1
    assert sorted(keys_chrono(q)) == [2, 3]
    assert keys_chrono(q) == [3, 2]
    assert not q.validate()


def test_delete_handle():
    q = WorkingSetQueue()
    h = q.insert(5)
    q.delete(h)
    assert len(q) == 0 and not q.validate()


def test_delete_oldest_of_three():
    q = WorkingSetQueue()
    h3 = q.insert(3)
    q.insert(1)
    q.insert(2)
    q.delete(h3)
    assert keys_chrono(q) == [1, 2]
    assert q.find_min().key == 1
    assert not q.validate()


@pytest.mark.parametrize("cls", QUEUES)
def test_empty_queue_errors(cls):
    q = cls()
    with pytest.raises(EmptyQueueError):
        q.find_min()
    with pytest.raises(EmptyQueueError):
        q.delete_min()
    with pytest.raises(EmptyQueueError):
        q.pop_min()


@pytest.mark.parametrize("cls", QUEUES)
def test_stale_and_foreign_handles(cls):
    q, other = cls(), cls()
    h = q.insert(1)
    g = other.insert(1)
    with pytest.raises(WrongQueueError):
        q.delete(g)
    q.delete(h)
    with pytest.raises(StaleHandleError):
        q.delete(h)
    popped = other.pop_min()
    with pytest.raises(StaleHandleError):
        other.delete(popped)


@pytest.mark.parametrize("cls", QUEUES)
def test_equal_keys_come_out_oldest_first(cls):
    q = cls()
    hs = [q.insert(7) for _ in range(20)]
    assert [q.pop_min().id for _ in range(20)] == [h.id for h in hs]


@pytest.mark.parametrize("cls", QUEUES)
def test_random_trace_matches_oracle(cls):
    rng = random.Random(42)
    q, ref = cls(), NaivePQ()
    pairs = []
    for step in range(10_000):
        r = rng.random()
        if not pairs or r < 0.45:
            k = rng.randint(0, 200)
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
            q.delete(h)
            ref.delete(n)
        else:
            if pairs:
                assert q.find_min().key == ref.find_min()[0]
        assert len(q) == len(ref)
        if step % 97 == 0:
            assert not q.validate()
    assert sorted(keys_chrono(q)) == sorted(r[0] for r in ref._recs)


def test_sequential_inserts_are_amortized_constant():
    for k in (10, 14):
        q = WorkingSetQueue()
        for i in range(2 ** k):
            q.insert(i)
        per_op = q.meter.total() / 2 ** k
        assert per_op < 8, per_op


def test_alternating_new_minimum_costs_constant():
    # the newest element is always the minimum, so w_x = 0 at every delete
    costs = {}
    for n in (100, 10_000):
        q = WorkingSetQueue()
        for i in range(n):
            q.insert(i)
        total = 0
        for j in range(2000):
            q.insert(-j - 1)
            q.delete_min()
            total += q.last_cost
        costs[n] = total / 2000
    assert costs[10_000] <= costs[100] + 1
    assert costs[10_000] < 10


def test_find_min_cost_is_constant():
    q = WorkingSetQueue()
    for i in range(5000):
        q.insert(random.Random(i).randint(0, 100))
        q.find_min()
        assert q.last_cost == 0
    assert q.cost_meter() == dict.fromkeys(q.meter.as_dict(), 0)


def test_cost_meter_reports_last_operation():
    q = WorkingSetQueue()
    for k in (3, 1):
        q.insert(k)
    q.insert(2)
    m = q.cost_meter()
    assert m["joins"] == 1 and m["comparisons"] >= 2
    assert sum(m.values()) == q.last_cost


class QueueMachine(RuleBasedStateMachine):
    """Random interleavings checked against the oracle with full validation."""

    cls = WorkingSetQueue

    def __init__(self):
        super().__init__()
        self.q = self.cls()
        self.ref = NaivePQ()
        self.pairs = []

    @rule(k=st.integers(-5, 5))
    def insert(self, k):
        self.pairs.append((self.q.insert(k), self.ref.insert(k)))

    @precondition(lambda self: self.pairs)
    @rule()
    def delete_min(self):
        key, hid = self.ref.find_min()
        h = self.q.pop_min()
        assert h.key == key
        idx = next(i for i, (_, n) in enumerate(self.pairs) if n == hid)
        assert self.pairs.pop(idx)[0].id == h.id
        self.ref.delete(hid)

    @precondition(lambda self: self.pairs)
    @rule(i=st.integers(0, 10 ** 6))
    def delete(self, i):
        h, n = self.pairs.pop(i % len(self.pairs))
        self.q.delete(h)
        self.ref.delete(n)

    @invariant()
    def consistent(self):
        assert not self.q.validate()
        if self.pairs:
            key, hid = self.ref.find_min()
            h = self.q.find_min()
            assert h.key == key
            assert dict((n, x.id) for x, n in self.pairs)[hid] == h.id


class DepqMachine(QueueMachine):
    cls = DoubleEndedQueue


class FingerMachine(QueueMachine):
    cls = TimeFingerQueue

    @precondition(lambda self: self.q.finger_count < 4)
    @rule()
    def finger(self):
        self.q.set_time_finger()
        self.ref.set_time_finger()


settings_ = settings(max_examples=60, stateful_step_count=60, deadline=None)
TestWorkingSetMachine = QueueMachine.TestCase
TestWorkingSetMachine.settings = settings_
TestDepqMachine = DepqMachine.TestCase
TestDepqMachine.settings = settings_
TestFingerMachine = FingerMachine.TestCase
TestFingerMachine.settings = settings_
