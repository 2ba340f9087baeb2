"""Operation traces: text format, workload generators and the runner.

One operation per line::

    I <key> [<id>]   insert; key is a signed 64-bit integer, id unsigned 64-bit
    DM               delete-min
    D <id>           delete the element inserted with that id
    FM               find-min
    TF               set a time finger
    # ...            comment

An insert without an id gets the number of inserts before it.
"""

from __future__ import annotations

import hashlib
import heapq
import math
import random
from dataclasses import dataclass
from functools import partial
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import nnls

from .bounds import bound_report
from .errors import EmptyQueueError, QueueError, TraceError
from .oracle import NaivePQ
from .tf_queue import DEFAULT_MAX_FINGERS, TimeFingerQueue

INT64 = (-(2 ** 63), 2 ** 63 - 1)
UINT64 = (0, 2 ** 64 - 1)
WORKLOADS = ("random", "fifo", "lifo", "burst-fingers", "adversarial-rank")
MAX_TRACE_FINGERS = 4


class TraceOp(NamedTuple):
    op: str
    key: Optional[int] = None
    id: Optional[int] = None
    text: Optional[str] = None

    def __str__(self):
        if self.op == "#":
            return self.text
        if self.op == "I":
            return f"I {self.key}" if self.id is None else f"I {self.key} {self.id}"
        if self.op == "D":
            return f"D {self.id}"
        return self.op


_new_op = partial(tuple.__new__, TraceOp)
_DM, _FM, _TF = TraceOp("DM"), TraceOp("FM"), TraceOp("TF")


def _int(tok, lo_hi, what, lineno):
    try:
        v = int(tok)
    except ValueError:
        raise TraceError(f"bad {what} {tok!r}", lineno) from None
    if not lo_hi[0] <= v <= lo_hi[1]:
        raise TraceError(f"{what} {v} out of range", lineno)
    return v


def parse_line(line, lineno=None):
    toks = line.split()
    if not toks or toks[0].startswith("#"):
        return TraceOp("#", text=line)
    if "#" in toks:
        toks = toks[:toks.index("#")]
    op, args = toks[0], toks[1:]
    if op == "I" and len(args) in (1, 2):
        key = _int(args[0], INT64, "key", lineno)
        hid = _int(args[1], UINT64, "id", lineno) if len(args) == 2 else None
        return TraceOp("I", key, hid)
    if op == "D" and len(args) == 1:
        return TraceOp("D", id=_int(args[0], UINT64, "id", lineno))
    if op in ("DM", "FM", "TF") and not args:
        return TraceOp(op)
    raise TraceError(f"cannot parse {line.strip()!r}", lineno)


def parse_trace(text):
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [parse_line(line, n) for n, line in enumerate(lines, 1)]


def serialize_trace(ops):
    return "".join(f"{op}\n" for op in ops)


# ---------------------------------------------------------------- generation


class _Live:
    """Generator-side model of the live set: ids in insertion order plus a min-heap."""

    def __init__(self, rng):
        self.rng = rng
        self.keys = {}
        self.pool = []
        self.pos = {}
        self.heap = []
        self.next_id = 0
        self.ops = []
        self.fingers = 0

    def __len__(self):
        return len(self.keys)

    def insert(self, key):
        hid = self.next_id
        self.next_id = hid + 1
        self.keys[hid] = key
        pool = self.pool
        self.pos[hid] = len(pool)
        pool.append(hid)
        heapq.heappush(self.heap, (key, hid))
        self.ops.append(_new_op(("I", key, hid, None)))
        return hid

    def _drop(self, hid):
        del self.keys[hid]
        i = self.pos.pop(hid)
        pool = self.pool
        last = pool.pop()
        if last != hid:
            pool[i] = last
            self.pos[last] = i

    def delete(self, hid):
        self._drop(hid)
        self.ops.append(_new_op(("D", None, hid, None)))

    def delete_min(self):
        # ids grow with insertion time, so (key, id) is the queue's tie rule
        while self.heap[0][1] not in self.keys:
            heapq.heappop(self.heap)
        self._drop(heapq.heappop(self.heap)[1])
        self.ops.append(_DM)

    def find_min(self):
        self.ops.append(_FM)

    def finger(self):
        self.fingers += 1
        self.ops.append(_TF)

    def random_id(self):
        return self.pool[self.rng.randrange(len(self.pool))]

    def oldest(self):
        return next(iter(self.keys))

    def newest(self):
        return next(reversed(self.keys))


def _key_source(rng):
    span = rng.choice((16, 10 ** 6, None))
    if span is None:
        return lambda: rng.randint(*INT64)
    return lambda: rng.randint(-span, span)


def _gen_random(live, size, target):
    rng = live.rng
    rand = rng.random
    key = _key_source(rng)
    n_fingers = rng.randint(0, MAX_TRACE_FINGERS)
    finger_at = set(rng.sample(range(size), min(n_fingers, size)))
    keys = live.keys
    insert, delete, delete_min, find_min = live.insert, live.delete, live.delete_min, live.find_min
    pool, randrange = live.pool, rng.randrange
    for pos in range(size):
        if pos in finger_at:
            live.finger()
            continue
        n = len(keys)
        if not n or rand() < (0.6 if n < target else 0.3):
            insert(key())
            continue
        r = rand()
        if r < 0.33:
            delete_min()
        elif r < 0.66:
            delete(pool[randrange(len(pool))])
        else:
            find_min()


def _gen_stack(live, size, target, newest):
    rng = live.rng
    for _ in range(min(target, size)):
        live.insert(rng.randint(-10 ** 9, 10 ** 9))
    while len(live.ops) < size:
        b = rng.randint(1, 8)
        for _ in range(b):
            live.insert(rng.randint(-10 ** 9, 10 ** 9))
        for _ in range(b):
            live.delete(live.newest() if newest else live.oldest())
    del live.ops[size:]


def _gen_burst(live, size, target):
    """Three insertion bursts split by two fingers, then churn at the fingers.

    Each delete removes an element adjacent to a finger (the newest of an
    earlier burst or the oldest of a later one) and is paired with a fresh
    insert, so the live count stays at 3 * burst.
    """
    rng = live.rng
    burst = max(1, min(target, size // 8))
    bounds = []
    for b in range(3):
        if b:
            live.finger()
        start = live.next_id
        for _ in range(burst):
            live.insert(rng.randint(-10 ** 9, 10 ** 9))
        bounds.append((start, live.next_id))
    # (next candidate id, direction, id range) for: newest of burst 0,
    # oldest of burst 1, newest of burst 1, oldest of burst 2
    (a0, b0), (a1, b1), (a2, b2) = bounds
    cursors = [[b0 - 1, -1, a0, b0], [a1, 1, a1, b1], [b1 - 1, -1, a1, b1], [a2, 1, a2, b2]]
    turn = 0
    while len(live.ops) < size:
        for _ in range(len(cursors)):
            c = cursors[turn % len(cursors)]
            turn += 1
            while c[2] <= c[0] < c[3] and c[0] not in live.keys:
                c[0] += c[1]
            if c[2] <= c[0] < c[3]:
                live.delete(c[0])
                break
        else:
            live.delete(live.newest())
        live.insert(rng.randint(-10 ** 9, 10 ** 9))
        if rng.random() < 0.1:
            live.find_min()
    del live.ops[size:]


def _gen_adversarial(live, size, target):
    """Alternate draining half the queue from the old end and from the new end."""
    rng = live.rng
    for _ in range(min(target, size)):
        live.insert(rng.randint(-10 ** 9, 10 ** 9))
    from_old = True
    while len(live.ops) < size:
        d = max(1, len(live) // 2)
        for _ in range(d):
            live.delete(live.oldest() if from_old else live.newest())
        for _ in range(d):
            live.insert(rng.randint(-10 ** 9, 10 ** 9))
        from_old = not from_old
    del live.ops[size:]


def default_live(workload, size):
    if workload == "random":
        return max(8, min(1000, size // 10))
    return max(1, min(10 ** 4, size // 10))


def gen_ops(workload, size, seed, live=None):
    if workload not in WORKLOADS:
        raise TraceError(f"unknown workload {workload!r}; choose from {', '.join(WORKLOADS)}")
    if size < 1:
        raise TraceError("size must be at least 1")
    target = default_live(workload, size) if live is None else live
    state = _Live(random.Random(seed))
    if workload == "random":
        _gen_random(state, size, target)
    elif workload in ("fifo", "lifo"):
        _gen_stack(state, size, target, newest=workload == "lifo")
    elif workload == "burst-fingers":
        _gen_burst(state, size, target)
    else:
        _gen_adversarial(state, size, target)
    header = TraceOp("#", text=f"# workload={workload} size={size} seed={seed}")
    return [header] + state.ops


def gen_trace(workload, size, seed, live=None):
    return serialize_trace(gen_ops(workload, size, seed, live))


# ------------------------------------------------------------------- running


@dataclass
class OpRecord:
    op: str
    key: Optional[int] = None
    handle_id: Optional[int] = None
    cost: int = 0
    w: Optional[int] = None
    q: Optional[int] = None
    wmin: Optional[int] = None
    bound: Optional[float] = None
    rank: Optional[int] = None
    error: Optional[str] = None

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


class TraceMismatch(QueueError):
    """The queue disagreed with the oracle, or failed validation.

    ``prefix`` is the shortest prefix of the trace that reproduces it.
    """

    def __init__(self, message, prefix, lineno):
        super().__init__(f"line {lineno}: {message}")
        self.prefix = prefix
        self.lineno = lineno


class TraceRunner:
    """Executes trace operations against a TimeFingerQueue.

    With ``oracle`` every answer is checked against NaivePQ; with
    ``measure`` (default: same as ``oracle``) each deletion is also
    annotated with w_x, q_x, the finger minimum and the rank of the
    element's tree.  ``validate`` runs the structural checks after every
    operation.
    """

    def __init__(self, oracle=False, validate=False, measure=None, max_fingers=DEFAULT_MAX_FINGERS):
        self.queue = TimeFingerQueue(max_fingers)
        self.naive = NaivePQ() if oracle or measure else None
        self.check = oracle
        self.measure = oracle if measure is None else measure
        self.validate = validate
        self.handles = {}
        self.naive_ids = {}
        self.trace_id = {}
        self.inserts = 0
        self.executed = []
        self.counts = dict.fromkeys(("I", "D", "DM", "FM", "TF"), 0)
        self.total_cost = 0
        self.delete_cost = 0
        self.fm_cost_max = 0
        self.fm_cost_ratio_max = 0.0
        self.sum_bound = 0.0
        self.cum_cost = []
        self.cum_bound = []

    def _fail(self, message, lineno):
        raise TraceMismatch(message, [op for op, _ in self.executed], lineno)

    def _tree_rank(self, handle):
        x = self.queue._resolve(handle)
        while x.parent is not None:
            x = x.parent
        return x.rank

    def _measure(self, rec, tid):
        hid = self.naive_ids[tid]
        naive = self.naive
        rec.w, rec.q, rec.wmin = naive.measure(hid)
        rec.bound = math.log2(rec.wmin + 2)
        rec.rank = self._tree_rank(self.handles[tid])
        self.sum_bound += rec.bound

    def step(self, op, lineno=None):
        """Execute one operation; returns its OpRecord (None for comments)."""
        kind = op.op
        if kind == "#":
            return None
        self.executed.append((op, lineno))
        q = self.queue
        naive = self.naive
        rec = OpRecord(kind)
        if kind == "I":
            tid = self.inserts if op.id is None else op.id
            self.inserts += 1
            if tid in self.handles:
                raise TraceError(f"id {tid} is already live", lineno)
            h = q.insert(op.key)
            self.handles[tid] = h
            self.trace_id[h.id] = tid
            if naive is not None:
                self.naive_ids[tid] = naive.insert(op.key)
            rec.key, rec.handle_id = op.key, tid
        elif kind == "TF":
            q.set_time_finger()
            if naive is not None:
                naive.set_time_finger()
        elif kind == "D":
            tid = op.id
            h = self.handles.get(tid)
            if h is None:
                raise TraceError(f"id {tid} is not live", lineno)
            if self.measure:
                self._measure(rec, tid)
            q.delete(h)
            del self.handles[tid]
            if naive is not None:
                naive.delete(self.naive_ids.pop(tid))
            rec.key, rec.handle_id = h.key, tid
            self.delete_cost += q.last_cost
        else:
            expect = None
            if naive is not None:
                try:
                    key, nid = naive.find_min()
                    expect = (key, nid)
                except EmptyQueueError:
                    expect = "empty"
            if kind == "DM" and self.measure and expect not in (None, "empty"):
                tid = self._tid_of_naive(expect[1])
                self._measure(rec, tid)
            try:
                h = q.find_min() if kind == "FM" else q.pop_min()
            except EmptyQueueError:
                rec.error = "empty"
                if self.check and expect != "empty":
                    self._fail(f"{kind}: queue reports empty, oracle has {len(naive)} elements", lineno)
            else:
                tid = self.trace_id[h.id]
                rec.key, rec.handle_id = h.key, tid
                if self.check and (expect == "empty" or expect[0] != h.key
                                   or self.naive_ids[tid] != expect[1]):
                    self._fail(f"{kind}: queue answered key {h.key} (id {tid}), oracle {expect}", lineno)
                if kind == "DM":
                    del self.handles[tid]
                    del self.trace_id[h.id]
                    if naive is not None:
                        naive.delete(self.naive_ids.pop(tid))
                    self.delete_cost += q.last_cost
            if kind == "FM":
                c = q.last_cost
                if c > self.fm_cost_max:
                    self.fm_cost_max = c
                ratio = c / (q.finger_count + 1)
                if ratio > self.fm_cost_ratio_max:
                    self.fm_cost_ratio_max = ratio
        rec.cost = q.last_cost if kind != "TF" else 0
        self.counts[kind] += 1
        self.total_cost += rec.cost
        self.cum_cost.append(self.total_cost)
        self.cum_bound.append(self.sum_bound)
        if self.check and len(q) != len(naive):
            self._fail(f"queue holds {len(q)} elements, oracle {len(naive)}", lineno)
        if self.validate:
            errors = q.validate()
            if errors:
                self._fail("structure invalid: " + "; ".join(errors[:5]), lineno)
        return rec

    def _tid_of_naive(self, nid):
        # naive ids and queue handle ids are both assigned in insertion order
        return self.trace_id[nid]

    def run(self, ops):
        """Yield an OpRecord per executed operation."""
        for lineno, op in enumerate(ops, 1):
            rec = self.step(op, lineno)
            if rec is not None:
                yield rec

    def summary(self):
        deletes = self.counts["D"] + self.counts["DM"]
        out = {
            "summary": True,
            "ops": len(self.cum_cost),
            **{f"n_{k}": v for k, v in self.counts.items()},
            "live": len(self.queue),
            "fingers": self.queue.finger_count,
            "total_cost": self.total_cost,
            "delete_cost_mean": self.delete_cost / deletes if deletes else 0.0,
            "find_min_cost_max": self.fm_cost_max,
            "find_min_cost_per_epoch_max": self.fm_cost_ratio_max,
            "mismatches": 0,
        }
        if self.measure:
            c1, c2 = fit_cost(self.cum_cost, self.cum_bound)
            out.update(sum_bound=self.sum_bound, c1=round(c1, 3), c2=round(c2, 3))
        return out


def fit_cost(cum_cost, cum_bound):
    """Non-negative least squares of cost ~ c1 * bound + c2 * ops over trace prefixes."""
    n = len(cum_cost)
    if n == 0:
        return 0.0, 0.0
    a = np.column_stack([np.asarray(cum_bound, float), np.arange(1, n + 1, dtype=float)])
    coef, _ = nnls(a, np.asarray(cum_cost, float))
    return float(coef[0]), float(coef[1])


def run_trace(ops, oracle=False, validate=False, measure=None, max_fingers=DEFAULT_MAX_FINGERS):
    """Run a parsed trace; returns (records, summary)."""
    runner = TraceRunner(oracle, validate, measure, max_fingers)
    records = list(runner.run(ops))
    return records, runner.summary()


# ------------------------------------------------------------------ analysis


def _content_lines(text):
    for lineno, line in enumerate(text.split("\n"), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_sequence(text):
    """Access sequence: whitespace-separated element names, '#' comments."""
    return [tok for _, line in _content_lines(text) for tok in line.split()]


def parse_ranks(text):
    """Rank file: one ``element rank`` pair per line."""
    ranks = {}
    for lineno, line in _content_lines(text):
        toks = line.split()
        if len(toks) != 2:
            raise TraceError(f"expected 'element rank', got {line!r}", lineno)
        try:
            r = int(toks[1])
        except ValueError:
            raise TraceError(f"bad rank {toks[1]!r}", lineno) from None
        if toks[0] in ranks:
            raise TraceError(f"element {toks[0]!r} ranked twice", lineno)
        ranks[toks[0]] = r
    return ranks


def analyze_sequence(seq_text, finger, ranks_text):
    """Bound report for an access sequence given as text; see bounds.bound_report."""
    seq = parse_sequence(seq_text)
    ranks = parse_ranks(ranks_text)
    for x in [finger, *seq]:
        if x not in ranks:
            raise TraceError(f"element {x!r} has no rank")
    return bound_report(seq, finger, ranks)


# ------------------------------------------------------------ answer streams


def answer_stream(ops, engine="tree", max_fingers=DEFAULT_MAX_FINGERS):
    """Yield ``(op, key, id)`` for every FM and DM of the trace.

    ``engine`` is "tree" for TimeFingerQueue or "naive" for the linear-scan
    oracle.  Unlike TraceRunner this does nothing but execute and answer,
    which makes it the fast path for equivalence checks.  An FM or DM on an
    empty queue answers ``(op, None, None)``.
    """
    naive = engine == "naive"
    if not naive and engine != "tree":
        raise ValueError(f"unknown engine {engine!r}")
    q = NaivePQ() if naive else TimeFingerQueue(max_fingers)
    handles = {}
    trace_id = {}
    inserts = 0
    insert, delete, find_min = q.insert, q.delete, q.find_min
    pop_min = None if naive else q.pop_min
    for lineno, (kind, key, oid, _) in enumerate(ops, 1):
        if kind == "I":
            tid = inserts if oid is None else oid
            inserts += 1
            if tid in handles:
                raise TraceError(f"id {tid} is already live", lineno)
            h = insert(key)
            handles[tid] = h
            trace_id[h if naive else h.id] = tid
        elif kind == "D":
            h = handles.pop(oid, None)
            if h is None:
                raise TraceError(f"id {oid} is not live", lineno)
            delete(h)
        elif kind == "FM" or kind == "DM":
            if not handles:
                yield kind, None, None
                continue
            if naive:
                key, hid = find_min()
                if kind == "DM":
                    delete(hid)
            else:
                h = find_min() if kind == "FM" else pop_min()
                key, hid = h.key, h.id
            tid = trace_id[hid]
            if kind == "DM":
                del handles[tid]
            yield kind, key, tid
        elif kind == "TF":
            q.set_time_finger()


def stream_digest(stream):
    """(answer count, sha256 hex) of an answer stream."""
    lines = [f"{kind} {key} {tid}\n" for kind, key, tid in stream]
    return len(lines), hashlib.sha256("".join(lines).encode()).hexdigest()
