"""Reference implementations the tests check the queues against.

Nothing here shares code with the tree structures: the priority queue is a
flat list scanned on every query, and the working-set measures are
counted directly from timestamps.
"""

from __future__ import annotations

import bisect
import math

from .errors import EmptyQueueError, StaleHandleError


class NaivePQ:
    """Linear-scan priority queue with the same tie rule as the real queues.

    Records are ``(key, ts, hid, epoch)`` tuples; tuple order is exactly
    "smaller key, then older".  ``scanned`` counts records inspected, the
    Theta(n) cost the distribution-sensitive queues are compared against.
    """

    def __init__(self):
        self._recs = []
        self._pos = {}
        self._ts = 0
        self._ids = 0
        self.epoch = 0
        self.finger_times = []
        self.scanned = 0

    def __len__(self):
        return len(self._recs)

    def set_time_finger(self):
        self.finger_times.append(self._ts + 1)
        self.epoch += 1

    def insert(self, key):
        self._ts += 1
        hid = self._ids
        self._ids += 1
        self._pos[hid] = len(self._recs)
        self._recs.append((key, self._ts, hid, self.epoch))
        return hid

    def record(self, hid):
        try:
            return self._recs[self._pos[hid]]
        except KeyError:
            raise StaleHandleError(hid) from None

    def find_min(self):
        """``(key, hid)`` of the minimum."""
        if not self._recs:
            raise EmptyQueueError("find_min on an empty queue")
        self.scanned += len(self._recs)
        rec = min(self._recs)
        return rec[0], rec[2]

    def delete_min(self):
        key, hid = self.find_min()
        self.delete(hid)
        return key

    def delete(self, hid):
        i = self._pos.pop(hid, None)
        if i is None:
            raise StaleHandleError(hid)
        last = self._recs.pop()
        if last[2] != hid:
            self._recs[i] = last
            self._pos[last[2]] = i

    def live_ts(self):
        return [r[1] for r in self._recs]

    def measure_w(self, hid):
        """Live elements inserted after ``hid``."""
        ts = self.record(hid)[1]
        return sum(1 for r in self._recs if r[1] > ts)

    def measure_q(self, hid):
        """Live elements inserted before ``hid``."""
        ts = self.record(hid)[1]
        return sum(1 for r in self._recs if r[1] < ts)

    def measure_w_finger(self, hid, finger_times=None):
        """Minimum over all time fingers of the live elements between ``hid`` and the finger.

        The fingers at time 0 and at infinity are always included, so the
        result is never more than min(w, q).  A finger time is the stamp of
        the first insertion after it.
        """
        if finger_times is None:
            finger_times = self.finger_times
        ts = self.record(hid)[1]
        return min(window_count(self.live_ts(), ts, f) for f in [0, math.inf, *finger_times])

    def measure(self, hid):
        """``(w, q, min over fingers of the window count)`` from one sort of the live stamps."""
        ts = self.record(hid)[1]
        stamps = sorted(self.live_ts())
        at = bisect.bisect_left(stamps, ts)
        w = len(stamps) - at - 1
        best = min(w, at)
        for f in self.finger_times:
            j = bisect.bisect_left(stamps, f)
            best = min(best, j - at - 1 if f > ts else at - j)
        return w, at, best


def window_count(live_ts, ts, finger):
    """Live stamps strictly between ``ts`` and the finger, other than ``ts`` itself."""
    if finger > ts:
        return sum(1 for t in live_ts if ts < t < finger)
    return sum(1 for t in live_ts if finger <= t < ts)


def chronology_violations(stamps):
    """Indices i where stamps[i] >= stamps[i+1]."""
    return [i for i in range(len(stamps) - 1) if stamps[i] >= stamps[i + 1]]


def brute_working_set(seq):
    """Per-access working set by rescanning the sequence each time.

    For a repeat access: distinct items strictly between it and the
    previous access to the same item.  For a first access: distinct items
    seen so far.
    """
    out = []
    for i, x in enumerate(seq):
        j = i - 1
        while j >= 0 and seq[j] != x:
            j -= 1
        out.append(len(set(seq[j + 1:i])))
    return out
