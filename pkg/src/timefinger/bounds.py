"""Distribution-sensitive bounds of an access sequence.

All costs are in log2 units.  For an access sequence x_1..x_m:

* working set:       sum lg(w(i) + 2), w(i) = distinct items accessed since
                     the previous access to x_i (for a first access, the
                     distinct items accessed so far)
* static finger:     sum lg(d(x_i, f) + 2), d = rank distance to the finger
* static optimality: sum lg(m / q(x_i) + 1), q = access count of x_i
* unified:           sum of the per-access minimum of the three terms
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence


class _Fenwick:
    __slots__ = ("tree",)

    def __init__(self, n):
        self.tree = [0] * (n + 1)

    def add(self, i, v):
        i += 1
        tree = self.tree
        while i < len(tree):
            tree[i] += v
            i += i & -i

    def prefix(self, i):
        """Sum of entries [0, i)."""
        s = 0
        tree = self.tree
        while i > 0:
            s += tree[i]
            i -= i & -i
        return s


def working_set_numbers(seq: Sequence[Hashable]) -> list[int]:
    """w(i) for every access, in O(m log m).

    A position is marked while it is the latest access of its item, so the
    marks between the previous access of x_i and i count distinct items.
    """
    marks = _Fenwick(len(seq))
    last = {}
    out = []
    for i, x in enumerate(seq):
        prev = last.get(x, -1)
        out.append(marks.prefix(i) - marks.prefix(prev + 1))
        if prev >= 0:
            marks.add(prev, -1)
        marks.add(i, 1)
        last[x] = i
    return out


def working_set_profile(seq):
    """(per-access w(i), sum of lg(w(i) + 2))."""
    ws = working_set_numbers(seq)
    return ws, math.fsum(math.log2(w + 2) for w in ws)


def _finger_terms(seq, finger, rank_of):
    try:
        base = rank_of[finger]
        return [math.log2(abs(rank_of[x] - base) + 2) for x in seq]
    except KeyError as e:
        raise KeyError(f"no rank for element {e.args[0]!r}") from None


def _optimality_terms(seq):
    m = len(seq)
    q = Counter(seq)
    return [math.log2(m / q[x] + 1) for x in seq]


def static_finger_cost(seq, finger, rank_of: Mapping[Hashable, int]) -> float:
    return math.fsum(_finger_terms(seq, finger, rank_of))


def static_optimality_cost(seq) -> float:
    return math.fsum(_optimality_terms(seq))


@dataclass
class BoundReport:
    """Per-access terms and totals of the four bounds, log2 units."""

    items: list
    finger: Hashable
    working_set: list[float] = field(default_factory=list)
    static_finger: list[float] = field(default_factory=list)
    static_optimality: list[float] = field(default_factory=list)
    unified: list[float] = field(default_factory=list)
    w: list[int] = field(default_factory=list)

    @property
    def m(self):
        return len(self.items)

    def totals(self):
        return {
            "working_set": math.fsum(self.working_set),
            "static_finger": math.fsum(self.static_finger),
            "static_optimality": math.fsum(self.static_optimality),
            "unified": math.fsum(self.unified),
        }

    def records(self):
        """One dict per access, then a summary dict."""
        for i, x in enumerate(self.items):
            yield {
                "i": i,
                "x": x,
                "w": self.w[i],
                "working_set": self.working_set[i],
                "static_finger": self.static_finger[i],
                "static_optimality": self.static_optimality[i],
                "unified": self.unified[i],
            }
        yield {"summary": True, "m": self.m, "finger": self.finger, **self.totals()}


def bound_report(seq, finger, rank_of) -> BoundReport:
    seq = list(seq)
    w = working_set_numbers(seq)
    ws = [math.log2(v + 2) for v in w]
    sf = _finger_terms(seq, finger, rank_of)
    so = _optimality_terms(seq)
    uni = [min(a, b, c) for a, b, c in zip(sf, so, ws)]
    return BoundReport(seq, finger, ws, sf, so, uni, w)


def unified_cost(seq, finger, rank_of) -> float:
    return math.fsum(bound_report(seq, finger, rank_of).unified)


def interleave(y, z, pattern):
    """Merge ``y`` and ``z``; pattern[i] falsy takes from y, truthy from z."""
    pattern = list(pattern)
    if len(pattern) != len(y) + len(z):
        raise ValueError(f"pattern has {len(pattern)} slots for {len(y) + len(z)} accesses")
    nz = sum(1 for p in pattern if p)
    if nz != len(z):
        raise ValueError(f"pattern takes {nz} accesses from z, which has {len(z)}")
    iy = iter(y)
    iz = iter(z)
    return [next(iz) if p else next(iy) for p in pattern]


def interleaving_ratio(y, z, pattern):
    """(ws(X), ws(Y) + ws(Z), ratio) for X the interleaving of y and z."""
    x = interleave(y, z, pattern)
    wx = working_set_profile(x)[1]
    wyz = working_set_profile(y)[1] + working_set_profile(z)[1]
    ratio = wx / wyz if wyz > 0 else 1.0
    return wx, wyz, ratio


def interleaved_positions(pattern):
    """Positions in X of the y-accesses and of the z-accesses."""
    ys, zs = [], []
    for i, p in enumerate(pattern):
        (zs if p else ys).append(i)
    return ys, zs
