"""Priority queue with the working-set property.

The queue is a row of (2,3) binomial trees.  Trees are ordered by age,
ranks shrink toward the newest end, no rank occurs more than twice, and
each root keeps a prefix-minimum link so the overall minimum is read in
O(1).  Deleting an element whose tree has rank r costs O(r).
"""

from __future__ import annotations

import itertools
from functools import partial
from typing import Any, NamedTuple

from . import core_tree
from .core_tree import Node, chronological_order, join, split
from .errors import EmptyQueueError, StaleHandleError, WrongQueueError
from .meter import CostMeter

_owner_ids = itertools.count(1)


class Handle(NamedTuple):
    """Reference to an inserted element; dead once the element is removed."""

    id: int
    key: Any
    owner: int


# skips the keyword-handling constructor NamedTuple generates
_handle = partial(tuple.__new__, Handle)


class Clock:
    """Global insertion counter; ``next_ts`` is the stamp the next insert gets."""

    __slots__ = ("next_ts",)

    def __init__(self, start=1):
        self.next_ts = start

    def __iter__(self):
        return self

    def __next__(self):
        t = self.next_ts
        self.next_ts = t + 1
        return t


class TreeRow:
    """One row of roots, stored from the large-rank end to the small-rank end.

    ``trees[0]`` is the inner end (largest ranks) and ``trees[-1]`` the outer
    end (smallest ranks).  For the right row of a queue the outer end holds
    the newest elements (``newest_outer``); for the mirrored left row it
    holds the oldest.  ``pm[j]`` is the minimum root among ``trees[0..j]``,
    so ``pm[-1]`` is the minimum of the whole row.
    """

    __slots__ = ("trees", "pm", "newest_outer", "meter")

    def __init__(self, meter, newest_outer=True):
        self.trees = []
        self.pm = []
        self.newest_outer = newest_outer
        self.meter = meter

    def __len__(self):
        return len(self.trees)

    def chrono(self, seq):
        """Row order -> oldest-first order (and back; the map is an involution)."""
        return seq if self.newest_outer else seq[::-1]

    def maxrank(self):
        return self.trees[0].rank if self.trees else -1

    def min_root(self):
        return self.pm[-1] if self.pm else None

    def _refresh_pm(self, i):
        trees, pm = self.trees, self.pm
        n = len(trees) - i
        del pm[i:]
        meter = self.meter
        meter.comparisons += n
        meter.links += n
        if not n:
            return
        if pm:
            best = pm[-1]
        else:
            best = trees[i]
            pm.append(best)
            i += 1
        for j in range(i, len(trees)):
            t = trees[j]
            if t.key < best.key or (t.key == best.key and t.ts < best.ts):
                best = t
            pm.append(best)

    def _join_at(self, a, n):
        trees = self.trees
        trees[a:a + n] = [join(self.chrono(trees[a:a + n]), self.meter)]

    def push_outer(self, t):
        """Add a rank-0 tree at the outer end, joining any rank that reaches three."""
        trees = self.trees
        trees.append(t)
        first = len(trees) - 1
        if first < 2 or trees[first - 2].rank != 0:
            # no carry: extend the prefix-minimum chain by one
            pm = self.pm
            best = pm[-1] if pm else None
            if best is not None:
                self.meter.comparisons += 1
                if not (t.key < best.key or (t.key == best.key and t.ts < best.ts)):
                    t = best
            pm.append(t)
            self.meter.links += 1
            return
        while first >= 2 and trees[first - 2].rank == trees[first].rank:
            first -= 2
            self._join_at(first, 3)
        self._refresh_pm(first)

    def push_inner(self, t):
        self.trees.insert(0, t)
        self.meter.links += 1
        self._refresh_pm(0)

    def index_of(self, root):
        """Position of ``root``; O(rank) because scanning starts at the small end."""
        trees = self.trees
        for j in range(len(trees) - 1, -1, -1):
            if trees[j] is root:
                self.meter.steps += len(trees) - j
                return j
        raise KeyError(root)

    def _settle(self, j):
        """Join innermost triples of equal rank around ``j``, carrying inward."""
        trees = self.trees
        while 0 <= j < len(trees):
            s = trees[j].rank
            a = j
            while a > 0 and trees[a - 1].rank == s:
                a -= 1
            b = j
            while b + 1 < len(trees) and trees[b + 1].rank == s:
                b += 1
            if b - a < 2:
                return
            j = a
            while b - a >= 2:
                self._join_at(a, 3)
                b -= 2
                a += 1

    def _repair(self, i, old_rank, rebuilt):
        """Put ``rebuilt`` where a rank-``old_rank`` tree was and restore the row."""
        trees = self.trees
        if rebuilt is None:
            del trees[i]
            return
        trees[i] = rebuilt
        if rebuilt.rank == old_rank:
            return
        if i + 1 < len(trees) and trees[i + 1].rank == old_rank:
            # the outer neighbour would now outrank us: split it and take its
            # adjacent piece back up to old_rank
            pieces = self.chrono(split(trees[i + 1], self.meter))
            merged = join(self.chrono([rebuilt, pieces[0]]), self.meter)
            trees[i:i + 2] = [merged] + pieces[1:]
            if i + 1 < len(trees) and trees[i + 1].rank == old_rank - 1:
                self._settle(i + 1)
        else:
            self._settle(i)

    def _fill_gap(self, i):
        """Split the tree at ``i`` toward the outer end to close a rank gap.

        The outermost piece is split until its rank is at most one above
        the outer neighbour (or 0 if there is none).  When a split yields
        three pieces the two inner ones are joined back one rank up: this
        keeps two roots per rank and leaves single trees behind on every
        level, so the next insertions do not cascade straight back up.
        """
        trees = self.trees
        if i >= len(trees):
            return
        nb = trees[i + 1].rank if i + 1 < len(trees) else -1
        meter = self.meter
        while trees[i].rank > nb + 1:
            pieces = self.chrono(split(trees[i], meter))
            if len(pieces) == 3:
                pieces[:2] = [join(self.chrono(pieces[:2]), meter)]
            trees[i:i + 1] = pieces
            i += 1

    def remove(self, x, root, path=None, i=None):
        """Delete node ``x`` whose tree root ``root`` sits at index ``i`` of this row."""
        if i is None:
            i = self.index_of(root)
        old_rank = root.rank
        rebuilt = core_tree.extract(x, self.meter, path)
        trees = self.trees
        if rebuilt is not None and rebuilt.rank == old_rank:
            trees[i] = rebuilt
        else:
            self._repair(i, old_rank, rebuilt)
        self._fill_gap(i)
        self._refresh_pm(min(i, len(trees)))

    def shed_inner(self):
        """Split the largest-rank trees and detach the innermost piece.

        Used when the other side of a double-ended queue has fallen two
        ranks behind.  The piece returned is the one whose elements are
        adjacent in time to the other side.
        """
        trees = self.trees
        top = trees[0].rank
        cnt = 2 if len(trees) > 1 and trees[1].rank == top else 1
        pieces = []
        for t in trees[:cnt]:
            pieces.extend(self.chrono(split(t, self.meter)))
        moved = pieces[0]
        trees[:cnt] = pieces[1:]
        self._settle(0)
        self._refresh_pm(0)
        return moved

    def nodes_chrono(self):
        """All nodes of the row, oldest first."""
        out = []
        for t in self.chrono(self.trees):
            out.extend(chronological_order(t))
        return out

    def validate(self, where="row"):
        errors = []
        trees = self.trees
        for j, t in enumerate(trees):
            errors.extend(core_tree.validate(t, f"{where}[{j}]"))
        for j in range(1, len(trees)):
            if trees[j].rank > trees[j - 1].rank:
                errors.append(f"{where}: rank increases toward the outer end at {j}")
            if j >= 2 and trees[j].rank == trees[j - 2].rank:
                errors.append(f"{where}: rank {trees[j].rank} occurs three times")
        if len(self.pm) != len(trees):
            errors.append(f"{where}: {len(self.pm)} prefix-minimum links for {len(trees)} roots")
        else:
            best = None
            for j, t in enumerate(trees):
                if best is None or core_tree.precedes(t, best):
                    best = t
                if self.pm[j] is not best:
                    errors.append(f"{where}: wrong prefix-minimum link at {j}")
        return errors


def chronology_errors(nodes, where):
    for a, b in zip(nodes, nodes[1:]):
        if not a.ts < b.ts:
            return [f"{where}: global chronology broken at ts {a.ts} -> {b.ts}"]
    return []


class _QueueBase:
    """Handle bookkeeping and the public operations shared by all queues.

    Subclasses provide ``_push(node)``, ``_min()`` (None when empty) and
    ``_remove(node)``.
    """

    def __init__(self, meter=None, clock=None):
        self.meter = CostMeter() if meter is None else meter
        self._clock = Clock() if clock is None else clock
        self._owner = next(_owner_ids)
        self._nodes = {}
        self._ids = itertools.count()
        # epoch tag given to new nodes
        self.insert_epoch = 0
        m = self.meter
        self._op = (m.comparisons, m.splits, m.joins, m.links, m.steps)

    def __len__(self):
        return len(self._nodes)

    def __bool__(self):
        return bool(self._nodes)

    def _resolve(self, h):
        if h.owner != self._owner:
            raise WrongQueueError(f"handle {h.id} belongs to another queue")
        node = self._nodes.get(h.id)
        if node is None:
            raise StaleHandleError(h.id)
        return node

    def insert(self, key):
        m = self.meter
        self._op = (m.comparisons, m.splits, m.joins, m.links, m.steps)
        clock = self._clock
        ts = clock.next_ts
        clock.next_ts = ts + 1
        node = Node(key, ts, next(self._ids), self.insert_epoch)
        self._nodes[node.hid] = node
        self._push(node)
        return _handle((node.hid, key, self._owner))

    def find_min(self):
        m = self.meter
        self._op = (m.comparisons, m.splits, m.joins, m.links, m.steps)
        node = self._min()
        if node is None:
            raise EmptyQueueError("find_min on an empty queue")
        return _handle((node.hid, node.key, self._owner))

    def pop_min(self):
        """Remove the minimum and return its (now dead) handle."""
        m = self.meter
        self._op = (m.comparisons, m.splits, m.joins, m.links, m.steps)
        node = self._min()
        if node is None:
            raise EmptyQueueError("delete_min on an empty queue")
        del self._nodes[node.hid]
        self._remove(node)
        return _handle((node.hid, node.key, self._owner))

    def delete_min(self):
        return self.pop_min().key

    def delete(self, h):
        node = self._resolve(h)
        m = self.meter
        self._op = (m.comparisons, m.splits, m.joins, m.links, m.steps)
        del self._nodes[node.hid]
        self._remove(node)

    def cost_meter(self):
        """Per-category counts of the most recent public operation."""
        return self.meter.since(self._op)

    @property
    def last_cost(self):
        snap = self._op
        m = self.meter
        return (m.comparisons - snap[0] + m.splits - snap[1] + m.joins - snap[2]
                + m.links - snap[3] + m.steps - snap[4])

    def _validate_handles(self, nodes, where):
        errors = []
        if len(nodes) != len(self._nodes):
            errors.append(f"{where}: {len(nodes)} nodes in trees, {len(self._nodes)} live handles")
        for x in nodes:
            if self._nodes.get(x.hid) is not x:
                errors.append(f"{where}: node ts {x.ts} not reachable through its handle")
                break
        return errors


class WorkingSetQueue(_QueueBase):
    """Single-row queue: O(1) insert and find_min, delete in O(lg(w_x + 2)) amortized."""

    def __init__(self, meter=None, clock=None):
        super().__init__(meter, clock)
        self.row = TreeRow(self.meter, newest_outer=True)

    def _push(self, node):
        self.row.push_outer(node)

    def _min(self):
        return self.row.min_root()

    def _remove(self, node):
        path = core_tree.path_to_root(node, self.meter)
        self.row.remove(node, path[-1], path)

    def rank_profile(self):
        return [t.rank for t in self.row.trees]

    def nodes_chrono(self):
        return self.row.nodes_chrono()

    def validate(self):
        errors = self.row.validate("row")
        nodes = self.row.nodes_chrono()
        errors.extend(chronology_errors(nodes, "queue"))
        errors.extend(self._validate_handles(nodes, "queue"))
        return errors
