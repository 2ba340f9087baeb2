"""Double-ended queue: working-set and queueish bounds at once.

Two rows of trees sit back to back.  The right row takes insertions and
has its small ranks at the newest end; the left row mirrors it, with
small ranks at the oldest end.  Keeping the largest ranks of the two rows
within one of each other bounds the rank of any element's tree by
O(lg(min(w_x, q_x) + 2)).
"""

from __future__ import annotations

from . import core_tree
from .ws_queue import TreeRow, _QueueBase, chronology_errors


class DoubleEndedQueue(_QueueBase):
    def __init__(self, meter=None, clock=None, epoch=0):
        super().__init__(meter, clock)
        self.epoch = self.insert_epoch = epoch
        self.left = TreeRow(self.meter, newest_outer=False)
        self.right = TreeRow(self.meter, newest_outer=True)
        self.moves = 0

    def _push(self, node):
        self.right.push_outer(node)
        lt = self.left.trees
        if self.right.trees[0].rank - (lt[0].rank if lt else -1) > 1:
            self.rebalance()

    def _min(self):
        pa, pb = self.left.pm, self.right.pm
        if not pa:
            return pb[-1] if pb else None
        a = pa[-1]
        if not pb:
            return a
        b = pb[-1]
        self.meter.comparisons += 1
        return b if b.key < a.key or (b.key == a.key and b.ts < a.ts) else a

    def _locate(self, root):
        """(row, index) of ``root``, scanning both rows from their small ends."""
        lt, rt = self.left.trees, self.right.trees
        i, j = len(lt) - 1, len(rt) - 1
        steps = 1
        while i >= 0 or j >= 0:
            if j >= 0:
                if rt[j] is root:
                    self.meter.steps += steps
                    return self.right, j
                j -= 1
            if i >= 0:
                if lt[i] is root:
                    self.meter.steps += steps
                    return self.left, i
                i -= 1
            steps += 1
        raise KeyError(root)

    def _remove(self, node):
        path = core_tree.path_to_root(node, self.meter)
        root = path[-1]
        row, i = self._locate(root)
        row.remove(node, root, path, i)
        lt, rt = self.left.trees, self.right.trees
        if not -2 < (lt[0].rank if lt else -1) - (rt[0].rank if rt else -1) < 2:
            self.rebalance()

    def rebalance(self):
        """Move one tree across if the largest ranks differ by two or more.

        An empty row counts as having largest rank -1.
        """
        lt, rt = self.left.trees, self.right.trees
        lm = lt[0].rank if lt else -1
        rm = rt[0].rank if rt else -1
        if rm - lm > 1:
            self.left.push_inner(self.right.shed_inner())
        elif lm - rm > 1:
            self.right.push_inner(self.left.shed_inner())
        else:
            return
        self.moves += 1

    def maxranks(self):
        return self.left.maxrank(), self.right.maxrank()

    def rank_profile(self):
        """Ranks of all roots left to right across both rows."""
        return [t.rank for t in reversed(self.left.trees)], [t.rank for t in self.right.trees]

    def nodes_chrono(self):
        return self.left.nodes_chrono() + self.right.nodes_chrono()

    def structure_errors(self, where="depq"):
        """(violations, nodes oldest first) without the handle-table check."""
        errors = self.left.validate(f"{where}.left") + self.right.validate(f"{where}.right")
        lm, rm = self.maxranks()
        if abs(lm - rm) > 1:
            errors.append(f"{where}: largest ranks {lm} and {rm} differ by more than one")
        nodes = self.nodes_chrono()
        errors.extend(chronology_errors(nodes, where))
        for x in nodes:
            if x.epoch != self.epoch:
                errors.append(f"{where}: node ts {x.ts} tagged epoch {x.epoch}")
                break
        return errors, nodes

    def validate(self):
        errors, nodes = self.structure_errors()
        return errors + self._validate_handles(nodes, "depq")
