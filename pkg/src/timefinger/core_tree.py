"""Heap-ordered (2,3) binomial trees with chronological reverse bits.

A tree of rank r has a root whose children are (2,3) binomial trees of
ranks 0..r-1, each rank occurring once or twice, with ranks non-decreasing
from the rightmost child to the leftmost.  Every element carries its
insertion timestamp, and the shape of a tree together with the per-node
reverse bits encodes the insertion order of all of its elements:

    order(t) = [t]
    for each child c of t, rightmost first:
        order(t) = order(c) + order(t)   if c.rev
        order(t) = order(t) + order(c)   otherwise

``split`` and ``join`` are the only primitives that restructure trees and
both preserve this order exactly; every other operation in the package is
composed from them.

Keys are compared on ``(key, ts)`` so that equal keys resolve toward the
older element.  This makes the minimum unique and lets the queues agree
exactly with a naive reference implementation.
"""

from __future__ import annotations

from collections import deque

from .errors import ContractError
from .meter import NULL_METER


class Node:
    """One element, and the root of the subtree below it.

    ``kids`` holds the children from the RIGHTMOST to the LEFTMOST, so the
    leftmost (largest-rank) children that split and join touch sit at the
    end of the list.  ``rank`` is stored, never recomputed.
    """

    __slots__ = ("key", "ts", "rank", "kids", "parent", "rev", "epoch", "hid")

    def __init__(self, key, ts, hid=-1, epoch=0):
        self.key = key
        self.ts = ts
        self.rank = 0
        self.kids = []
        self.parent = None
        self.rev = False
        self.epoch = epoch
        self.hid = hid

    @property
    def children(self):
        """Children leftmost-to-rightmost."""
        return self.kids[::-1]

    def __repr__(self):
        return f"Node(key={self.key!r}, ts={self.ts}, rank={self.rank})"


def precedes(a, b):
    """Strict heap order: smaller key first, older element on ties."""
    return a.key < b.key or (a.key == b.key and a.ts < b.ts)


def size(t):
    n = 0
    stack = [t]
    while stack:
        x = stack.pop()
        n += 1
        stack.extend(x.kids)
    return n


def chronological_order(t):
    """All nodes of the tree rooted at ``t`` in insertion order."""
    out = deque((t,))
    for c in t.kids:
        sub = chronological_order(c)
        if c.rev:
            out.extendleft(reversed(sub))
        else:
            out.extend(sub)
    return list(out)


def _check_root(t, rank=None):
    if t.parent is not None:
        raise ContractError("expected a root, got a node with a parent")
    if rank is not None and t.rank != rank:
        raise ContractError(f"expected rank {rank}, got {t.rank}")


def join(trees, meter=NULL_METER):
    """Link 2 or 3 equal-rank trees, given oldest first, into one tree.

    The winner is the root that precedes the others; losers become its
    leftmost children.  The loser farthest (chronologically) from the
    winner is attached last, i.e. ends up leftmost, and a loser's reverse
    bit is set exactly when it is older than the winner.  Under the order
    rule in the module docstring this reproduces the concatenation of the
    inputs' orders.
    """
    n = len(trees)
    if n == 2:
        a, b = trees
        r = a.rank
        if a.parent is not None or b.parent is not None or b.rank != r:
            _check_root(a, r)
            _check_root(b, r)
        meter.comparisons += 1
        meter.joins += 1
        meter.links += 1
        if b.key < a.key or (b.key == a.key and b.ts < a.ts):
            a.parent = b
            a.rev = True
            b.kids.append(a)
            b.rank = r + 1
            return b
        b.parent = a
        b.rev = False
        a.kids.append(b)
        a.rank = r + 1
        return a
    if n != 3:
        raise ContractError(f"join takes 2 or 3 trees, got {n}")
    a, b, c = trees
    r = a.rank
    if (a.parent is not None or b.parent is not None or c.parent is not None
            or b.rank != r or c.rank != r):
        for t in trees:
            _check_root(t, r)
    meter.comparisons += 2
    meter.joins += 1
    meter.links += 2
    # losers in order of increasing distance from the winner; older ones reversed
    if b.key < a.key or (b.key == a.key and b.ts < a.ts):
        if c.key < b.key or (c.key == b.key and c.ts < b.ts):
            w, near, far, near_rev = c, b, a, True
        else:
            w, near, far, near_rev = b, a, c, True
    elif c.key < a.key or (c.key == a.key and c.ts < a.ts):
        w, near, far, near_rev = c, b, a, True
    else:
        w, near, far, near_rev = a, b, c, False
    near.parent = far.parent = w
    near.rev = near_rev
    far.rev = far is a
    kids = w.kids
    kids.append(near)
    kids.append(far)
    w.rank = r + 1
    return w


def split(t, meter=NULL_METER):
    """Detach the rank-(r-1) children of a rank-r root.

    Returns the 2 or 3 resulting rank-(r-1) trees oldest first; ``t``
    itself is one of them.  No key comparisons are made.
    """
    r = t.rank
    if r < 1:
        raise ContractError("cannot split a rank-0 tree")
    kids = t.kids
    top = kids.pop()
    if top.rank != r - 1:
        raise ContractError("leftmost child does not have rank r-1")
    out = [t]
    if kids and kids[-1].rank == r - 1:
        second = kids.pop()
        if second.rev:
            out.insert(0, second)
        else:
            out.append(second)
        second.rev = False
        second.parent = None
        meter.links += 1
    if top.rev:
        out.insert(0, top)
    else:
        out.append(top)
    top.rev = False
    top.parent = None
    t.rank = r - 1
    meter.splits += 1
    meter.links += 1
    return out


def join_run(trees, meter=NULL_METER):
    """Join 1-4 consecutive equal-rank trees into 1 or 2 trees one rank up.

    A single tree is returned unchanged; four are joined as two pairs.
    """
    n = len(trees)
    if n == 1:
        return [trees[0]]
    if n == 4:
        return [join(trees[:2], meter), join(trees[2:], meter)]
    return [join(trees, meter)]


def join_mixed(a, b, a_first=True, meter=NULL_METER):
    """Combine a rank-k tree ``a`` with a rank-(k-1) tree ``b``.

    ``a_first`` says whether ``a``'s elements are older than ``b``'s.
    The result has rank k or k+1.
    """
    _check_root(a)
    _check_root(b)
    if a.rank != b.rank + 1:
        raise ContractError(f"join_mixed needs ranks k and k-1, got {a.rank} and {b.rank}")
    pieces = split(a, meter)
    seq = pieces + [b] if a_first else [b] + pieces
    run = join_run(seq, meter)
    return run[0] if len(run) == 1 else join(run, meter)


def _place(seq, c):
    # c's block goes before everything gathered so far iff its reverse bit is set
    if c.rev:
        seq.insert(0, c)
    else:
        seq.append(c)
    c.rev = False
    c.parent = None


def detach_root_rebuild(t, meter=NULL_METER):
    """Remove the root of ``t`` and rebuild the rest into one tree.

    Children are consumed from the rightmost (smallest rank) to the
    leftmost.  After all children of rank <= j are absorbed the partial
    tree has rank j or j+1, so the result has rank r-1 or r, or is None
    when ``t`` was a single node.  Returns ``(t, rebuilt)``.
    """
    kids = t.kids
    t.kids = []
    t.rank = 0
    n = len(kids)
    meter.links += n
    cur = None
    i = 0
    while i < n:
        c1 = kids[i]
        s = c1.rank
        c2 = kids[i + 1] if i + 1 < n and kids[i + 1].rank == s else None
        i += 2 if c2 is not None else 1
        if cur is None:
            seq = [c1]
            c1.rev = False
            c1.parent = None
            if c2 is not None:
                _place(seq, c2)
                cur = join(seq, meter)
            else:
                cur = c1
        elif cur.rank == s:
            seq = [cur]
            _place(seq, c1)
            if c2 is not None:
                _place(seq, c2)
            cur = join(seq, meter)
        else:
            # cur has rank s-1: bring c1 down to cur's rank first
            before = c1.rev
            c1.rev = False
            c1.parent = None
            pieces = split(c1, meter)
            seq = join_run(pieces + [cur] if before else [cur] + pieces, meter)
            if c2 is not None:
                _place(seq, c2)
            cur = seq[0] if len(seq) == 1 else join(seq, meter)
        meter.steps += 1
    return t, cur


def path_to_root(x, meter=NULL_METER):
    """[x, parent(x), ..., root] via parent links."""
    path = [x]
    p = x.parent
    while p is not None:
        path.append(p)
        p = p.parent
    meter.steps += len(path)
    return path


def _combine(pieces, k, mid, meter):
    """Reassemble one level on the way back up after a deletion.

    ``pieces`` are the rank-s trees split off on the way down (oldest
    first) and ``pieces[k]`` is the one that held the deleted node; ``mid``
    replaces it and has rank s or s-1, or is None.  Returns one tree of
    rank s+1 or s.
    """
    if mid is None:
        del pieces[k]
    elif mid.rank == pieces[k - 1 if k else 1].rank:
        pieces[k] = mid
    elif k:
        # mid is a rank short: split the older neighbour down to its rank
        pieces[k - 1:k + 1] = join_run(split(pieces[k - 1], meter) + [mid], meter)
    else:
        pieces[0:2] = join_run([mid] + split(pieces[1], meter), meter)
    return pieces[0] if len(pieces) == 1 else join(pieces, meter)


def extract(x, meter=NULL_METER, path=None):
    """Delete node ``x`` from its tree.

    The tree is split downward from the root, one level at a time, until
    ``x`` is the root of the current piece; the pieces not containing
    ``x`` are remembered per level.  ``x`` is then removed like a root and
    the levels are reassembled bottom-up.  Returns the rebuilt tree (rank
    r or r-1, None if ``x`` was alone).
    """
    if path is None:
        path = path_to_root(x, meter)
    d = len(path) - 1
    cur = path[d]
    frames = []
    while cur is not x:
        pieces = split(cur, meter)
        nxt = path[d - 1]
        if nxt.parent is None:
            # the path child was one of the detached top children
            cur = nxt
            d -= 1
        frames.append((pieces, pieces.index(cur)))
    _, rebuilt = detach_root_rebuild(x, meter)
    while frames:
        pieces, k = frames.pop()
        rebuilt = _combine(pieces, k, rebuilt, meter)
    return rebuilt


def validate(t, where="tree"):
    """List every invariant violation in the tree rooted at ``t``."""
    errors = []
    if t.parent is not None:
        errors.append(f"{where}: root has a parent")
    if t.rev:
        errors.append(f"{where}: root has its reverse bit set")
    count = _validate_node(t, errors, where)
    r = t.rank
    if not (2 ** r <= count <= 3 ** r):
        errors.append(f"{where}: rank {r} tree has {count} nodes")
    order = chronological_order(t)
    if len(order) != count:
        errors.append(f"{where}: chronological order lost nodes")
    for a, b in zip(order, order[1:]):
        if not a.ts < b.ts:
            errors.append(f"{where}: chronology broken at ts {a.ts} -> {b.ts}")
            break
    return errors


def _validate_node(t, errors, where):
    count = 1
    expect = 0
    seen = 0
    for c in t.kids:
        if c.parent is not t:
            errors.append(f"{where}: bad parent link under ts {t.ts}")
        if precedes(c, t):
            errors.append(f"{where}: heap order violated at ts {c.ts}")
        if c.rank == expect:
            seen += 1
            if seen > 2:
                errors.append(f"{where}: rank {c.rank} occurs 3 times under ts {t.ts}")
        elif c.rank == expect + 1 and seen >= 1:
            expect += 1
            seen = 1
        else:
            errors.append(f"{where}: child ranks out of sequence under ts {t.ts}")
        count += _validate_node(c, errors, where)
    if t.kids and expect != t.rank - 1 or not t.kids and t.rank != 0:
        errors.append(f"{where}: node ts {t.ts} has rank {t.rank} but children up to {expect}")
    return count
