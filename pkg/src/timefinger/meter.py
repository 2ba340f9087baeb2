"""Primitive-operation counters shared by the queue structures."""

FIELDS = ("comparisons", "splits", "joins", "links", "steps")


class CostMeter:
    """Counts the primitive work done by the queues.

    ``comparisons`` are key comparisons, ``splits``/``joins`` the tree
    primitives, ``links`` pointer-field writes (child attach/detach,
    prefix-minimum updates) and ``steps`` pointer traversals (parent walks,
    root-row scans).  The cost of an operation is the sum of all five.
    """

    __slots__ = FIELDS

    def __init__(self):
        self.reset()

    def reset(self):
        self.comparisons = 0
        self.splits = 0
        self.joins = 0
        self.links = 0
        self.steps = 0

    def snapshot(self):
        return (self.comparisons, self.splits, self.joins, self.links, self.steps)

    def total(self):
        return self.comparisons + self.splits + self.joins + self.links + self.steps

    def since(self, snap):
        """Per-field counts accumulated after ``snap`` was taken."""
        return {f: v - s for f, v, s in zip(FIELDS, self.snapshot(), snap)}

    def as_dict(self):
        return dict(zip(FIELDS, self.snapshot()))

    def __repr__(self):
        inner = ", ".join(f"{f}={getattr(self, f)}" for f in FIELDS)
        return f"CostMeter({inner})"


class _NullMeter(CostMeter):
    """A meter nobody reads; lets the primitives skip None checks."""

    __slots__ = ()


NULL_METER = _NullMeter()
