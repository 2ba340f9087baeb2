import itertools
import random

import pytest

from timefinger.core_tree import Node, join

# filled by test_acceptance, printed once at the end of the session
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


class TreeFactory:
    """Builds valid random trees from fresh nodes with increasing stamps."""

    def __init__(self, seed=0, keys=100):
        self.rng = random.Random(seed)
        self.keys = keys
        self.ts = itertools.count(1)

    def node(self, key=None):
        if key is None:
            key = self.rng.randint(0, self.keys)
        return Node(key, next(self.ts))

    def tree(self, rank):
        if rank == 0:
            return self.node()
        parts = [self.tree(rank - 1) for _ in range(self.rng.choice((2, 3)))]
        return join(parts)

    def trees(self, rank, n):
        return [self.tree(rank) for _ in range(n)]


@pytest.fixture
def factory():
    return TreeFactory()


def stamps(nodes):
    return [x.ts for x in nodes]
