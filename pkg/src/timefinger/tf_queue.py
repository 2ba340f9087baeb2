"""Priority queue with multiple time fingers.

Each call to ``set_time_finger`` closes the current double-ended queue
(its elements stay and can still be deleted) and opens a fresh one for
later insertions.  An element is deleted inside the queue of its own
epoch, so its cost depends only on the live elements between it and the
nearest finger on either side.
"""

from __future__ import annotations

from .depq import DoubleEndedQueue
from .errors import ConfigurationError
from .ws_queue import _QueueBase, chronology_errors

DEFAULT_MAX_FINGERS = 8


class TimeFingerQueue(_QueueBase):
    """find_min costs one probe per epoch, so keep ``max_fingers`` small."""

    def __init__(self, max_fingers=DEFAULT_MAX_FINGERS, meter=None):
        super().__init__(meter)
        if max_fingers < 0:
            raise ConfigurationError("max_fingers must be non-negative")
        self.max_fingers = max_fingers
        self.epochs = [DoubleEndedQueue(self.meter, self._clock, 0)]
        # timestamp of the first insertion after each finger
        self.finger_times = []
        # inserts go straight to the live epoch
        self._push = self.epochs[0]._push

    @property
    def finger_count(self):
        return len(self.finger_times)

    @property
    def live(self):
        return self.epochs[-1]

    def set_time_finger(self):
        if len(self.finger_times) >= self.max_fingers:
            raise ConfigurationError(f"at most {self.max_fingers} time fingers")
        m = self.meter
        self._op = (m.comparisons, m.splits, m.joins, m.links, m.steps)
        self.finger_times.append(self._clock.next_ts)
        live = DoubleEndedQueue(self.meter, self._clock, len(self.epochs))
        self.epochs.append(live)
        self.insert_epoch = live.epoch
        self._push = live._push

    def _min(self):
        m = self.meter
        epochs = self.epochs
        if len(epochs) == 1:
            m.steps += 1
            return epochs[0]._min()
        best = None
        for q in epochs:
            m.steps += 1
            x = q._min()
            if x is None:
                continue
            if best is not None:
                m.comparisons += 1
                if not (x.key < best.key or (x.key == best.key and x.ts < best.ts)):
                    continue
            best = x
        return best

    def _remove(self, node):
        self.epochs[node.epoch]._remove(node)

    def nodes_chrono(self):
        return [x for q in self.epochs for x in q.nodes_chrono()]

    def epoch_sizes(self):
        return [len(q.nodes_chrono()) for q in self.epochs]

    def epoch_of(self, h):
        return self._resolve(h).epoch

    def validate(self):
        errors = []
        nodes = []
        for j, q in enumerate(self.epochs):
            e, n = q.structure_errors(f"epoch{j}")
            errors.extend(e)
            nodes.extend(n)
        errors.extend(chronology_errors(nodes, "epochs"))
        for j, t in enumerate(self.finger_times):
            first = self.epochs[j + 1].nodes_chrono()
            if first and first[0].ts < t:
                errors.append(f"finger {j}: epoch {j + 1} holds an element older than the finger")
        errors.extend(self._validate_handles(nodes, "tfq"))
        return errors

