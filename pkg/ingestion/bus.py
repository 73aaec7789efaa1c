"""
In-process topic bus.

Publishers push detections onto named topics; subscribers receive them in
non-decreasing stamp order. Messages are held for ``reorder_window`` seconds
of stream time so that slightly late arrivals can be put back in order;
anything older than what was already delivered is dropped and counted.
"""

import heapq
import itertools
import threading
from collections import deque
from typing import Callable, Deque, Dict, List, Optional, Set, Tuple

from loguru import logger

from .models import Detection

DEFAULT_REORDER_WINDOW = 0.2
DEFAULT_RETENTION = 100_000
MAX_TRACKS_PER_SENSOR = 6

Callback = Callable[[Detection], None]


class CapacityError(ValueError):
    """A sensor reported more concurrent people than it can track."""


class Subscription:
    """Handle returned by ``Topic.subscribe``."""

    def __init__(self, topic: "Topic", callback: Callback):
        self.topic = topic
        self.callback = callback
        self.active = True

    def unsubscribe(self) -> None:
        self.topic._remove(self)


class Topic:
    """A named channel with a bounded reorder window and a retained history."""

    def __init__(
        self,
        name: str,
        reorder_window: float = DEFAULT_REORDER_WINDOW,
        capacity: int = DEFAULT_RETENTION,
        max_tracks_per_sensor: int = MAX_TRACKS_PER_SENSOR,
    ):
        if reorder_window < 0:
            raise ValueError("reorder_window must be non-negative")
        self.name = name
        self.reorder_window = reorder_window
        self.max_tracks_per_sensor = max_tracks_per_sensor
        self._lock = threading.RLock()
        self._pending: List[Tuple[float, int, Detection]] = []
        self._sequence = itertools.count()
        self._retained: Deque[Detection] = deque(maxlen=capacity)
        self._subscribers: List[Subscription] = []
        self._active_ids: Dict[Tuple[str, float], Set[int]] = {}
        self._newest: Optional[float] = None
        self._released: Optional[float] = None
        self.stats = {"published": 0, "delivered": 0, "reordered": 0, "dropped_late": 0, "rejected_capacity": 0}

    def publish(self, msg: Detection) -> None:
        with self._lock:
            if self._released is not None and msg.stamp < self._released:
                self.stats["published"] += 1
                self.stats["dropped_late"] += 1
                logger.debug(f"{self.name}: dropped late detection {msg.sensor}/{msg.local_id} at {msg.stamp}")
                return
            self._check_capacity(msg)
            self.stats["published"] += 1
            if self._newest is not None and msg.stamp < self._newest:
                self.stats["reordered"] += 1
            heapq.heappush(self._pending, (msg.stamp, next(self._sequence), msg))
            if self._newest is None or msg.stamp > self._newest:
                self._newest = msg.stamp
            self._release(self._newest - self.reorder_window)

    def _check_capacity(self, msg: Detection) -> None:
        key = (msg.sensor, msg.stamp)
        active = self._active_ids.setdefault(key, set())
        if msg.local_id not in active and len(active) >= self.max_tracks_per_sensor:
            self.stats["rejected_capacity"] += 1
            raise CapacityError(
                f"{msg.sensor} already tracks {len(active)} people at {msg.stamp}, rejecting local_id {msg.local_id}"
            )
        active.add(msg.local_id)

    def _release(self, up_to: float) -> None:
        while self._pending and self._pending[0][0] <= up_to:
            stamp, _, msg = heapq.heappop(self._pending)
            self._released = stamp
            self._deliver(msg)
        if self._released is not None and len(self._active_ids) > 1024:
            horizon = self._released - 1.0
            self._active_ids = {k: v for k, v in self._active_ids.items() if k[1] >= horizon}

    def _deliver(self, msg: Detection) -> None:
        self._retained.append(msg)
        self.stats["delivered"] += 1
        for subscription in list(self._subscribers):
            subscription.callback(msg)

    def flush(self) -> None:
        """Deliver everything still held in the reorder window."""
        with self._lock:
            self._release(float("inf"))

    def subscribe(self, callback: Callback, replay: bool = True) -> Subscription:
        """Register ``callback``; with ``replay`` it first receives the retained history."""
        with self._lock:
            subscription = Subscription(self, callback)
            if replay:
                for msg in list(self._retained):
                    callback(msg)
            self._subscribers.append(subscription)
            return subscription

    def _remove(self, subscription: Subscription) -> None:
        with self._lock:
            if subscription in self._subscribers:
                self._subscribers.remove(subscription)
            subscription.active = False

    def retained(self) -> List[Detection]:
        with self._lock:
            return list(self._retained)

    def __len__(self) -> int:
        return len(self._retained)


class TopicBus:
    """Registry of topics by name."""

    def __init__(self, **topic_options):
        self._topic_options = topic_options
        self._topics: Dict[str, Topic] = {}
        self._lock = threading.Lock()

    def topic(self, name: str) -> Topic:
        with self._lock:
            if name not in self._topics:
                self._topics[name] = Topic(name, **self._topic_options)
            return self._topics[name]

    def publish(self, name: str, msg: Detection) -> None:
        self.topic(name).publish(msg)

    def subscribe(self, name: str, callback: Callback, replay: bool = True) -> Subscription:
        return self.topic(name).subscribe(callback, replay=replay)

    def flush(self) -> None:
        for topic in list(self._topics.values()):
            topic.flush()

    def stats(self) -> Dict[str, Dict[str, int]]:
        return {name: dict(topic.stats) for name, topic in sorted(self._topics.items())}
