"""
Timed publication of a detection stream onto a topic.
"""

import math
import threading
import time
from typing import Callable, Optional, Sequence

from loguru import logger

from ingestion import CapacityError, Detection, Topic


def replay_realtime(
    stream: Sequence[Detection],
    topic: Topic,
    speed_factor: float = 1.0,
    clock: Callable[[], float] = time.monotonic,
    sleep: Callable[[float], None] = time.sleep,
    stop: Optional[threading.Event] = None,
) -> int:
    """
    Publish each detection once ``speed_factor`` times the elapsed wall time
    reaches its stamp. ``math.inf`` publishes as fast as possible.
    """
    if speed_factor <= 0:
        raise ValueError("speed_factor must be positive")
    for before, after in zip(stream, stream[1:]):
        if after.stamp < before.stamp:
            raise ValueError(f"Stream is not sorted: {after.stamp} follows {before.stamp}")

    started = clock()
    published = 0
    for det in stream:
        if stop is not None and stop.is_set():
            logger.warning(f"Realtime replay stopped after {published} detections")
            break
        if not math.isinf(speed_factor):
            wait = det.stamp / speed_factor - (clock() - started)
            if wait > 0:
                sleep(wait)
        try:
            topic.publish(det)
        except CapacityError as e:
            logger.warning(f"{topic.name}: {e}")
            continue
        published += 1
    topic.flush()
    return published


class RealtimeReplayer(threading.Thread):
    """Background publisher thread around ``replay_realtime``."""

    def __init__(self, stream: Sequence[Detection], topic: Topic, speed_factor: float = 1.0):
        super().__init__(name="realtime-replay", daemon=True)
        self.stream = stream
        self.topic = topic
        self.speed_factor = speed_factor
        self.stop_event = threading.Event()
        self.published = 0
        self.error: Optional[BaseException] = None

    def run(self) -> None:
        try:
            self.published = replay_realtime(self.stream, self.topic, self.speed_factor, stop=self.stop_event)
        except BaseException as e:
            self.error = e
            logger.error(f"Realtime replay failed: {e}")

    def stop(self) -> None:
        self.stop_event.set()
