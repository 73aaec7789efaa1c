"""
Forest of named frames with timestamped edges.
"""

import bisect
import threading
from functools import reduce
from typing import Dict, List, Optional, Set, Tuple

from loguru import logger

from .exceptions import (
    AmbiguousSampleError,
    DisconnectedFramesError,
    ExtrapolationError,
    TreeStructureError,
    UnknownFrameError,
)
from .transforms import RigidTransform, StampedTransform, compose, interpolate

DEFAULT_EXTRAPOLATION_MARGIN = 0.5
DEFAULT_STREAMING_RETENTION = 300.0

Edge = Tuple[str, str]


class _EdgeBuffer:
    """Time-ordered samples of one (parent, child) edge."""

    def __init__(self, static: bool):
        self.static = static
        self.stamps: List[float] = []
        self.samples: List[StampedTransform] = []

    def insert(self, sample: StampedTransform) -> bool:
        index = bisect.bisect_left(self.stamps, sample.stamp)
        if index < len(self.stamps) and self.stamps[index] == sample.stamp:
            if self.samples[index].xform != sample.xform:
                raise AmbiguousSampleError(
                    f"Edge {sample.edge} already holds a different transform at {sample.stamp}"
                )
            return False
        self.stamps.insert(index, sample.stamp)
        self.samples.insert(index, sample)
        return True

    def trim_before(self, oldest: float) -> None:
        cut = bisect.bisect_left(self.stamps, oldest)
        # keep two samples so the newest stretch stays interpolable
        cut = min(cut, max(len(self.stamps) - 2, 0))
        if cut > 0:
            del self.stamps[:cut]
            del self.samples[:cut]

    def value_at(self, t: float, margin: float) -> RigidTransform:
        if self.static:
            return self.samples[0].xform
        first, last = self.stamps[0], self.stamps[-1]
        if t < first - margin or t > last + margin:
            raise ExtrapolationError(
                f"t={t} outside [{first - margin}, {last + margin}] for edge {self.samples[0].edge}"
            )
        if t <= first:
            return self.samples[0].xform
        if t >= last:
            return self.samples[-1].xform
        index = bisect.bisect_left(self.stamps, t)
        if self.stamps[index] == t:
            return self.samples[index].xform
        return interpolate(self.samples[index - 1], self.samples[index], t)


class TransformTree:
    """
    Thread-safe store of rigid transforms between frames.

    Each child frame has a single parent. Lookups compose the edges on the
    path through the nearest common ancestor, interpolating dynamic edges in
    time and clamping to the buffer ends within ``extrapolation_margin``.
    ``retention`` bounds each dynamic buffer to the newest seconds of data;
    ``None`` keeps everything.
    """

    def __init__(
        self,
        extrapolation_margin: float = DEFAULT_EXTRAPOLATION_MARGIN,
        retention: Optional[float] = None,
    ):
        if extrapolation_margin < 0:
            raise ValueError("extrapolation_margin must be non-negative")
        if retention is not None and retention <= 0:
            raise ValueError("retention must be positive")
        self.extrapolation_margin = extrapolation_margin
        self.retention = retention
        self._lock = threading.RLock()
        self._parent_of: Dict[str, str] = {}
        self._buffers: Dict[Edge, _EdgeBuffer] = {}
        self._frames: Set[str] = set()

    def set_static(self, parent: str, child: str, xform: RigidTransform) -> None:
        """Register an edge valid at every time."""
        self.insert(StampedTransform(parent, child, 0.0, xform), static=True)

    def insert(self, sample: StampedTransform, static: bool = False) -> None:
        with self._lock:
            self._check_structure(sample.parent, sample.child)
            buffer = self._buffers.get(sample.edge)
            if buffer is None:
                buffer = _EdgeBuffer(static=static)
                self._buffers[sample.edge] = buffer
                self._parent_of[sample.child] = sample.parent
                self._frames.update(sample.edge)
                logger.debug(f"New {'static' if static else 'dynamic'} edge {sample.parent} -> {sample.child}")
            elif buffer.static != static:
                kind = "static" if buffer.static else "dynamic"
                raise TreeStructureError(f"Edge {sample.edge} is already {kind}")

            if static:
                buffer.stamps = [sample.stamp]
                buffer.samples = [sample]
                return
            buffer.insert(sample)
            if self.retention is not None:
                buffer.trim_before(buffer.stamps[-1] - self.retention)

    def _check_structure(self, parent: str, child: str) -> None:
        existing = self._parent_of.get(child)
        if existing is not None and existing != parent:
            raise TreeStructureError(f"Frame '{child}' already has parent '{existing}', refusing '{parent}'")
        if existing == parent:
            return
        frame: Optional[str] = parent
        while frame is not None:
            if frame == child:
                raise TreeStructureError(f"Edge {parent} -> {child} would create a cycle")
            frame = self._parent_of.get(frame)

    def frames(self) -> Set[str]:
        with self._lock:
            return set(self._frames)

    def chain(self, frame: str) -> List[str]:
        """Frames from ``frame`` up to its root, inclusive."""
        with self._lock:
            if frame not in self._frames:
                raise UnknownFrameError(f"Unknown frame '{frame}'")
            path = [frame]
            while path[-1] in self._parent_of:
                path.append(self._parent_of[path[-1]])
            return path

    def can_transform(self, target: str, source: str, t: float) -> bool:
        try:
            self.lookup(target, source, t)
        except (UnknownFrameError, DisconnectedFramesError, ExtrapolationError):
            return False
        return True

    def lookup(self, target: str, source: str, t: float) -> RigidTransform:
        """Pose of ``source`` in ``target``: maps source coordinates into target."""
        if target == source:
            return RigidTransform.identity()
        with self._lock:
            target_chain = self.chain(target)
            source_chain = self.chain(source)
            if target_chain[-1] != source_chain[-1]:
                raise DisconnectedFramesError(f"No path between '{target}' and '{source}'")

            target_index = {frame: i for i, frame in enumerate(target_chain)}
            common_depth = next(i for i, frame in enumerate(source_chain) if frame in target_index)
            common = source_chain[common_depth]

            down_to_source = self._edge_values(source_chain[: common_depth + 1], t)
            down_to_target = self._edge_values(target_chain[: target_index[common] + 1], t)

        from_source = reduce(compose, down_to_source) if down_to_source else None
        if not down_to_target:
            return from_source
        to_target = reduce(compose, down_to_target).inverse()
        return compose(to_target, from_source) if from_source is not None else to_target

    def _edge_values(self, upward_path: List[str], t: float) -> List[RigidTransform]:
        """Edge transforms from the topmost frame of ``upward_path`` down to its first frame."""
        values = []
        for child, parent in zip(upward_path, upward_path[1:]):
            values.append(self._buffers[(parent, child)].value_at(t, self.extrapolation_margin))
        values.reverse()
        return values

    def describe(self) -> str:
        """Indented text dump of the forest."""
        with self._lock:
            children: Dict[str, List[str]] = {}
            for child, parent in self._parent_of.items():
                children.setdefault(parent, []).append(child)
            roots = sorted(frame for frame in self._frames if frame not in self._parent_of)
            lines: List[str] = []

            def walk(frame: str, depth: int) -> None:
                suffix = ""
                if frame in self._parent_of:
                    buffer = self._buffers[(self._parent_of[frame], frame)]
                    if buffer.static:
                        suffix = " (static)"
                    else:
                        suffix = f" ({len(buffer.stamps)} samples, {buffer.stamps[0]:.3f}-{buffer.stamps[-1]:.3f} s)"
                lines.append(f"{'  ' * depth}{frame}{suffix}")
                for child in sorted(children.get(frame, [])):
                    walk(child, depth + 1)

            for root in roots:
                walk(root, 0)
            return "\n".join(lines)
