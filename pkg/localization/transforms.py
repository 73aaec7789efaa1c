"""
Rigid transforms built from a translation and a unit quaternion.

Quaternions are stored scalar-first ``(w, x, y, z)``. scipy works scalar-last,
so conversion happens at the boundary of every operation.
"""

import math
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np
from scipy.spatial.transform import Rotation, Slerp

from .exceptions import AmbiguousSampleError, ExtrapolationError

Vector3 = Tuple[float, float, float]
Quaternion = Tuple[float, float, float, float]

IDENTITY_ROTATION: Quaternion = (1.0, 0.0, 0.0, 0.0)


def normalize_quaternion(q: Sequence[float]) -> Quaternion:
    """Return ``q`` scaled to unit norm with a non-negative scalar part."""
    w, x, y, z = (float(c) for c in q)
    norm = math.sqrt(w * w + x * x + y * y + z * z)
    if norm == 0.0 or not math.isfinite(norm):
        raise ValueError(f"Cannot normalize quaternion {tuple(q)}")
    if w < 0.0:
        norm = -norm
    return (w / norm, x / norm, y / norm, z / norm)


def _to_scipy(q: Quaternion) -> Rotation:
    w, x, y, z = q
    return Rotation.from_quat([x, y, z, w])


def _from_scipy(rotation: Rotation) -> Quaternion:
    x, y, z, w = rotation.as_quat()
    return normalize_quaternion((w, x, y, z))


@dataclass(frozen=True)
class RigidTransform:
    """Pose of a child frame expressed in its parent frame."""

    translation: Vector3 = (0.0, 0.0, 0.0)
    rotation: Quaternion = IDENTITY_ROTATION

    def __post_init__(self):
        translation = tuple(float(v) for v in self.translation)
        if len(translation) != 3:
            raise ValueError(f"Translation needs 3 components, got {len(translation)}")
        object.__setattr__(self, "translation", translation)
        object.__setattr__(self, "rotation", normalize_quaternion(self.rotation))

    @classmethod
    def identity(cls) -> "RigidTransform":
        return cls()

    @classmethod
    def from_translation(cls, x: float, y: float, z: float = 0.0) -> "RigidTransform":
        return cls(translation=(x, y, z))

    @classmethod
    def from_yaw(cls, yaw_deg: float, translation: Sequence[float] = (0.0, 0.0, 0.0)) -> "RigidTransform":
        """Rotation about +z by ``yaw_deg`` degrees, then ``translation``."""
        half = math.radians(yaw_deg) / 2.0
        return cls(translation=tuple(translation), rotation=(math.cos(half), 0.0, 0.0, math.sin(half)))

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "RigidTransform":
        """Build from a 4x4 homogeneous matrix."""
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (4, 4):
            raise ValueError(f"Expected a 4x4 matrix, got shape {matrix.shape}")
        rotation = _from_scipy(Rotation.from_matrix(matrix[:3, :3]))
        return cls(translation=tuple(matrix[:3, 3]), rotation=rotation)

    def rotation_matrix(self) -> np.ndarray:
        return _to_scipy(self.rotation).as_matrix()

    def as_matrix(self) -> np.ndarray:
        matrix = np.eye(4)
        matrix[:3, :3] = self.rotation_matrix()
        matrix[:3, 3] = self.translation
        return matrix

    def inverse(self) -> "RigidTransform":
        inverse_rotation = _to_scipy(self.rotation).inv()
        translation = -inverse_rotation.apply(np.asarray(self.translation))
        return RigidTransform(translation=tuple(translation), rotation=_from_scipy(inverse_rotation))

    def apply(self, point: Sequence[float]) -> Vector3:
        return transform_point(self, point)

    def to_dict(self) -> Dict:
        return {"translation": list(self.translation), "rotation": list(self.rotation)}

    @classmethod
    def from_dict(cls, data: Dict) -> "RigidTransform":
        """Accepts ``rotation`` as (w, x, y, z) or ``yaw_deg`` in degrees."""
        translation = tuple(data.get("translation", (0.0, 0.0, 0.0)))
        if "rotation" in data and "yaw_deg" in data:
            raise ValueError("Give either 'rotation' or 'yaw_deg', not both")
        if "yaw_deg" in data:
            return cls.from_yaw(float(data["yaw_deg"]), translation)
        return cls(translation=translation, rotation=tuple(data.get("rotation", IDENTITY_ROTATION)))


@dataclass(frozen=True)
class StampedTransform:
    """A transform between two named frames at one instant of the scenario clock."""

    parent: str
    child: str
    stamp: float
    xform: RigidTransform

    def __post_init__(self):
        if not self.parent or not self.child:
            raise ValueError("Frame ids must be non-empty")
        if self.parent == self.child:
            raise ValueError(f"Frame '{self.parent}' cannot be its own parent")
        if self.stamp < 0 or not math.isfinite(self.stamp):
            raise ValueError(f"Invalid stamp {self.stamp}")
        object.__setattr__(self, "stamp", float(self.stamp))

    @property
    def edge(self) -> Tuple[str, str]:
        return (self.parent, self.child)


def compose(a: RigidTransform, b: RigidTransform) -> RigidTransform:
    """Transform equivalent to applying ``b`` first, then ``a``."""
    rotation_a = _to_scipy(a.rotation)
    translation = rotation_a.apply(np.asarray(b.translation)) + np.asarray(a.translation)
    rotation = rotation_a * _to_scipy(b.rotation)
    return RigidTransform(translation=tuple(translation), rotation=_from_scipy(rotation))


def transform_point(x: RigidTransform, p: Sequence[float]) -> Vector3:
    """Rotate ``p`` then add the translation."""
    rotated = _to_scipy(x.rotation).apply(np.asarray(p, dtype=float))
    return tuple(float(v) for v in rotated + np.asarray(x.translation))


def interpolate(t0: StampedTransform, t1: StampedTransform, t: float) -> RigidTransform:
    """
    Linear interpolation of translation and shortest-arc slerp of rotation.

    Endpoints return the stored transforms unchanged.
    """
    if t0.edge != t1.edge:
        raise ValueError(f"Cannot interpolate between edges {t0.edge} and {t1.edge}")
    if t0.stamp == t1.stamp:
        if t0.xform != t1.xform:
            raise AmbiguousSampleError(f"Edge {t0.edge} has two transforms at stamp {t0.stamp}")
        if t == t0.stamp:
            return t0.xform
        raise ExtrapolationError(f"t={t} outside single-sample range [{t0.stamp}, {t0.stamp}]")
    if t0.stamp > t1.stamp:
        t0, t1 = t1, t0
    if t < t0.stamp or t > t1.stamp:
        raise ExtrapolationError(f"t={t} outside [{t0.stamp}, {t1.stamp}] for edge {t0.edge}")
    if t == t0.stamp:
        return t0.xform
    if t == t1.stamp:
        return t1.xform

    ratio = (t - t0.stamp) / (t1.stamp - t0.stamp)
    translation = tuple(a + (b - a) * ratio for a, b in zip(t0.xform.translation, t1.xform.translation))
    keyframes = Rotation.concatenate([_to_scipy(t0.xform.rotation), _to_scipy(t1.xform.rotation)])
    rotation = Slerp([0.0, 1.0], keyframes)([ratio])[0]
    return RigidTransform(translation=translation, rotation=_from_scipy(rotation))
