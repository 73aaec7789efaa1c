"""
Static transform configuration files.

JSON layout::

    {"root": "apartment",
     "transforms": [
        {"parent": "apartment", "child": "kinect1",
         "translation": [0.1, 2.5, 2.0], "yaw_deg": 0.0}
     ]}

``rotation`` as ``[w, x, y, z]`` may replace ``yaw_deg``.
"""

import json
from pathlib import Path
from typing import Dict, Iterable, List

from loguru import logger

from .transforms import RigidTransform, StampedTransform
from .tree import TransformTree


def static_transform_from_dict(data: Dict, default_parent: str = "apartment") -> StampedTransform:
    """One configuration entry as a stamp-0 transform."""
    child = data.get("child") or data.get("sensor")
    if not child:
        raise ValueError(f"Transform entry without child frame: {data}")
    parent = data.get("parent", default_parent)
    return StampedTransform(parent=parent, child=child, stamp=0.0, xform=RigidTransform.from_dict(data))


def load_static_transforms(filepath: Path) -> List[StampedTransform]:
    """Read every static edge from a transform file."""
    with open(filepath, "r", encoding="utf-8") as f:
        data = json.load(f)
    entries = data.get("transforms", []) if isinstance(data, dict) else data
    root = data.get("root", "apartment") if isinstance(data, dict) else "apartment"
    transforms = [static_transform_from_dict(entry, root) for entry in entries]
    logger.info(f"Loaded {len(transforms)} static transforms from {filepath}")
    return transforms


def build_tree(static_edges: Iterable[StampedTransform], **tree_options) -> TransformTree:
    """A fresh tree holding ``static_edges``."""
    tree = TransformTree(**tree_options)
    for edge in static_edges:
        tree.set_static(edge.parent, edge.child, edge.xform)
    return tree
