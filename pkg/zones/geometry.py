"""
Planar polygon helpers: containment, simplicity, overlap.

Polygons are sequences of (x, y) vertices in order, implicitly closed.
"""

from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

Point2 = Tuple[float, float]
Polygon = Sequence[Point2]

# Tolerance for the float pre-check before the exact on-edge test.
_EDGE_EPS = 1e-9


def _edges(polygon: Polygon):
    n = len(polygon)
    for i in range(n):
        yield polygon[i], polygon[(i + 1) % n]


def orientation(a: Point2, b: Point2, c: Point2) -> float:
    """Twice the signed area of triangle abc; positive when counter-clockwise."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def point_on_segment(p: Point2, a: Point2, b: Point2) -> bool:
    """Exact test of ``p`` lying on the closed segment ab."""
    px, py = p
    if px < min(a[0], b[0]) - _EDGE_EPS or px > max(a[0], b[0]) + _EDGE_EPS:
        return False
    if py < min(a[1], b[1]) - _EDGE_EPS or py > max(a[1], b[1]) + _EDGE_EPS:
        return False
    scale = max(abs(b[0] - a[0]) + abs(b[1] - a[1]), 1.0)
    if abs(orientation(a, b, p)) > _EDGE_EPS * scale * scale:
        return False

    fx, fy = Fraction(px), Fraction(py)
    ax, ay, bx, by = Fraction(a[0]), Fraction(a[1]), Fraction(b[0]), Fraction(b[1])
    if (bx - ax) * (fy - ay) - (by - ay) * (fx - ax) != 0:
        return False
    return min(ax, bx) <= fx <= max(ax, bx) and min(ay, by) <= fy <= max(ay, by)


def point_on_boundary(p: Point2, polygon: Polygon) -> bool:
    return any(point_on_segment(p, a, b) for a, b in _edges(polygon))


def point_in_polygon(p: Point2, polygon: Polygon) -> bool:
    """Closed containment: boundary points count as inside."""
    if point_on_boundary(p, polygon):
        return True
    px, py = p
    inside = False
    for (ax, ay), (bx, by) in _edges(polygon):
        if (ay > py) != (by > py):
            x_cross = ax + (py - ay) * (bx - ax) / (by - ay)
            if px < x_cross:
                inside = not inside
    return inside


def points_in_polygon(points: np.ndarray, polygon: Polygon) -> np.ndarray:
    """
    Vectorized ``point_in_polygon`` over an (N, 2) array.

    Points within float noise of an edge are re-checked with the exact
    scalar test so both versions agree.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    px, py = points[:, 0], points[:, 1]
    inside = np.zeros(len(points), dtype=bool)
    near_edge = np.zeros(len(points), dtype=bool)
    for (ax, ay), (bx, by) in _edges(polygon):
        straddles = (ay > py) != (by > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            x_cross = ax + (py - ay) * (bx - ax) / (by - ay)
        inside ^= straddles & (px < x_cross)

        dx, dy = bx - ax, by - ay
        length_sq = dx * dx + dy * dy
        if length_sq == 0.0:
            distance = np.hypot(px - ax, py - ay)
        else:
            along = np.clip(((px - ax) * dx + (py - ay) * dy) / length_sq, 0.0, 1.0)
            distance = np.hypot(px - (ax + along * dx), py - (ay + along * dy))
        near_edge |= distance <= 1e-7

    for index in np.flatnonzero(near_edge):
        inside[index] = point_in_polygon((float(px[index]), float(py[index])), polygon)
    return inside


def polygon_area(polygon: Polygon) -> float:
    """Signed shoelace area; positive for counter-clockwise vertex order."""
    return 0.5 * sum(a[0] * b[1] - b[0] * a[1] for a, b in _edges(polygon))


def polygon_centroid(polygon: Polygon) -> Point2:
    area = polygon_area(polygon)
    if area == 0.0:
        xs, ys = zip(*polygon)
        return (sum(xs) / len(xs), sum(ys) / len(ys))
    cx = cy = 0.0
    for a, b in _edges(polygon):
        weight = a[0] * b[1] - b[0] * a[1]
        cx += (a[0] + b[0]) * weight
        cy += (a[1] + b[1]) * weight
    return (cx / (6.0 * area), cy / (6.0 * area))


def segments_intersect(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool:
    """True when the closed segments share at least one point."""
    d1 = orientation(q1, q2, p1)
    d2 = orientation(q1, q2, p2)
    d3 = orientation(p1, p2, q1)
    d4 = orientation(p1, p2, q2)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    return (
        point_on_segment(p1, q1, q2)
        or point_on_segment(p2, q1, q2)
        or point_on_segment(q1, p1, p2)
        or point_on_segment(q2, p1, p2)
    )


def segments_cross_properly(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool:
    """True when the segments cross at a single interior point of both."""
    d1 = orientation(q1, q2, p1)
    d2 = orientation(q1, q2, p2)
    d3 = orientation(p1, p2, q1)
    d4 = orientation(p1, p2, q2)
    return d1 * d2 < 0 and d3 * d4 < 0


def self_intersections(polygon: Polygon) -> List[Tuple[int, int]]:
    """Index pairs of non-adjacent edges that touch or cross."""
    edges = list(_edges(polygon))
    n = len(edges)
    found = []
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            if segments_intersect(edges[i][0], edges[i][1], edges[j][0], edges[j][1]):
                found.append((i, j))
    return found


def _interior_point(polygon: Polygon) -> Point2:
    """A point strictly inside a simple polygon, centroid first."""
    centroid = polygon_centroid(polygon)
    if point_in_polygon(centroid, polygon) and not point_on_boundary(centroid, polygon):
        return centroid
    n = len(polygon)
    for i in range(n):
        a, b, c = polygon[i - 1], polygon[i], polygon[(i + 1) % n]
        candidate = ((a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0)
        if point_in_polygon(candidate, polygon) and not point_on_boundary(candidate, polygon):
            return candidate
    return centroid


def polygons_overlap(first: Polygon, second: Polygon) -> bool:
    """True when the interiors of two simple polygons intersect."""
    for a1, a2 in _edges(first):
        for b1, b2 in _edges(second):
            if segments_cross_properly(a1, a2, b1, b2):
                return True

    def strictly_inside(p: Point2, polygon: Polygon) -> bool:
        return point_in_polygon(p, polygon) and not point_on_boundary(p, polygon)

    if any(strictly_inside(v, second) for v in first) or any(strictly_inside(v, first) for v in second):
        return True
    return point_in_polygon(_interior_point(first), second) or point_in_polygon(_interior_point(second), first)
