"""
Convex hull features of a track's floor projection.
"""

import math
from typing import List, Sequence, Tuple

Point2 = Tuple[float, float]


def _cross(o: Point2, a: Point2, b: Point2) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Sequence[Sequence[float]]) -> List[Point2]:
    """
    Counter-clockwise hull vertices by Andrew's monotone chain.

    Collinear points are dropped, so a collinear input gives its two extreme
    points and a single distinct point gives itself.
    """
    unique = sorted({(float(p[0]), float(p[1])) for p in points})
    if not unique:
        raise ValueError("convex_hull needs at least one point")
    if len(unique) <= 2:
        return unique

    lower: List[Point2] = []
    for p in unique:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Point2] = []
    for p in reversed(unique):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def perimeter_of_hull(hull: Sequence[Point2]) -> float:
    """Closed-loop length; a 2-vertex hull counts the segment there and back."""
    if len(hull) < 2:
        return 0.0
    return sum(math.dist(hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull)))


def area_of_hull(hull: Sequence[Point2]) -> float:
    if len(hull) < 3:
        return 0.0
    return 0.5 * abs(sum(_cross((0.0, 0.0), hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull))))


def hull_perimeter(points: Sequence[Sequence[float]]) -> float:
    return perimeter_of_hull(convex_hull(points))


def hull_area(points: Sequence[Sequence[float]]) -> float:
    return area_of_hull(convex_hull(points))
