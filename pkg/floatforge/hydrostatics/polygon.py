"""
Planar polygon helpers for immersed cross-sections.

Polygons are sequences of (y, z) vertices in counter-clockwise or clockwise
order; the waterline is the horizontal line z = level.
"""

from typing import List, Sequence, Tuple

Point = Tuple[float, float]


def clip_polygon_below(polygon: Sequence[Point], level: float) -> List[Point]:
    """
    Part of a convex or concave polygon with z <= level.

    Sutherland-Hodgman clipping against a single half-plane. Returns an
    empty list if the polygon lies completely above the line.

    Example:
        >>> clip_polygon_below([(0, 0), (2, 0), (2, 2), (0, 2)], 1.0)
        [(0, 0), (2, 0), (2.0, 1.0), (0.0, 1.0)]
    """
    result: List[Point] = []
    n = len(polygon)
    for k in range(n):
        cur = polygon[k]
        nxt = polygon[(k + 1) % n]
        cur_in = cur[1] <= level
        nxt_in = nxt[1] <= level
        if cur_in:
            result.append(cur)
        if cur_in != nxt_in:
            t = (level - cur[1]) / (nxt[1] - cur[1])
            result.append((cur[0] + t * (nxt[0] - cur[0]), level))
    return result


def polygon_area(polygon: Sequence[Point]) -> float:
    """Unsigned area by the shoelace formula."""
    return abs(_signed_area(polygon))


def _signed_area(polygon: Sequence[Point]) -> float:
    total = 0.0
    n = len(polygon)
    for k in range(n):
        y0, z0 = polygon[k]
        y1, z1 = polygon[(k + 1) % n]
        total += y0 * z1 - y1 * z0
    return 0.5 * total


def polygon_centroid(polygon: Sequence[Point]) -> Point:
    """
    Area centroid of a simple polygon.

    Raises:
        ValueError: For degenerate polygons with zero area.
    """
    area = _signed_area(polygon)
    if area == 0.0:
        raise ValueError("Centroid of a degenerate polygon is undefined")
    cy = cz = 0.0
    n = len(polygon)
    for k in range(n):
        y0, z0 = polygon[k]
        y1, z1 = polygon[(k + 1) % n]
        cross = y0 * z1 - y1 * z0
        cy += (y0 + y1) * cross
        cz += (z0 + z1) * cross
    return cy / (6.0 * area), cz / (6.0 * area)
