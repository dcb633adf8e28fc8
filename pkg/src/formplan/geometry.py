"""Planar geometry helpers used by map validation and roadmap construction."""

from __future__ import annotations

import math

import numpy as np

Point = tuple[float, float]
Rect = tuple[float, float, float, float]  # xmin, ymin, xmax, ymax

EPS = 1e-9


def dist(a: Point, b: Point) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


def orient(a: Point, b: Point, c: Point) -> float:
    """Twice the signed area of triangle abc (positive = counterclockwise)."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _sign(x: float) -> int:
    if x > EPS:
        return 1
    if x < -EPS:
        return -1
    return 0


def _in_bbox(a: Point, b: Point, p: Point) -> bool:
    return (min(a[0], b[0]) - EPS <= p[0] <= max(a[0], b[0]) + EPS
            and min(a[1], b[1]) - EPS <= p[1] <= max(a[1], b[1]) + EPS)


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True if the closed segments ab and cd share at least one point."""
    o1 = _sign(orient(a, b, c))
    o2 = _sign(orient(a, b, d))
    o3 = _sign(orient(c, d, a))
    o4 = _sign(orient(c, d, b))
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and _in_bbox(a, b, c):
        return True
    if o2 == 0 and _in_bbox(a, b, d):
        return True
    if o3 == 0 and _in_bbox(c, d, a):
        return True
    if o4 == 0 and _in_bbox(c, d, b):
        return True
    return False


def point_segment_distance(p: Point, a: Point, b: Point) -> float:
    t, foot = project_on_segment(p, a, b)
    return dist(p, foot)


def project_on_segment(p: Point, a: Point, b: Point) -> tuple[float, Point]:
    """Clamped parameter t in [0,1] and foot point of p projected on segment ab."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    l2 = dx * dx + dy * dy
    if l2 <= EPS * EPS:
        return 0.0, a
    t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / l2
    t = max(0.0, min(1.0, t))
    return t, (a[0] + t * dx, a[1] + t * dy)


def polygon_area(pts: tuple[Point, ...]) -> float:
    """Unsigned area of a closed polygon given as a vertex loop."""
    s = 0.0
    n = len(pts)
    for i in range(n):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return abs(s) / 2.0


def polygon_has_repeated_vertices(pts: tuple[Point, ...]) -> bool:
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            if dist(pts[i], pts[j]) <= EPS:
                return True
    return False


def polygon_has_collinear_run(pts: tuple[Point, ...]) -> bool:
    """True if any three consecutive vertices are collinear (degenerate loop)."""
    n = len(pts)
    for i in range(n):
        if _sign(orient(pts[i], pts[(i + 1) % n], pts[(i + 2) % n])) == 0:
            return True
    return False


def polygon_is_simple(pts: tuple[Point, ...]) -> bool:
    """True if no two non-adjacent boundary segments of the loop intersect."""
    n = len(pts)
    if n < 3:
        return False
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                continue
            c, d = pts[j], pts[(j + 1) % n]
            if segments_intersect(a, b, c, d):
                return False
    return True


def point_in_polygon(p: Point, pts: tuple[Point, ...]) -> bool:
    """Ray-casting containment test; boundary points count as inside."""
    n = len(pts)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        if _sign(orient(a, b, p)) == 0 and _in_bbox(a, b, p):
            return True
    inside = False
    x, y = p
    for i in range(n):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            xin = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xin > x:
                inside = not inside
    return inside


def polygons_overlap(p1: tuple[Point, ...], p2: tuple[Point, ...]) -> bool:
    """True if two polygon loops touch, cross, or contain one another."""
    n1, n2 = len(p1), len(p2)
    for i in range(n1):
        a, b = p1[i], p1[(i + 1) % n1]
        for j in range(n2):
            c, d = p2[j], p2[(j + 1) % n2]
            if segments_intersect(a, b, c, d):
                return True
    return point_in_polygon(p1[0], p2) or point_in_polygon(p2[0], p1)


def point_in_rect(p: Point, rect: Rect, tol: float = 0.0) -> bool:
    xmin, ymin, xmax, ymax = rect
    return xmin - tol <= p[0] <= xmax + tol and ymin - tol <= p[1] <= ymax + tol


def rect_corners(rect: Rect) -> tuple[Point, Point, Point, Point]:
    xmin, ymin, xmax, ymax = rect
    return ((xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax))


def clip_segment_to_rect(a: Point, b: Point, rect: Rect) -> tuple[Point, Point] | None:
    """Liang-Barsky clip of segment ab to a rectangle; None when fully outside."""
    xmin, ymin, xmax, ymax = rect
    x0, y0 = a
    dx, dy = b[0] - a[0], b[1] - a[1]
    t0, t1 = 0.0, 1.0
    for p, q in ((-dx, x0 - xmin), (dx, xmax - x0), (-dy, y0 - ymin), (dy, ymax - y0)):
        if abs(p) <= EPS * EPS:
            if q < 0.0:
                return None
            continue
        r = q / p
        if p < 0.0:
            if r > t1:
                return None
            if r > t0:
                t0 = r
        else:
            if r < t0:
                return None
            if r < t1:
                t1 = r
    return (x0 + t0 * dx, y0 + t0 * dy), (x0 + t1 * dx, y0 + t1 * dy)


def boundary_segments(border: Rect, obstacles: tuple[tuple[Point, ...], ...]) -> np.ndarray:
    """All obstacle edges plus the four border sides as an (M, 4) array."""
    segs: list[tuple[float, float, float, float]] = []
    corners = rect_corners(border)
    for i in range(4):
        a, b = corners[i], corners[(i + 1) % 4]
        segs.append((a[0], a[1], b[0], b[1]))
    for poly in obstacles:
        n = len(poly)
        for i in range(n):
            a, b = poly[i], poly[(i + 1) % n]
            segs.append((a[0], a[1], b[0], b[1]))
    return np.asarray(segs, dtype=float)


def min_distance_to_segments(points: np.ndarray, segs: np.ndarray,
                             chunk: int = 512) -> np.ndarray:
    """Minimum distance from each point (N,2) to any segment (M,4)."""
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        return np.zeros(0)
    a = segs[:, 0:2][None, :, :]
    ab = (segs[:, 2:4] - segs[:, 0:2])[None, :, :]
    l2 = np.maximum(np.einsum("nmi,nmi->nm", ab, ab), 1e-300)
    out = np.empty(len(pts))
    for lo in range(0, len(pts), chunk):
        p = pts[lo:lo + chunk][:, None, :]
        t = np.clip(np.einsum("nmi,nmi->nm", p - a, ab) / l2, 0.0, 1.0)
        foot = a + t[:, :, None] * ab
        d = np.sqrt(np.einsum("nmi,nmi->nm", p - foot, p - foot))
        out[lo:lo + chunk] = d.min(axis=1)
    return out
