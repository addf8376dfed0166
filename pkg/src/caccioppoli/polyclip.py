"""Convex polygon primitives: areas, convexity tests, and exact clipping.

Polygons are sequences of (x, y) pairs in counter-clockwise order.  The
clipper is Sutherland-Hodgman restricted to convex clip polygons, which is
exact for the convex-vs-convex overlays used by the L1 distance.
"""

from __future__ import annotations

import math


def signed_area(poly) -> float:
    """Signed area via the shoelace formula; positive for CCW."""
    n = len(poly)
    s = 0.0
    for k in range(n):
        x0, y0 = poly[k]
        x1, y1 = poly[(k + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def is_convex_ccw(poly, tol: float = 1e-12) -> bool:
    """True when the polygon is counter-clockwise and has no reflex vertex.

    Collinear vertices are allowed; they occur legitimately in refined
    meshes and do not affect any measure.
    """
    n = len(poly)
    if n < 3:
        return False
    for k in range(n):
        ax, ay = poly[k]
        bx, by = poly[(k + 1) % n]
        cx, cy = poly[(k + 2) % n]
        cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        if cross < -tol:
            return False
    return signed_area(poly) > 0.0


def bounding_box(poly):
    xs = [p[0] for p in poly]
    ys = [p[1] for p in poly]
    return min(xs), min(ys), max(xs), max(ys)


def boxes_overlap(b0, b1, pad: float = 0.0) -> bool:
    return not (
        b0[2] + pad < b1[0]
        or b1[2] + pad < b0[0]
        or b0[3] + pad < b1[1]
        or b1[3] + pad < b0[1]
    )


def clip_convex(subject, clipper):
    """Intersection of a convex subject polygon with a convex CCW clipper.

    Returns the vertex list of the intersection (possibly empty).
    """
    output = list(subject)
    n = len(clipper)
    for k in range(n):
        if not output:
            return []
        cx0, cy0 = clipper[k]
        cx1, cy1 = clipper[(k + 1) % n]
        ex, ey = cx1 - cx0, cy1 - cy0
        inside = [
            ex * (py - cy0) - ey * (px - cx0) >= 0.0 for px, py in output
        ]
        result = []
        m = len(output)
        for idx in range(m):
            cur = output[idx]
            nxt = output[(idx + 1) % m]
            cur_in = inside[idx]
            nxt_in = inside[(idx + 1) % m]
            if cur_in:
                result.append(cur)
                if not nxt_in:
                    result.append(_edge_intersection(cur, nxt, cx0, cy0, ex, ey))
            elif nxt_in:
                result.append(_edge_intersection(cur, nxt, cx0, cy0, ex, ey))
        output = result
    return output


def _edge_intersection(p, r, cx, cy, ex, ey):
    px, py = p
    rx, ry = r
    dx, dy = rx - px, ry - py
    denom = ex * dy - ey * dx
    if denom == 0.0:
        # collinear-overlap round-off: the whole segment sits on the clip
        # line, so any point of it closes the degenerate sliver exactly
        return p
    t = -(ex * (py - cy) - ey * (px - cx)) / denom
    # exact arithmetic keeps t in [0, 1]; clamp round-off excursions
    t = min(1.0, max(0.0, t))
    return (px + t * dx, py + t * dy)


def overlap_area(poly_a, poly_b) -> float:
    """Area of the intersection of two convex CCW polygons."""
    inter = clip_convex(poly_a, poly_b)
    if len(inter) < 3:
        return 0.0
    return abs(signed_area(inter))


def segment_distance(a0, a1, b0, b1) -> float:
    """Euclidean distance between two segments in R^n (numpy-free)."""

    def sub(u, v):
        return [ui - vi for ui, vi in zip(u, v)]

    def dot(u, v):
        return sum(ui * vi for ui, vi in zip(u, v))

    d1 = sub(a1, a0)
    d2 = sub(b1, b0)
    r = sub(a0, b0)
    a = dot(d1, d1)
    e = dot(d2, d2)
    f = dot(d2, r)
    c = dot(d1, r)
    b = dot(d1, d2)
    denom = a * e - b * b
    if denom > 1e-30:
        s = max(0.0, min(1.0, (b * f - c * e) / denom))
    else:
        s = 0.0
    t = (b * s + f) / e if e > 1e-30 else 0.0
    t = max(0.0, min(1.0, t))
    # one refinement pass keeps clamped endpoints consistent
    if a > 1e-30:
        s = max(0.0, min(1.0, (b * t - c) / a))
    p = [a0i + s * d1i for a0i, d1i in zip(a0, d1)]
    qp = [b0i + t * d2i for b0i, d2i in zip(b0, d2)]
    return math.sqrt(dot(sub(p, qp), sub(p, qp)))
