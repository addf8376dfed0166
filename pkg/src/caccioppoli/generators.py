"""Constructors for the benchmark partition sequences and random fields.

Every generator returns exactly-representable polygonal geometry; the
closed-form interface measures recorded by the harness hold to round-off.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .labels import LabelSet
from .partitions import Partition1D, Partition2D

THREE_LEVELS = LabelSet([[0.0], [1.0], [2.0]])
TWO_LEVELS = LabelSet([[0.0], [1.0]])


# -- one-dimensional staircase sequence ---------------------------------------


def gen_staircase(n: int, labels: LabelSet = THREE_LEVELS) -> Partition1D:
    """Field on (-1, 1) equal to z1 below 1/n, z2 on (1/n, 2/n), z3 above.

    Two unit jumps that collide as n grows: the limit keeps a single jump,
    so interface count drops while total variation is conserved.
    """
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    return Partition1D((-1.0, 1.0), [1.0 / n, 2.0 / n], [0, 1, 2], labels)


def staircase_limit(labels: LabelSet = THREE_LEVELS) -> Partition1D:
    return Partition1D((-1.0, 1.0), [0.0], [0, 2], labels)


# -- vanishing middle slab (2D analog) -----------------------------------------


def gen_vanishing_slab(n: int, labels: LabelSet = THREE_LEVELS) -> Partition2D:
    """Three horizontal bands on (0,1) x (-1,1); the middle band vanishes."""
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    ys = [-1.0, 1.0 / n, 2.0 / n, 1.0]
    vertices = [(x, y) for y in ys for x in (0.0, 1.0)]
    cells = [
        [2 * k, 2 * k + 1, 2 * k + 3, 2 * k + 2]
        for k in range(3)
    ]
    return Partition2D(vertices, cells, [0, 1, 2], labels)


def vanishing_slab_limit(labels: LabelSet = THREE_LEVELS) -> Partition2D:
    vertices = [(x, y) for y in (-1.0, 0.0, 1.0) for x in (0.0, 1.0)]
    cells = [[0, 1, 3, 2], [2, 3, 5, 4]]
    return Partition2D(vertices, cells, [0, 2], labels)


# -- inscribed regular polygon in the square (-1,1)^2 --------------------------


def _square_hit(angle: float):
    """Where the ray at ``angle`` leaves the square (-1,1)^2; exact on sides."""
    c, s = math.cos(angle), math.sin(angle)
    scale = max(abs(c), abs(s))
    x, y = c / scale, s / scale
    # snap near-corner hits so rays through corners reuse the corner vertex
    if abs(abs(x) - 1.0) < 1e-9:
        x = math.copysign(1.0, x)
    if abs(abs(y) - 1.0) < 1e-9:
        y = math.copysign(1.0, y)
    return (x, y)


def gen_inscribed_polygon(
    n: int, r: float, labels: LabelSet = TWO_LEVELS
) -> Partition2D:
    """Two-phase field: a regular n-gon of circumradius r inside (-1,1)^2.

    The inner phase is a centroid fan of the n-gon.  The ring between the
    n-gon and the square is cut by the radial rays through the polygon
    vertices: each ring cell is wedge-intersect-square minus the chord, an
    intersection of convex sets, so the mesh is convex and conforming for
    every n.  Vertex angles are 2*pi*k/n, which nests the n-gon exactly
    inside the m-gon whenever n divides m.
    """
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    if not 0.0 < r < 1.0:
        raise DomainError(f"circumradius must be in (0, 1), got {r}")
    angles = [2.0 * math.pi * k / n for k in range(n)]
    inner = [(r * math.cos(a), r * math.sin(a)) for a in angles]
    outer = [_square_hit(a) for a in angles]
    corners = [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)]
    corner_angle = {p: math.atan2(p[1], p[0]) % (2.0 * math.pi) for p in corners}

    vertices = [(0.0, 0.0)] + inner
    outer_idx = []
    for p in outer:
        vertices.append(p)
        outer_idx.append(len(vertices) - 1)
    corner_idx = {}
    for p in corners:
        if p in vertices:  # a ray hit this corner exactly
            corner_idx[p] = vertices.index(p)
        else:
            vertices.append(p)
            corner_idx[p] = len(vertices) - 1

    cells = [[0, 1 + k, 1 + (k + 1) % n] for k in range(n)]
    cell_labels = [1] * n
    for k in range(n):
        k1 = (k + 1) % n
        lo = angles[k]
        hi = angles[k1] if k1 else 2.0 * math.pi
        between = sorted(
            (corner_angle[p], p) for p in corners if lo < corner_angle[p] < hi
        )
        ring_cell = [1 + k1, 1 + k, outer_idx[k]]
        ring_cell += [corner_idx[p] for _, p in between]
        ring_cell.append(outer_idx[k1])
        # corner-snapped rays can repeat a vertex; drop the duplicate
        cell = [v for i, v in enumerate(ring_cell) if v != ring_cell[i - 1]]
        cells.append(cell)
        cell_labels.append(0)
    return Partition2D(vertices, cells, cell_labels, labels)


# -- sawtooth interfaces on the unit square ------------------------------------


def _sawtooth_amplitude(n: int, rule: str) -> float:
    if rule == "constant_slope":
        return 1.0 / (2.0 * n)
    if rule == "shrinking":
        # amplitude chosen so the zigzag length is exactly sqrt(1 + 1/n^2)
        return 1.0 / (2.0 * n * n)
    raise DomainError(f"unknown amplitude rule {rule!r}")


def gen_sawtooth(
    n: int, amplitude_rule: str = "constant_slope", labels: LabelSet = TWO_LEVELS
) -> Partition2D:
    """Two-phase unit square whose interface zigzags with n teeth.

    The interface runs vertically near x = 1/2 with teeth deflecting in x;
    it stays monotone in y, so the vertical extent of the jump set equals 1
    for every n.  constant_slope keeps slope +-1 (length sqrt(2) for every
    n, never converging to the flat interface's length 1); shrinking scales
    teeth so the length converges to 1.  Teeth are centered on x = 1/2 so
    the construction stays inside the square even at n = 1.
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    a = _sawtooth_amplitude(n, amplitude_rule)
    x0, x1 = 0.5 - a / 2.0, 0.5 + a / 2.0

    # build with a horizontal zigzag over rows of vertices, then transpose;
    # rows: far side, baseline (full steps); tooth tips, near side (half steps)
    far = [(k / n, 0.0) for k in range(n + 1)]
    base = [(k / n, x0) for k in range(n + 1)]
    strip = [(k / (2 * n), x1) for k in range(2 * n + 1)]
    near = [(k / (2 * n), 1.0) for k in range(2 * n + 1)]
    vertices = far + base + strip + near
    B = 0
    M = n + 1
    S = 2 * (n + 1)
    T = S + 2 * n + 1

    cells, cell_labels = [], []
    for k in range(n):
        cells.append([B + k, B + k + 1, M + k + 1, M + k])  # block below base
        cell_labels.append(0)
        apex = S + 2 * k + 1
        cells.append([M + k, M + k + 1, apex])  # tooth
        cell_labels.append(0)
        cells.append([M + k, apex, S + 2 * k])  # leading notch
        cell_labels.append(1)
        cells.append([M + k + 1, S + 2 * k + 2, apex])  # trailing notch
        cell_labels.append(1)
    for k in range(2 * n):
        cells.append([S + k, S + k + 1, T + k + 1, T + k])  # blocks past strip
        cell_labels.append(1)

    # transpose to the vertical orientation (mirror, so cells flip to CCW)
    vertices = [(y, x) for (x, y) in vertices]
    cells = [list(reversed(c)) for c in cells]
    return Partition2D(vertices, cells, cell_labels, labels)


def sawtooth_limit(labels: LabelSet = TWO_LEVELS) -> Partition2D:
    vertices = [
        (0.0, 0.0),
        (0.5, 0.0),
        (1.0, 0.0),
        (0.0, 1.0),
        (0.5, 1.0),
        (1.0, 1.0),
    ]
    cells = [[0, 1, 4, 3], [1, 2, 5, 4]]
    return Partition2D(vertices, cells, [0, 1], labels)


# -- seeded random fields -------------------------------------------------------


def random_label_set(rng, q: int | None = None, ambient: int | None = None):
    q = int(rng.integers(2, 6)) if q is None else q
    ambient = int(rng.integers(1, 4)) if ambient is None else ambient
    values = rng.normal(size=(q, ambient))
    return LabelSet(values)


def random_partition_2d(
    seed: int, max_cells: int = 20, q_max: int = 5
) -> Partition2D:
    """Seeded random conforming partition: Delaunay or structured grid.

    At most ``max_cells`` cells, at least two distinct labels.
    """
    from scipy.spatial import Delaunay

    rng = np.random.default_rng(seed)
    labels = random_label_set(rng, q=int(rng.integers(2, q_max + 1)))

    if rng.random() < 0.7:
        npts = int(rng.integers(6, 12))
        pts = rng.random((npts, 2)) * 2.0 - 1.0
        tri = Delaunay(pts)
        cells = []
        for simplex in tri.simplices:
            p0, p1, p2 = pts[simplex]
            cross = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (
                p2[0] - p0[0]
            )
            cells.append(
                list(simplex) if cross > 0 else [simplex[0], simplex[2], simplex[1]]
            )
        vertices = pts
    else:
        mx, my = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        xs = np.linspace(-1.0, 1.0, mx + 1)
        ys = np.linspace(-1.0, 1.0, my + 1)
        vertices = [(x, y) for y in ys for x in xs]
        cells = [
            [
                j * (mx + 1) + i,
                j * (mx + 1) + i + 1,
                (j + 1) * (mx + 1) + i + 1,
                (j + 1) * (mx + 1) + i,
            ]
            for j in range(my)
            for i in range(mx)
        ]

    ncells = len(cells)
    if ncells > max_cells:
        # drop is not allowed (breaks conformity); regenerate smaller
        return random_partition_2d(seed + 10_000, max_cells, q_max)
    cell_labels = rng.integers(0, labels.q, size=ncells)
    if np.all(cell_labels == cell_labels[0]):
        cell_labels[0] = (cell_labels[0] + 1) % labels.q
    return Partition2D(vertices, cells, cell_labels, labels)
