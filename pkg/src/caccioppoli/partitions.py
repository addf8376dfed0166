"""Exact partition representations in 1D and 2D with jump-set extraction.

A partition is a piecewise-constant label field: subintervals of an open
interval in 1D, a conforming convex-polygon mesh in 2D.  Jump facets carry
the canonical trace triple (plus label, minus label, normal): traces are
ordered so the plus side has the strictly smaller label index, and the
normal points from the minus side into the plus side.  All interface
quantities are finite sums over facets, evaluated exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import polyclip
from .errors import DomainError, StructuralError
from .labels import LabelSet

AREA_EPS = 1e-12
EDGE_EPS = 1e-12


@dataclass(frozen=True)
class JumpFacet:
    """One mesh-resolved piece of the jump set.

    carrier: breakpoint coordinate (1D) or a (2, 2) array of segment
    endpoints in minus-cell traversal order (2D).
    """

    plus_label: int
    minus_label: int
    normal: np.ndarray
    measure: float
    carrier: object

    @property
    def dim(self) -> int:
        return self.normal.shape[0]

    def points(self, ts) -> np.ndarray:
        """Carrier points at fractional positions ``ts`` (shape (m, d))."""
        ts = np.asarray(ts, dtype=float)
        if self.dim == 1:
            return np.full((ts.shape[0], 1), float(self.carrier))
        a, b = self.carrier
        return a[None, :] + ts[:, None] * (b - a)[None, :]

    def midpoint(self) -> np.ndarray:
        return self.points(np.array([0.5]))[0]

    def flipped(self) -> "JumpFacet":
        """Same facet with traces swapped and normal negated (for tests)."""
        carrier = self.carrier
        if self.dim == 2:
            carrier = np.array([self.carrier[1], self.carrier[0]])
        return JumpFacet(
            plus_label=self.minus_label,
            minus_label=self.plus_label,
            normal=-self.normal,
            measure=self.measure,
            carrier=carrier,
        )


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, msg: str):
        self.violations.append(msg)

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(self.violations)


class Partition1D:
    """Piecewise-constant field on an open interval.

    breakpoints are strictly increasing interior points; cell_labels[k] is
    the label index on the k-th subinterval.  Adjacent equal labels are
    permitted; ``normalize`` removes the silent breakpoints so the jump set
    is exactly the breakpoint set.
    """

    dim = 1

    def __init__(self, interval, breakpoints, cell_labels, labels: LabelSet):
        self.interval = (float(interval[0]), float(interval[1]))
        self.breakpoints = np.asarray(breakpoints, dtype=float).reshape(-1)
        self.cell_labels = np.asarray(cell_labels, dtype=int).reshape(-1)
        self.labels = labels
        self._facets = None
        self._report = None

    def validate(self) -> ValidationReport:
        if self._report is not None:
            return self._report
        rep = ValidationReport()
        a, b = self.interval
        if not a < b:
            rep.add(f"empty interval ({a}, {b})")
        bp = self.breakpoints
        if bp.size and not np.all(np.diff(bp) > 0):
            rep.add("non-increasing breakpoints")
        if bp.size and (bp[0] <= a or bp[-1] >= b):
            rep.add("breakpoints outside the open interval")
        if self.cell_labels.size != bp.size + 1:
            rep.add(
                f"expected {bp.size + 1} cell labels, got {self.cell_labels.size}"
            )
        if self.cell_labels.size and (
            self.cell_labels.min() < 0 or self.cell_labels.max() >= self.labels.q
        ):
            rep.add("cell label index out of range")
        self._report = rep
        return rep

    def normalize(self) -> "Partition1D":
        """Merge adjacent cells that share a label."""
        keep_bp, keep_lab = [], [self.cell_labels[0]]
        for k, x in enumerate(self.breakpoints):
            if self.cell_labels[k + 1] != keep_lab[-1]:
                keep_bp.append(x)
                keep_lab.append(self.cell_labels[k + 1])
        return Partition1D(self.interval, keep_bp, keep_lab, self.labels)

    def facets(self):
        if self._facets is not None:
            return self._facets
        rep = self.validate()
        if not rep.ok:
            raise StructuralError(str(rep))
        u = self.normalize()
        out = []
        for k, x in enumerate(u.breakpoints):
            left = int(u.cell_labels[k])
            right = int(u.cell_labels[k + 1])
            if left < right:
                plus, minus, nu = left, right, np.array([-1.0])
            else:
                plus, minus, nu = right, left, np.array([1.0])
            out.append(
                JumpFacet(
                    plus_label=plus,
                    minus_label=minus,
                    normal=nu,
                    measure=1.0,
                    carrier=float(x),
                )
            )
        self._facets = out
        return out

    def domain_measure(self) -> float:
        return self.interval[1] - self.interval[0]

    def value_on_cell(self, k: int) -> np.ndarray:
        return self.labels.value(int(self.cell_labels[k]))

    def with_labels(self, labels: LabelSet) -> "Partition1D":
        return Partition1D(self.interval, self.breakpoints, self.cell_labels, labels)


class Partition2D:
    """Piecewise-constant field on a conforming convex-polygon mesh.

    vertices: (V, 2) float array; cells: lists of vertex indices, each a
    convex CCW polygon; cell_labels[c] is the label index of cell c.  The
    domain is the union of the cells.
    """

    dim = 2

    def __init__(self, vertices, cells, cell_labels, labels: LabelSet):
        self.vertices = np.asarray(vertices, dtype=float).reshape(-1, 2)
        self.cells = [list(map(int, c)) for c in cells]
        self.cell_labels = np.asarray(cell_labels, dtype=int).reshape(-1)
        self.labels = labels
        self._facets = None
        self._report = None
        self._edge_map = None

    # -- geometry helpers ------------------------------------------------

    def cell_polygon(self, c: int):
        return [tuple(self.vertices[v]) for v in self.cells[c]]

    def cell_area(self, c: int) -> float:
        return polyclip.signed_area(self.cell_polygon(c))

    def domain_measure(self) -> float:
        return float(sum(abs(self.cell_area(c)) for c in range(len(self.cells))))

    def bounding_box(self):
        return (
            float(self.vertices[:, 0].min()),
            float(self.vertices[:, 1].min()),
            float(self.vertices[:, 0].max()),
            float(self.vertices[:, 1].max()),
        )

    def value_on_cell(self, c: int) -> np.ndarray:
        return self.labels.value(int(self.cell_labels[c]))

    def with_labels(self, labels: LabelSet) -> "Partition2D":
        return Partition2D(self.vertices, self.cells, self.cell_labels, labels)

    def _edges(self):
        """Map undirected edge -> list of (cell, tail_vertex, head_vertex)."""
        if self._edge_map is not None:
            return self._edge_map
        emap = {}
        for c, cell in enumerate(self.cells):
            n = len(cell)
            for k in range(n):
                vi, vj = cell[k], cell[(k + 1) % n]
                key = (vi, vj) if vi < vj else (vj, vi)
                emap.setdefault(key, []).append((c, vi, vj))
        self._edge_map = emap
        return emap

    # -- validation --------------------------------------------------------

    def validate(self) -> ValidationReport:
        if self._report is not None:
            return self._report
        rep = ValidationReport()
        ncells = len(self.cells)
        if self.cell_labels.size != ncells:
            rep.add(f"expected {ncells} cell labels, got {self.cell_labels.size}")
        if self.cell_labels.size and (
            self.cell_labels.min() < 0 or self.cell_labels.max() >= self.labels.q
        ):
            rep.add("cell label index out of range")
        nv = self.vertices.shape[0]
        if nv != np.unique(self.vertices, axis=0).shape[0]:
            rep.add("duplicate vertex coordinates")
        for c, cell in enumerate(self.cells):
            if len(cell) < 3:
                rep.add(f"cell {c} has fewer than 3 vertices")
                continue
            if any(v < 0 or v >= nv for v in cell):
                rep.add(f"cell {c} references a missing vertex")
                continue
            if len(set(cell)) != len(cell):
                rep.add(f"cell {c} repeats a vertex")
                continue
            poly = self.cell_polygon(c)
            for k in range(len(poly)):
                p, q = poly[k], poly[(k + 1) % len(poly)]
                if np.hypot(q[0] - p[0], q[1] - p[1]) <= EDGE_EPS:
                    rep.add(f"cell {c} has a degenerate edge")
            area = polyclip.signed_area(poly)
            if area < 0:
                rep.add(f"cell {c} is not counter-clockwise")
            elif abs(area) <= AREA_EPS:
                rep.add(f"cell {c} has degenerate area {area:.3e}")
            elif not polyclip.is_convex_ccw(poly):
                rep.add(f"cell {c} is not convex")
        boundary = []
        for (vi, vj), uses in self._edges().items():
            if len(uses) == 1:
                boundary.append((vi, vj))
            elif len(uses) == 2:
                if uses[0][1] == uses[1][1]:
                    rep.add(
                        f"non-conforming edge ({vi},{vj}): traversed twice in "
                        "the same direction"
                    )
            else:
                rep.add(
                    f"non-conforming edge ({vi},{vj}): shared by {len(uses)} cells"
                )
        self._check_hanging_vertices(rep, boundary)
        self._report = rep
        return rep

    def _check_hanging_vertices(self, rep, boundary_edges):
        # a vertex strictly inside a single-cell edge means the neighbor
        # subdivided it: the mesh is non-conforming even though edge-use
        # counting cannot see it
        if not boundary_edges:
            return
        pts = self.vertices
        for vi, vj in boundary_edges:
            a, b = pts[vi], pts[vj]
            d = b - a
            L2 = float(d @ d)
            t = ((pts - a) @ d) / L2
            proj = a + t[:, None] * d
            dist = np.linalg.norm(pts - proj, axis=1)
            inside = (dist < 1e-9) & (t > 1e-9) & (t < 1 - 1e-9)
            inside[[vi, vj]] = False
            for v in np.nonzero(inside)[0]:
                rep.add(
                    f"non-conforming edge ({vi},{vj}): vertex {int(v)} hangs on it"
                )

    # -- jump set ---------------------------------------------------------

    def facets(self):
        if self._facets is not None:
            return self._facets
        rep = self.validate()
        if not rep.ok:
            raise StructuralError(str(rep))
        out = []
        for (vi, vj), uses in sorted(self._edges().items()):
            if len(uses) != 2:
                continue  # boundary edge: not part of S_u within the domain
            (c0, t0, h0), (c1, _, _) = uses
            l0 = int(self.cell_labels[c0])
            l1 = int(self.cell_labels[c1])
            if l0 == l1:
                continue
            if l0 < l1:
                plus_cell, minus_cell = c0, c1
                plus, minus = l0, l1
            else:
                plus_cell, minus_cell = c1, c0
                plus, minus = l1, l0
            # endpoints in the minus cell's CCW traversal order
            for c, tail, head in uses:
                if c == minus_cell:
                    a, b = self.vertices[tail], self.vertices[head]
                    break
            d = b - a
            length = float(np.hypot(d[0], d[1]))
            nu = np.array([d[1], -d[0]]) / length  # outward from the minus cell
            out.append(
                JumpFacet(
                    plus_label=plus,
                    minus_label=minus,
                    normal=nu,
                    measure=length,
                    carrier=np.array([a, b]),
                )
            )
        self._facets = out
        return out


# -- module-level operations ------------------------------------------------


def jump_set(u):
    """All jump facets of the partition (boundary edges excluded)."""
    return u.facets()


def perimeter(u) -> float:
    """Total H^{d-1} measure of the jump set."""
    return float(sum(f.measure for f in u.facets()))


def reduced_boundary_measure(u, i: int) -> float:
    """Measure of the facets adjacent to label index ``i``."""
    if not 0 <= i < u.labels.q:
        raise DomainError(f"label index {i} out of range [0, {u.labels.q})")
    return float(
        sum(f.measure for f in u.facets() if i in (f.plus_label, f.minus_label))
    )


def total_variation(u, labels: LabelSet | None = None) -> float:
    """Jump-weighted interface measure: sum of |z_plus - z_minus| * measure."""
    Z = labels if labels is not None else u.labels
    return float(
        sum(
            Z.pair_distance(f.plus_label, f.minus_label) * f.measure
            for f in u.facets()
        )
    )


def embed_partition(u):
    """Same geometry with labels replaced by their basis-vector embedding."""
    return u.with_labels(u.labels.embedded())


def _l1_distance_1d(u: Partition1D, v: Partition1D) -> float:
    if (
        abs(u.interval[0] - v.interval[0]) > 1e-12
        or abs(u.interval[1] - v.interval[1]) > 1e-12
    ):
        raise DomainError("partitions live on different intervals")
    grid = np.concatenate(
        ([u.interval[0]], np.union1d(u.breakpoints, v.breakpoints), [u.interval[1]])
    )
    total = 0.0
    iu = iv = 0
    for k in range(grid.size - 1):
        mid = 0.5 * (grid[k] + grid[k + 1])
        while iu < u.breakpoints.size and u.breakpoints[iu] < mid:
            iu += 1
        while iv < v.breakpoints.size and v.breakpoints[iv] < mid:
            iv += 1
        dz = np.linalg.norm(u.value_on_cell(iu) - v.value_on_cell(iv))
        total += dz * (grid[k + 1] - grid[k])
    return float(total)


def _same_mesh(u: Partition2D, v: Partition2D) -> bool:
    return (
        u.vertices.shape == v.vertices.shape
        and np.array_equal(u.vertices, v.vertices)
        and u.cells == v.cells
    )


def _l1_distance_2d(u: Partition2D, v: Partition2D) -> float:
    if _same_mesh(u, v):
        total = 0.0
        for c in range(len(u.cells)):
            dz = np.linalg.norm(u.value_on_cell(c) - v.value_on_cell(c))
            if dz:
                total += dz * abs(u.cell_area(c))
        return float(total)

    area_u, area_v = u.domain_measure(), v.domain_measure()
    scale = max(area_u, area_v, 1.0)
    if abs(area_u - area_v) > 1e-9 * scale or any(
        abs(a - b) > 1e-9 for a, b in zip(u.bounding_box(), v.bounding_box())
    ):
        raise DomainError("partitions cover different domains")

    polys_u = [u.cell_polygon(c) for c in range(len(u.cells))]
    polys_v = [v.cell_polygon(c) for c in range(len(v.cells))]
    boxes_u = [polyclip.bounding_box(p) for p in polys_u]
    boxes_v = [polyclip.bounding_box(p) for p in polys_v]
    vals_u = [u.value_on_cell(c) for c in range(len(u.cells))]
    vals_v = [v.value_on_cell(c) for c in range(len(v.cells))]

    total = 0.0
    for cu, pu in enumerate(polys_u):
        bu = boxes_u[cu]
        zu = vals_u[cu]
        for cv, pv in enumerate(polys_v):
            dz = float(np.linalg.norm(zu - vals_v[cv]))
            if dz == 0.0:
                continue
            if not polyclip.boxes_overlap(bu, boxes_v[cv]):
                continue
            a = polyclip.overlap_area(pu, pv)
            if a:
                total += dz * a
    return float(total)


def l1_distance(u, v) -> float:
    """Exact integral of |u - v| over the shared domain.

    Same-mesh 2D fields reduce to per-cell differences; different meshes use
    exact convex-polygon clipping (1D: breakpoint merge).
    """
    if u.dim != v.dim:
        raise DomainError("partitions have different ambient dimensions")
    if u.labels.ambient_dim != v.labels.ambient_dim:
        raise DomainError("label sets live in different spaces")
    if u.dim == 1:
        return _l1_distance_1d(u, v)
    return _l1_distance_2d(u, v)


def validate(u) -> ValidationReport:
    """Diagnostic report of every type-invariant violation (never raises)."""
    return u.validate()
