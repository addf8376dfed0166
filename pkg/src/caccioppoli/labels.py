"""Label sets, their basis-vector embedding, and cutoff machinery on the
embedded label segments.

A label set is an ordered finite collection of vectors in R^N.  Embedding
sends the i-th label to the i-th standard basis vector of R^q, which makes
every pair of labels sit at distance sqrt(2) and turns interface length into
total variation up to that constant factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DomainError

SQRT2 = math.sqrt(2.0)

# Euclidean slack for "this point lies on an embedded segment"; fibers are
# built analytically, so this only absorbs round-off.
ON_SEGMENT_TOL = 1e-9


class LabelSet:
    """Ordered, pairwise-distinct labels z_0..z_{q-1} in R^N.

    The ordering is fixed at construction; it defines the canonical trace
    orientation everywhere downstream, so it is never sorted or mutated.
    """

    def __init__(self, values):
        arr = np.asarray(values, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2:
            raise DomainError("labels must be a list of vectors")
        q, n = arr.shape
        if q < 2:
            raise DomainError(f"need at least 2 labels, got {q}")
        if n < 1:
            raise DomainError("label vectors must have dimension >= 1")
        for i in range(q):
            for j in range(i + 1, q):
                if np.linalg.norm(arr[i] - arr[j]) == 0.0:
                    raise DomainError(f"labels {i} and {j} coincide")
        self.values = arr
        self.values.setflags(write=False)

    @property
    def q(self) -> int:
        return self.values.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.values.shape[1]

    def __len__(self) -> int:
        return self.q

    def value(self, i: int) -> np.ndarray:
        if not 0 <= i < self.q:
            raise DomainError(f"label index {i} out of range [0, {self.q})")
        return self.values[i]

    def index_of(self, z) -> int:
        """Index of the label equal to ``z`` (within 1e-12), else DomainError."""
        z = np.atleast_1d(np.asarray(z, dtype=float))
        if z.shape != (self.ambient_dim,):
            raise DomainError(
                f"label has dimension {z.shape}, expected ({self.ambient_dim},)"
            )
        dists = np.linalg.norm(self.values - z[None, :], axis=1)
        i = int(np.argmin(dists))
        if dists[i] > 1e-12:
            raise DomainError(f"value {z!r} is not in the label set")
        return i

    def embed(self, z) -> np.ndarray:
        """Map a label value to its standard basis vector in R^q."""
        return self.basis_vector(self.index_of(z))

    def basis_vector(self, i: int) -> np.ndarray:
        if not 0 <= i < self.q:
            raise DomainError(f"label index {i} out of range [0, {self.q})")
        e = np.zeros(self.q)
        e[i] = 1.0
        return e

    def embedded(self) -> "LabelSet":
        """The label set T(Z) = {e_0, ..., e_{q-1}} in R^q."""
        return LabelSet(np.eye(self.q))

    def pair_distance(self, i: int, j: int) -> float:
        return float(np.linalg.norm(self.value(i) - self.value(j)))

    def min_gap(self) -> float:
        return min(
            self.pair_distance(i, j)
            for i in range(self.q)
            for j in range(i + 1, self.q)
        )

    def max_gap(self) -> float:
        return max(
            self.pair_distance(i, j)
            for i in range(self.q)
            for j in range(i + 1, self.q)
        )

    def embedded_segments(self):
        """All EmbeddedSegment(i, j) with i < j."""
        return [
            EmbeddedSegment(i, j, self.q)
            for i in range(self.q)
            for j in range(i + 1, self.q)
        ]

    def __repr__(self):
        return f"LabelSet(q={self.q}, N={self.ambient_dim})"


@dataclass(frozen=True)
class EmbeddedSegment:
    """Open segment between basis vectors e_i, e_j with its middle-half core.

    Points are parameterized as p(lam) = lam*e_i + (1-lam)*e_j; the core is
    lam in (1/4, 3/4), which has length sqrt(2)/2 so that sqrt(2) * H^1(core)
    equals 1 exactly.
    """

    i: int
    j: int
    q: int

    def __post_init__(self):
        if not 0 <= self.i < self.j < self.q:
            raise DomainError(f"need 0 <= i < j < q, got i={self.i}, j={self.j}")

    @property
    def endpoint_i(self) -> np.ndarray:
        e = np.zeros(self.q)
        e[self.i] = 1.0
        return e

    @property
    def endpoint_j(self) -> np.ndarray:
        e = np.zeros(self.q)
        e[self.j] = 1.0
        return e

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.endpoint_i - self.endpoint_j))

    @property
    def core_length(self) -> float:
        # core spans half of the parameter range
        return 0.5 * self.length

    def point_at(self, lam: float) -> np.ndarray:
        p = np.zeros(self.q)
        p[self.i] = lam
        p[self.j] = 1.0 - lam
        return p

    def parameter_of(self, point, tol: float = ON_SEGMENT_TOL) -> float:
        """Recover lam from a point that lies on the closed segment.

        Raises DomainError when the point is farther than ``tol`` from the
        segment (in R^q Euclidean distance).
        """
        p = np.asarray(point, dtype=float)
        if p.shape != (self.q,):
            raise DomainError(f"point must live in R^{self.q}")
        lam = float(np.clip(p[self.i] - p[self.j] + 1.0, 0.0, 2.0)) / 2.0
        if np.linalg.norm(p - self.point_at(lam)) > tol:
            raise DomainError("point does not lie on the embedded segment")
        return lam

    def distance_to_core(self, point) -> float:
        """Euclidean distance from an arbitrary point of R^q to the core."""
        p = np.asarray(point, dtype=float)
        a = self.point_at(0.75)
        b = self.point_at(0.25)
        d = b - a
        t = float(np.clip(np.dot(p - a, d) / np.dot(d, d), 0.0, 1.0))
        return float(np.linalg.norm(p - (a + t * d)))


def segment_pair_for_point(q: int, point, tol: float = ON_SEGMENT_TOL):
    """Identify the (i, j) segment carrying ``point``, or None.

    A point on [e_i, e_j] has exactly two nonzero coordinates summing to 1,
    so the two largest coordinates are the candidates.  Endpoint points
    (basis vectors) are resolved to an arbitrary incident pair; every cutoff
    value there is 0, so the choice is unobservable.
    """
    p = np.asarray(point, dtype=float)
    if p.shape != (q,):
        raise DomainError(f"point must live in R^{q}")
    order = np.argsort(p)[::-1]
    a, b = int(order[0]), int(order[1])
    i, j = (a, b) if a < b else (b, a)
    seg = EmbeddedSegment(i, j, q)
    lam = float(np.clip(p[i] - p[j] + 1.0, 0.0, 2.0)) / 2.0
    if np.linalg.norm(p - seg.point_at(lam)) <= tol:
        return seg
    return None


@dataclass(frozen=True)
class CutoffProfile:
    """Piecewise-linear cutoff on embedded segments.

    In the segment parameter lam, the profile is 1 on the core [1/4, 3/4]
    and ramps linearly to 0 over a width of delta/sqrt(2) on both sides,
    i.e. it vanishes exactly where the Euclidean distance to the core
    reaches delta.  Requires 0 < delta <= sqrt(2)/4 so the ramps stay inside
    the segment and neighborhoods of distinct cores never interact on-segment.
    """

    delta: float

    def __post_init__(self):
        if not 0.0 < self.delta <= SQRT2 / 4.0:
            raise DomainError(
                f"delta must lie in (0, sqrt(2)/4], got {self.delta}"
            )

    def value_at_parameter(self, lam) -> np.ndarray:
        """Profile value at parameter(s) lam; vectorized."""
        lam = np.asarray(lam, dtype=float)
        dist = np.maximum(0.0, np.maximum(0.25 - lam, lam - 0.75))
        ramp = self.delta / SQRT2
        return np.clip(1.0 - dist / ramp, 0.0, 1.0)

    def eval_on_segment(self, pair, point, q: int | None = None) -> float:
        """Value at a point of the closed segment [e_i, e_j].

        ``pair`` is (i, j) with i < j; the point must lie on the segment
        within the on-segment tolerance.
        """
        i, j = pair
        p = np.asarray(point, dtype=float)
        seg = EmbeddedSegment(i, j, p.shape[0] if q is None else q)
        lam = seg.parameter_of(p)
        return float(self.value_at_parameter(lam))

    def parameter_breakpoints(self):
        """The four lam values where the profile changes slope."""
        ramp = self.delta / SQRT2
        return (0.25 - ramp, 0.25, 0.75, 0.75 + ramp)

    def fiber_average(self) -> float:
        """Exact integral of the profile over lam in [0, 1]."""
        return 0.5 + self.delta / SQRT2


def embedded_surface_density(
    profile: CutoffProfile,
    g,
    labels: LabelSet,
    x,
    y,
    xi,
    tol: float = ON_SEGMENT_TOL,
) -> float:
    """Cutoff extension of a surface integrand to the embedded label space.

    For y on a segment [e_i, e_j] (i < j) the value is

        profile(y) / (sqrt(2) * H^1(core_ij)) * g(x, z_i, z_j, w/|w|) * |w|

    with w = xi^T (e_i - e_j), and 0 when w vanishes.  Points farther than
    delta from every core evaluate to 0.  Points inside a delta-tube but off
    every segment violate the precondition and raise DomainError (partition
    fibers never produce them).

    ``g`` must be nonnegative wherever it is evaluated and ``xi`` must have
    unit Frobenius norm.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.asarray(y, dtype=float)
    xi = np.asarray(xi, dtype=float)
    q = labels.q
    if y.shape != (q,):
        raise DomainError(f"y must live in R^{q}")
    if xi.shape != (q, x.shape[0]):
        raise DomainError(f"xi must be a {q}x{x.shape[0]} matrix")
    if abs(np.linalg.norm(xi) - 1.0) > tol:
        raise DomainError("xi must have unit Frobenius norm")

    seg = segment_pair_for_point(q, y, tol=tol)
    if seg is None:
        dmin = min(s.distance_to_core(y) for s in labels.embedded_segments())
        if dmin >= profile.delta:
            return 0.0
        raise DomainError(
            "y lies inside a cutoff tube but on no embedded segment"
        )

    theta = profile.eval_on_segment((seg.i, seg.j), y)
    if theta == 0.0:
        return 0.0
    w = xi.T @ (seg.endpoint_i - seg.endpoint_j)
    wnorm = float(np.linalg.norm(w))
    if wnorm == 0.0:
        # g is bounded, so the product extends by 0 here
        return 0.0
    gval = float(
        g(x, labels.value(seg.i), labels.value(seg.j), w / wnorm)
    )
    if not np.isfinite(gval):
        raise ContractError("integrand returned a non-finite value")
    if gval < 0.0:
        raise ContractError(
            "integrand must be nonnegative for the cutoff extension"
        )
    return theta / (SQRT2 * seg.core_length) * gval * wnorm
