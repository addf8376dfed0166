"""Gauss-Legendre rules for line integrals over facet segments."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class QuadratureSpec:
    """Per-facet rule: ``order`` Gauss-Legendre nodes on each of
    ``subdivisions`` equal pieces.  Exact for polynomials of degree
    2*order - 1 along the facet."""

    order: int = 8
    subdivisions: int = 1

    def __post_init__(self):
        if self.order < 1:
            raise DomainError(f"quadrature order must be >= 1, got {self.order}")
        if self.subdivisions < 1:
            raise DomainError(
                f"subdivisions must be >= 1, got {self.subdivisions}"
            )

    def unit_rule(self):
        """Nodes and weights on [0, 1] including the subdivision splits."""
        return _unit_rule(self.order, self.subdivisions)


@lru_cache(maxsize=64)
def _leggauss01(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


@lru_cache(maxsize=64)
def _unit_rule(order: int, subdivisions: int):
    base_x, base_w = _leggauss01(order)
    nodes, weights = [], []
    h = 1.0 / subdivisions
    for k in range(subdivisions):
        nodes.append(k * h + h * base_x)
        weights.append(h * base_w)
    return np.concatenate(nodes), np.concatenate(weights)


def rule_on_intervals(order: int, cuts) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on [0, 1] split at interior ``cuts``.

    Used for integrands with kinks at known parameters (cutoff profiles):
    each smooth piece gets its own rule, making piecewise-polynomial
    integrands exact.
    """
    pts = [0.0] + sorted(c for c in cuts if 0.0 < c < 1.0) + [1.0]
    base_x, base_w = _leggauss01(order)
    nodes, weights = [], []
    for a, b in zip(pts[:-1], pts[1:]):
        if b - a <= 0.0:
            continue
        nodes.append(a + (b - a) * base_x)
        weights.append((b - a) * base_w)
    return np.concatenate(nodes), np.concatenate(weights)
