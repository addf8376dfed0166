"""Surface functionals: per-facet quadrature of interface integrands.

The functional of a partition u sums, over the jump facets, the line
integral of g(x, u_plus, u_minus, normal) against interface measure.  The
integrand contract is sampled symmetry g(x,a,b,nu) == g(x,b,a,-nu) plus a
declared bound; continuity stays the caller's responsibility because it is
not mechanically checkable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, DomainError
from .labels import LabelSet
from .quadrature import QuadratureSpec


@dataclass
class SurfaceIntegrand:
    """A bounded, symmetric interface density g(x, a, b, nu).

    ``fn`` takes a point x (shape (d,)), two label values a, b (shape (N,))
    and a unit normal nu (shape (d,)) and returns a float.
    """

    fn: object
    bound: float
    name: str = "custom"

    def __post_init__(self):
        if self.bound <= 0:
            raise DomainError("declared bound must be positive")

    def __call__(self, x, a, b, nu) -> float:
        return float(self.fn(x, a, b, nu))


@dataclass
class SymmetryReport:
    samples: int
    max_asymmetry: float
    max_abs_value: float
    declared_bound: float
    worst_tuple: object = None

    @property
    def symmetric(self) -> bool:
        return self.max_asymmetry <= 1e-12 * max(1.0, self.declared_bound)

    @property
    def bounded(self) -> bool:
        return self.max_abs_value <= self.declared_bound * (1 + 1e-12)

    @property
    def ok(self) -> bool:
        return self.symmetric and self.bounded


def check_symmetry(
    g: SurfaceIntegrand,
    labels: LabelSet,
    samples: int = 256,
    seed: int = 0,
    dim: int = 2,
) -> SymmetryReport:
    """Sampled contract check over random (x, a, b, nu) tuples.

    x is drawn from the unit box [0,1]^dim, labels uniformly from the set,
    nu uniformly from the unit sphere.
    """
    if samples < 1:
        raise DomainError("need at least one sample")
    rng = np.random.default_rng(seed)
    max_asym = 0.0
    max_abs = 0.0
    worst = None
    for _ in range(samples):
        x = rng.random(dim)
        i, j = rng.integers(0, labels.q, size=2)
        a, b = labels.value(int(i)), labels.value(int(j))
        nu = rng.normal(size=dim)
        nu /= np.linalg.norm(nu)
        v1 = g(x, a, b, nu)
        v2 = g(x, b, a, -nu)
        asym = abs(v1 - v2)
        if asym > max_asym:
            max_asym = asym
            worst = (x, int(i), int(j), nu)
        max_abs = max(max_abs, abs(v1), abs(v2))
    return SymmetryReport(
        samples=samples,
        max_asymmetry=max_asym,
        max_abs_value=max_abs,
        declared_bound=g.bound,
        worst_tuple=worst,
    )


def _facet_values(facet, labels, g, quad):
    """Integrand values and H^{d-1} weights at the facet's quadrature nodes."""
    zp = labels.value(facet.plus_label)
    zm = labels.value(facet.minus_label)
    if facet.dim == 1:
        xs = facet.points(np.array([0.5]))
        weights = np.array([facet.measure])
    else:
        ts, ws = quad.unit_rule()
        xs = facet.points(ts)
        weights = ws * facet.measure
    vals = np.array([g(x, zp, zm, facet.normal) for x in xs])
    if not np.all(np.isfinite(vals)):
        raise ContractError(f"integrand {g.name!r} returned a non-finite value")
    if np.any(np.abs(vals) > g.bound * (1 + 1e-12)):
        raise ContractError(
            f"integrand {g.name!r} exceeded its declared bound {g.bound}"
        )
    return vals, weights, xs, zp, zm


def functional_over_facets(
    facets,
    labels: LabelSet,
    g: SurfaceIntegrand,
    quad: QuadratureSpec = QuadratureSpec(),
    spot_check_symmetry: bool = True,
) -> float:
    """Sum of facet line integrals of g; facet orientation is immaterial for
    symmetric integrands."""
    total = 0.0
    for k, f in enumerate(facets):
        vals, weights, xs, zp, zm = _facet_values(f, labels, g, quad)
        if spot_check_symmetry and k < 8:
            x0 = xs[0]
            v_fwd = g(x0, zp, zm, f.normal)
            v_rev = g(x0, zm, zp, -f.normal)
            if abs(v_fwd - v_rev) > 1e-12 * max(1.0, g.bound):
                raise ContractError(
                    f"integrand {g.name!r} violates the symmetry contract: "
                    f"g(x,a,b,nu)={v_fwd!r} vs g(x,b,a,-nu)={v_rev!r}"
                )
        total += float(vals @ weights)
    return total


def evaluate_functional(
    u,
    g: SurfaceIntegrand,
    quad: QuadratureSpec = QuadratureSpec(),
) -> float:
    """The surface functional of the partition for integrand g."""
    return functional_over_facets(u.facets(), u.labels, g, quad)


# -- built-in integrand registry ---------------------------------------------


def _bbox_max_abs(bbox) -> np.ndarray:
    lo = np.asarray(bbox[: len(bbox) // 2], dtype=float)
    hi = np.asarray(bbox[len(bbox) // 2 :], dtype=float)
    return np.maximum(np.abs(lo), np.abs(hi))


@dataclass
class PolynomialTerm:
    coef: float
    x_powers: tuple
    nu_powers: tuple


def _make_polynomial(terms, labels, bbox, dim) -> SurfaceIntegrand:
    parsed = []
    for t in terms:
        xp = tuple(int(p) for p in t["x_powers"])
        np_ = tuple(int(p) for p in t["nu_powers"])
        if len(xp) != dim or len(np_) != dim:
            raise DomainError(
                f"polynomial term powers must have length {dim}"
            )
        if any(p < 0 for p in xp + np_):
            raise DomainError("polynomial powers must be nonnegative")
        if sum(np_) % 2 != 0:
            raise DomainError(
                "polynomial terms need even total normal degree to satisfy "
                "the symmetry contract"
            )
        parsed.append(PolynomialTerm(float(t["coef"]), xp, np_))

    def fn(x, a, b, nu):
        s = 0.0
        for t in parsed:
            val = t.coef
            for xi, p in zip(x, t.x_powers):
                if p:
                    val *= xi**p
            for ni, p in zip(nu, t.nu_powers):
                if p:
                    val *= ni**p
            s += val
        return s

    xmax = _bbox_max_abs(bbox)
    bound = sum(
        abs(t.coef) * float(np.prod(np.maximum(xmax, 1.0) ** np.array(t.x_powers)))
        for t in parsed
    )
    return SurfaceIntegrand(fn=fn, bound=max(bound, 1e-30), name="poly")


BUILTIN_INTEGRANDS = ("one", "jump", "aniso-x", "smooth-x", "poly")


def make_integrand(
    name: str,
    labels: LabelSet,
    bbox,
    dim: int,
    params: dict | None = None,
) -> SurfaceIntegrand:
    """Build a registry integrand sized to the label set and domain box.

    bbox is (lo..., hi...) with ``dim`` entries each; it is only used to
    compute honest declared bounds for x-dependent integrands.
    """
    params = params or {}
    if name == "one":
        return SurfaceIntegrand(fn=lambda x, a, b, nu: 1.0, bound=1.0, name="one")
    if name == "jump":
        return SurfaceIntegrand(
            fn=lambda x, a, b, nu: float(np.linalg.norm(np.subtract(a, b))),
            bound=labels.max_gap(),
            name="jump",
        )
    if name == "aniso-x":
        return SurfaceIntegrand(
            fn=lambda x, a, b, nu: abs(float(nu[0])), bound=1.0, name="aniso-x"
        )
    if name == "smooth-x":
        xmax = _bbox_max_abs(bbox)
        return SurfaceIntegrand(
            fn=lambda x, a, b, nu: (1.0 + float(x[0]) ** 2)
            * float(np.linalg.norm(np.subtract(a, b))),
            bound=(1.0 + float(xmax[0]) ** 2) * labels.max_gap(),
            name="smooth-x",
        )
    if name == "poly":
        if "terms" not in params:
            raise DomainError("poly integrand needs a 'terms' parameter")
        return _make_polynomial(params["terms"], labels, bbox, dim)
    raise DomainError(
        f"unknown integrand {name!r}; built-ins: {', '.join(BUILTIN_INTEGRANDS)}"
    )
