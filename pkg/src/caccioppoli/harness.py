"""Convergence experiments: gap tables, verdict flags, and theorem findings.

A sequence family packages a generator n -> partition, its limit field, and
closed-form interface facts.  The experiment computes, per n, the L1 gap to
the limit and the gaps of interface measure, total variation, and each
surface functional, then classifies the convergence mode with an explicitly
heuristic rule: a gap series "converges" when its last value is below
tolerance and the last three values are non-increasing.  Numerical data
cannot certify a limit; the flags are diagnostics, not proofs.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import DomainError, GeneratorError
from .functional import evaluate_functional
from .generators import (
    THREE_LEVELS,
    TWO_LEVELS,
    gen_inscribed_polygon,
    gen_sawtooth,
    gen_staircase,
    gen_vanishing_slab,
    sawtooth_limit,
    staircase_limit,
    vanishing_slab_limit,
)
from .labels import LabelSet
from .partitions import l1_distance, perimeter, total_variation
from .quadrature import QuadratureSpec

CLOSED_FORM_TOL = 1e-10


@dataclass
class SequenceFamily:
    """A named sequence of partitions with its limit and analytic facts."""

    name: str
    labels: LabelSet
    generator: object  # n -> Partition
    limit: object  # Partition
    closed_forms: dict = field(default_factory=dict)  # quantity -> n -> float|None
    limit_facts: dict = field(default_factory=dict)  # quantity -> float
    exact_interfaces: bool = False  # perim/tv gaps are exactly constant

    def bbox(self):
        if self.limit.dim == 1:
            return self.limit.interval
        return self.limit.bounding_box()

    def default_tolerances(self) -> dict:
        """Gap tolerances sized to the family's closed-form rates."""
        scale = self.limit.domain_measure() * self.labels.max_gap()
        lim_perim = max(perimeter(self.limit), 1e-12)
        lim_tv = max(total_variation(self.limit), 1e-12)
        if self.exact_interfaces:
            perim_tol, tv_tol = 1e-8, 1e-8
        else:
            perim_tol, tv_tol = 1e-3 * lim_perim, 1e-3 * lim_tv
        return {
            "l1": 2e-2 * scale,
            "perimeter": perim_tol,
            "tv": tv_tol,
            "functional_scale": 5e-3,
        }


@dataclass
class ConvergenceRow:
    n: int
    l1_gap: float
    perimeter_gap: float
    tv_gap: float
    functional_gaps: dict


@dataclass
class ConvergenceReport:
    family: str
    integrand_names: list
    rows: list
    tolerances: dict
    functional_tolerances: dict
    flags: dict
    findings: list
    limit_values: dict

    @property
    def ok(self) -> bool:
        return not self.findings


def _series_converges(series, tol) -> bool:
    if series[-1] >= tol:
        return False
    tail = series[-3:]
    slack = 1e-12 * max(1.0, max(abs(v) for v in series))
    return all(b <= a + slack for a, b in zip(tail, tail[1:]))


def _check_closed_form(family, quantity, n, computed):
    form = family.closed_forms.get(quantity)
    if form is None:
        return
    expected = form(n)
    if expected is None:
        return
    if abs(expected - computed) > CLOSED_FORM_TOL * max(1.0, abs(expected)):
        raise GeneratorError(
            f"family {family.name!r}: computed {quantity}={computed!r} at n={n} "
            f"but the recorded closed form gives {expected!r}"
        )


def _row_for_n(family, n, integrands, quad, limit_vals):
    u = family.generator(n)
    per = perimeter(u)
    tv = total_variation(u)
    l1 = l1_distance(u, family.limit)
    _check_closed_form(family, "perimeter", n, per)
    _check_closed_form(family, "total_variation", n, tv)
    _check_closed_form(family, "l1_gap", n, l1)
    fgaps = {
        g.name: abs(evaluate_functional(u, g, quad) - limit_vals[g.name])
        for g in integrands
    }
    return ConvergenceRow(
        n=n,
        l1_gap=l1,
        perimeter_gap=abs(per - limit_vals["perimeter"]),
        tv_gap=abs(tv - limit_vals["tv"]),
        functional_gaps=fgaps,
    )


def run_convergence_experiment(
    family: SequenceFamily,
    integrands: list,
    n_values: list,
    quad: QuadratureSpec = QuadratureSpec(),
    tolerances: dict | None = None,
    jobs: int = 1,
) -> ConvergenceReport:
    """Gap table plus verdict flags for one family and integrand battery.

    The verdict hierarchy is monotone by construction: jump_strict implies
    strict implies l1.  When the jump_strict flag is set, every functional
    gap at the largest n must clear its tolerance; a miss is recorded as a
    THEOREM-VIOLATION finding (a bug or under-resolved quadrature, not new
    mathematics).
    """
    if len(n_values) < 2 or any(
        b <= a for a, b in zip(n_values, n_values[1:])
    ):
        raise DomainError("n_values must be increasing with at least 2 entries")
    names = [g.name for g in integrands]
    if len(set(names)) != len(names):
        raise DomainError("integrand names must be unique")

    tol = family.default_tolerances()
    if tolerances:
        tol.update(tolerances)

    limit_vals = {
        "perimeter": perimeter(family.limit),
        "tv": total_variation(family.limit),
    }
    for g in integrands:
        limit_vals[g.name] = evaluate_functional(family.limit, g, quad)
    for quantity, key in (("perimeter", "perimeter"), ("total_variation", "tv")):
        fact = family.limit_facts.get(quantity)
        if fact is not None and abs(fact - limit_vals[key]) > CLOSED_FORM_TOL * max(
            1.0, abs(fact)
        ):
            raise GeneratorError(
                f"family {family.name!r}: limit {quantity} is {limit_vals[key]!r}, "
                f"recorded fact is {fact!r}"
            )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_row_for_n, family, n, integrands, quad, limit_vals)
                for n in n_values
            ]
            rows = [f.result() for f in futures]
    else:
        rows = [
            _row_for_n(family, n, integrands, quad, limit_vals) for n in n_values
        ]

    l1_ok = _series_converges([r.l1_gap for r in rows], tol["l1"])
    tv_ok = _series_converges([r.tv_gap for r in rows], tol["tv"])
    perim_ok = _series_converges([r.perimeter_gap for r in rows], tol["perimeter"])
    flags = {
        "l1": l1_ok,
        "strict": l1_ok and tv_ok,
        "jump_strict": l1_ok and tv_ok and perim_ok,
    }

    lim_perim = max(limit_vals["perimeter"], 1e-12)
    func_tol = {
        g.name: tol["functional_scale"] * g.bound * lim_perim for g in integrands
    }
    findings = []
    if flags["jump_strict"]:
        for g in integrands:
            gap = rows[-1].functional_gaps[g.name]
            if not gap < func_tol[g.name]:
                findings.append(
                    "THEOREM-VIOLATION: family "
                    f"{family.name!r} converges jump-strictly but integrand "
                    f"{g.name!r} has functional gap {gap!r} at n={rows[-1].n} "
                    f"(tolerance {func_tol[g.name]!r})"
                )

    return ConvergenceReport(
        family=family.name,
        integrand_names=names,
        rows=rows,
        tolerances=tol,
        functional_tolerances=func_tol,
        flags=flags,
        findings=findings,
        limit_values=limit_vals,
    )


# -- shipped family registry ---------------------------------------------------


def _norm(a, b, labels):
    return labels.pair_distance(a, b)


def make_family(name: str, r: float = 0.5, proxy_m: int = 1024, labels=None):
    """Build a shipped family by CLI name.

    Names: remark, slab, ngon, sawtooth-const, sawtooth-shrink.
    """
    if name == "remark":
        Z = THREE_LEVELS if labels is None else labels
        if Z.q != 3:
            raise DomainError("the staircase family needs exactly 3 labels")
        return SequenceFamily(
            name=name,
            labels=Z,
            generator=lambda n: gen_staircase(n, Z),
            limit=staircase_limit(Z),
            closed_forms={
                "perimeter": lambda n: 2.0,
                "total_variation": lambda n: _norm(0, 1, Z) + _norm(1, 2, Z),
                "l1_gap": lambda n: (_norm(0, 2, Z) + _norm(1, 2, Z)) / n,
            },
            limit_facts={
                "perimeter": 1.0,
                "total_variation": _norm(0, 2, Z),
            },
            exact_interfaces=True,
        )
    if name == "slab":
        Z = THREE_LEVELS if labels is None else labels
        if Z.q != 3:
            raise DomainError("the slab family needs exactly 3 labels")
        return SequenceFamily(
            name=name,
            labels=Z,
            generator=lambda n: gen_vanishing_slab(n, Z),
            limit=vanishing_slab_limit(Z),
            closed_forms={
                "perimeter": lambda n: 2.0,
                "total_variation": lambda n: _norm(0, 1, Z) + _norm(1, 2, Z),
                "l1_gap": lambda n: (_norm(0, 2, Z) + _norm(1, 2, Z)) / n,
            },
            limit_facts={
                "perimeter": 1.0,
                "total_variation": _norm(0, 2, Z),
            },
            exact_interfaces=True,
        )
    if name == "ngon":
        Z = TWO_LEVELS if labels is None else labels
        if Z.q != 2:
            raise DomainError("the inscribed-polygon family needs 2 labels")
        dz = _norm(0, 1, Z)

        def ngon_l1(n):
            if proxy_m % n != 0:
                return None  # no closed form unless the vertices nest
            area_m = 0.5 * proxy_m * r * r * math.sin(2.0 * math.pi / proxy_m)
            area_n = 0.5 * n * r * r * math.sin(2.0 * math.pi / n)
            return dz * (area_m - area_n)

        return SequenceFamily(
            name=name,
            labels=Z,
            generator=lambda n: gen_inscribed_polygon(n, r, Z),
            limit=gen_inscribed_polygon(proxy_m, r, Z),
            closed_forms={
                "perimeter": lambda n: 2.0 * n * r * math.sin(math.pi / n),
                "total_variation": lambda n: dz
                * 2.0
                * n
                * r
                * math.sin(math.pi / n),
                "l1_gap": ngon_l1,
            },
            limit_facts={
                "perimeter": 2.0 * proxy_m * r * math.sin(math.pi / proxy_m),
                "total_variation": dz
                * 2.0
                * proxy_m
                * r
                * math.sin(math.pi / proxy_m),
            },
        )
    if name in ("sawtooth-const", "sawtooth-shrink"):
        Z = TWO_LEVELS if labels is None else labels
        if Z.q != 2:
            raise DomainError("the sawtooth families need 2 labels")
        dz = _norm(0, 1, Z)
        rule = "constant_slope" if name == "sawtooth-const" else "shrinking"
        # the centered zigzag strays |x - 1/2| <= a/2, so the symmetric
        # difference with the flat interface has area a/4
        if rule == "constant_slope":
            length = lambda n: math.sqrt(2.0)  # noqa: E731
            l1_form = lambda n: dz / (8.0 * n)  # noqa: E731
        else:
            length = lambda n: math.sqrt(1.0 + 1.0 / n**2)  # noqa: E731
            l1_form = lambda n: dz / (8.0 * n * n)  # noqa: E731
        return SequenceFamily(
            name=name,
            labels=Z,
            generator=lambda n: gen_sawtooth(n, rule, Z),
            limit=sawtooth_limit(Z),
            closed_forms={
                "perimeter": length,
                "total_variation": lambda n: dz * length(n),
                "l1_gap": l1_form,
            },
            limit_facts={"perimeter": 1.0, "total_variation": dz},
        )
    raise DomainError(
        f"unknown family {name!r}; known: remark, slab, ngon, "
        "sawtooth-const, sawtooth-shrink"
    )


FAMILY_NAMES = ("remark", "slab", "ngon", "sawtooth-const", "sawtooth-shrink")
