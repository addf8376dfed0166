"""Command-line front end: validate partition files, evaluate surface
functionals, and run scripted convergence experiments with CSV/JSON reports
and companion figures."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import (
    ContractError,
    DomainError,
    FormatError,
    GeneratorError,
    StructuralError,
)
from .functional import SurfaceIntegrand, evaluate_functional, make_integrand
from .harness import run_convergence_experiment
from .io import REPORT_FORMAT, dumps_json, format_float, load_partition
from .labels import CutoffProfile
from .lifting import (
    LiftingMeasure,
    cutoff_fiber_integral,
    fiber_identity_check,
    polar_identity_check,
    polynomial_battery,
)
from .partitions import embed_partition, jump_set, perimeter, total_variation
from .quadrature import QuadratureSpec
from .scenario import load_scenario

EXIT_OK = 0
EXIT_FINDING = 1
EXIT_USAGE = 2


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("CACCIOPPOLI_JOBS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="caccioppoli",
        description=(
            "Evaluate surface functionals on piecewise-constant label fields "
            "and probe their continuity along converging sequences."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="check a partition file")
    p_val.add_argument("path")
    p_val.set_defaults(func=cmd_validate)

    p_eval = sub.add_parser("eval", help="evaluate a functional on a partition")
    p_eval.add_argument("path")
    p_eval.add_argument("--integrand", default="one")
    p_eval.add_argument("--quad-order", type=int, default=8)
    p_eval.set_defaults(func=cmd_eval)

    p_run = sub.add_parser("run", help="run a scenario file")
    p_run.add_argument("scenario")
    p_run.add_argument("--out", default=None, help="report path")
    p_run.add_argument("--format", choices=("csv", "json"), default=None)
    p_run.add_argument("--quad-order", type=int, default=None)
    p_run.add_argument("--jobs", type=int, default=_default_jobs())
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument(
        "--no-plots",
        action="store_true",
        help="skip the companion PNG figures",
    )
    p_run.set_defaults(func=cmd_run)
    return parser


def cmd_validate(args) -> int:
    u = load_partition(args.path)
    report = u.validate()
    if report.ok:
        print("valid")
        return EXIT_OK
    for line in report.violations:
        print(line)
    return EXIT_FINDING


def _partition_bbox(u):
    return u.interval if u.dim == 1 else u.bounding_box()


def cmd_eval(args) -> int:
    u = load_partition(args.path)
    g = make_integrand(args.integrand, u.labels, _partition_bbox(u), u.dim)
    quad = QuadratureSpec(order=args.quad_order)
    value = evaluate_functional(u, g, quad)
    print("quantity,value")
    print(f"functional[{g.name}],{format_float(value)}")
    print(f"perimeter,{format_float(perimeter(u))}")
    print(f"total_variation,{format_float(total_variation(u))}")
    print(f"facets,{len(jump_set(u))}")
    return EXIT_OK


def _shifted_nonnegative(g: SurfaceIntegrand) -> SurfaceIntegrand:
    # |g| <= bound, so g + bound is a nonnegative integrand
    return SurfaceIntegrand(
        fn=lambda x, a, b, nu, _g=g: _g(x, a, b, nu) + _g.bound,
        bound=2.0 * g.bound,
        name=g.name,
    )


def _lifting_checks(scenario, family, integrands, quad):
    """Identity residuals and cutoff gaps on the family's limit field."""
    limit = family.limit
    lifting = LiftingMeasure(embed_partition(limit))
    battery = polynomial_battery(
        limit.dim,
        family.labels.q,
        seed=scenario.seed,
        bbox=family.bbox(),
    )
    rows = [("polar_residual", polar_identity_check(lifting, battery, quad))]

    fiber_gap = 0.0
    for phi in battery:
        lhs, rhs = fiber_identity_check(
            lifting, lambda X, Y, xi, _p=phi: _p(X, Y) ** 2, quad
        )
        fiber_gap = max(fiber_gap, abs(lhs - rhs))
    rows.append(("fiber_identity_gap", fiber_gap))

    per = perimeter(limit)
    for delta in scenario.deltas:
        profile = CutoffProfile(delta)
        for g in integrands:
            shifted = _shifted_nonnegative(g)
            lhs, _ = cutoff_fiber_integral(
                lifting, profile, shifted, family.labels, quad
            )
            reference = evaluate_functional(limit, shifted, quad)
            gap = lhs - reference
            rows.append((f"cutoff_gap_delta_{delta:g}_{g.name}", gap))
            # the gap is O(delta * perimeter); the slope is delta-independent
            rows.append(
                (
                    f"cutoff_slope_delta_{delta:g}_{g.name}",
                    gap / (delta * per),
                )
            )
    return rows


def _report_to_csv(report, lifting_rows=None) -> str:
    cols = (
        ["n", "l1_gap", "perimeter_gap", "tv_gap"]
        + [f"fgap_{name}" for name in report.integrand_names]
        + ["flag_l1", "flag_strict", "flag_jump_strict"]
    )
    flags = [
        str(report.flags["l1"]).lower(),
        str(report.flags["strict"]).lower(),
        str(report.flags["jump_strict"]).lower(),
    ]
    lines = [",".join(cols)]
    for row in report.rows:
        cells = [
            str(row.n),
            format_float(row.l1_gap),
            format_float(row.perimeter_gap),
            format_float(row.tv_gap),
        ]
        cells += [
            format_float(row.functional_gaps[name])
            for name in report.integrand_names
        ]
        cells += flags
        lines.append(",".join(cells))
    if lifting_rows is not None:
        lines.append("")
        lines.append("check,value")
        for name, value in lifting_rows:
            lines.append(f"{name},{format_float(value)}")
    return "\n".join(lines) + "\n"


def _report_to_dict(scenario, report, lifting_rows=None) -> dict:
    out = {
        "format": REPORT_FORMAT,
        "family": report.family,
        "n_values": [row.n for row in report.rows],
        "seed": scenario.seed,
        "integrands": report.integrand_names,
        "tolerances": report.tolerances,
        "functional_tolerances": report.functional_tolerances,
        "rows": [
            {
                "n": row.n,
                "l1_gap": row.l1_gap,
                "perimeter_gap": row.perimeter_gap,
                "tv_gap": row.tv_gap,
                "functional_gaps": row.functional_gaps,
            }
            for row in report.rows
        ],
        "flags": report.flags,
        "findings": report.findings,
    }
    if lifting_rows is not None:
        out["lifting"] = {name: value for name, value in lifting_rows}
    return out


def cmd_run(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario.seed = args.seed
    quad = scenario.quadrature
    if args.quad_order is not None:
        quad = QuadratureSpec(
            order=args.quad_order, subdivisions=quad.subdivisions
        )
    if args.jobs < 1:
        raise DomainError("--jobs must be >= 1")

    family = scenario.build_family()
    bbox = family.bbox()
    dim = family.limit.dim
    integrands = [
        make_integrand(
            entry["name"],
            family.labels,
            bbox,
            dim,
            params={k: v for k, v in entry.items() if k != "name"},
        )
        for entry in scenario.integrands
    ]

    report = run_convergence_experiment(
        family,
        integrands,
        scenario.n_values,
        quad,
        tolerances=scenario.tolerances,
        jobs=args.jobs,
    )
    lifting_rows = (
        _lifting_checks(scenario, family, integrands, quad)
        if scenario.deltas
        else None
    )

    fmt = args.format or scenario.output
    out_path = Path(args.out or f"caccioppoli-report.{fmt}")
    if fmt == "csv":
        out_path.write_text(_report_to_csv(report, lifting_rows), encoding="utf-8")
    else:
        out_path.write_text(
            dumps_json(_report_to_dict(scenario, report, lifting_rows), indent=2),
            encoding="utf-8",
        )
    written = [str(out_path)]

    if not args.no_plots:
        from . import plots

        stem = out_path.with_suffix("")
        gaps_png = Path(f"{stem}_gaps.png")
        field_png = Path(f"{stem}_field.png")
        plots.render_gap_figure(report, gaps_png)
        plots.render_field_figure(
            family.limit, field_png, title=f"family {report.family}: limit field"
        )
        written += [str(gaps_png), str(field_png)]

    last = report.rows[-1]
    print(
        f"family {report.family}: l1={str(report.flags['l1']).lower()} "
        f"strict={str(report.flags['strict']).lower()} "
        f"jump_strict={str(report.flags['jump_strict']).lower()}"
    )
    print(
        f"final gaps at n={last.n}: l1={format_float(last.l1_gap)} "
        f"perimeter={format_float(last.perimeter_gap)} "
        f"tv={format_float(last.tv_gap)}"
    )
    for name in report.integrand_names:
        print(f"final F-gap[{name}]={format_float(last.functional_gaps[name])}")
    for finding in report.findings:
        print(finding)
    print("wrote " + " ".join(written))
    return EXIT_FINDING if report.findings else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StructuralError, ContractError, GeneratorError) as exc:
        print(f"finding: {exc}", file=sys.stderr)
        return EXIT_FINDING
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
