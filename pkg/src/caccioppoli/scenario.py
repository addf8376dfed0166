"""Scenario files: a declarative description of one convergence experiment."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import FormatError
from .harness import FAMILY_NAMES, make_family
from .io import SCENARIO_FORMAT, _require_keys
from .labels import LabelSet
from .quadrature import QuadratureSpec

_TOLERANCE_KEYS = ("l1", "perimeter", "tv", "functional_scale")


@dataclass
class Scenario:
    family_name: str
    n_values: list
    seed: int
    r: float = 0.5
    proxy_m: int = 1024
    labels: object = None  # LabelSet or None for the family default
    integrands: list = field(default_factory=lambda: [{"name": "one"}])
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    deltas: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    output: str = "csv"

    def build_family(self):
        return make_family(
            self.family_name, r=self.r, proxy_m=self.proxy_m, labels=self.labels
        )


def scenario_from_dict(d: dict) -> Scenario:
    if not isinstance(d, dict):
        raise FormatError("scenario file must contain a JSON object")
    if d.get("format") != SCENARIO_FORMAT:
        raise FormatError(
            f"unsupported scenario format {d.get('format')!r}; "
            f"expected {SCENARIO_FORMAT!r}"
        )
    _require_keys(
        d,
        ("format", "family", "seed"),
        ("integrands", "quadrature", "deltas", "tolerances", "output"),
        where="scenario file",
    )

    fam = d["family"]
    if not isinstance(fam, dict):
        raise FormatError("scenario 'family' must be an object")
    _require_keys(
        fam,
        ("name", "n_values"),
        ("r", "proxy_m", "labels"),
        where="scenario family",
    )
    name = fam["name"]
    if name not in FAMILY_NAMES:
        raise FormatError(
            f"unknown family {name!r}; known: {', '.join(FAMILY_NAMES)}"
        )
    n_values = fam["n_values"]
    if (
        not isinstance(n_values, list)
        or len(n_values) < 2
        or not all(isinstance(n, int) for n in n_values)
    ):
        raise FormatError("family n_values must be a list of >= 2 integers")

    labels = None
    if "labels" in fam:
        try:
            labels = LabelSet(fam["labels"])
        except Exception as exc:
            raise FormatError(f"bad family labels: {exc}") from exc

    integrands = d.get("integrands", [{"name": "one"}])
    if not isinstance(integrands, list) or not integrands:
        raise FormatError("scenario 'integrands' must be a nonempty list")
    for entry in integrands:
        if not isinstance(entry, dict):
            raise FormatError("each integrand must be an object")
        _require_keys(entry, ("name",), ("terms",), where="scenario integrand")

    quad_d = d.get("quadrature", {})
    if not isinstance(quad_d, dict):
        raise FormatError("scenario 'quadrature' must be an object")
    _require_keys(quad_d, (), ("order", "subdivisions"), where="scenario quadrature")
    quad = QuadratureSpec(
        order=int(quad_d.get("order", 8)),
        subdivisions=int(quad_d.get("subdivisions", 1)),
    )

    deltas = d.get("deltas", [])
    if not isinstance(deltas, list) or not all(
        isinstance(x, (int, float)) for x in deltas
    ):
        raise FormatError("scenario 'deltas' must be a list of numbers")

    tolerances = d.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise FormatError("scenario 'tolerances' must be an object")
    _require_keys(tolerances, (), _TOLERANCE_KEYS, where="scenario tolerances")

    seed = d["seed"]
    if not isinstance(seed, int):
        raise FormatError("scenario 'seed' must be an integer")

    output = d.get("output", "csv")
    if output not in ("csv", "json"):
        raise FormatError(f"scenario 'output' must be csv or json, got {output!r}")

    return Scenario(
        family_name=name,
        n_values=list(n_values),
        seed=seed,
        r=float(fam.get("r", 0.5)),
        proxy_m=int(fam.get("proxy_m", 1024)),
        labels=labels,
        integrands=integrands,
        quadrature=quad,
        deltas=[float(x) for x in deltas],
        tolerances={k: float(v) for k, v in tolerances.items()},
        output=output,
    )


def load_scenario(path) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fp:
            data = json.load(fp)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    return scenario_from_dict(data)
