"""Scenario description files: schema, validation, bundled examples.

A scenario JSON document looks like

    {
      "name": "warped-circle",
      "n": 1,
      "L": 16,
      "spin_structure": ["antiperiodic"],
      "circumferences": ["2*pi"],
      "metric": {"kind": "constant_diagonal", "scales": ["1 + 0.3*sin(t)"]},
      "lapse": {"kind": "time_only", "value": "1", "bounds": [0.5, 2.0]},
      "time": {"kind": "circle", "T_per": "2*pi", "Nt": 16,
               "spin_structure": "antiperiodic"},
      "signature": "riemannian",
      "algebra": ["cos(x1)"]
    }

Numeric fields accept either JSON numbers or constant expression strings from
the documented grammar (so exact multiples of pi survive serialization).
Interval time uses {"kind": "interval", "range": [T0, T1], "Nt": ...} and
Dirichlet-cutoff centered differences instead of the Fourier circle.
Validation errors carry the JSON path of the offending field.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .clifford import Signature
from .expressions import Expression, ExpressionError, parse_number
from .lattice import (ANTIPERIODIC, PERIODIC, LapseFamily, MetricFamily, SpatialGrid)

__all__ = ["ScenarioError", "TimeSpec", "Scenario", "load_scenario", "bundled_scenario_path",
           "bundled_scenario_names"]


class ScenarioError(ValueError):
    """Invalid scenario input; ``field`` names the offending JSON path."""

    def __init__(self, message: str, field: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _get(data: dict, key: str, path: str, required: bool = True, default=None):
    if key not in data:
        if required:
            raise ScenarioError("missing required field", f"{path}{key}")
        return default
    return data[key]


def _number(value, path: str) -> float:
    try:
        return parse_number(value, what=path)
    except ExpressionError as exc:
        raise ScenarioError(str(exc), path) from None


def _expression(value, path: str) -> Expression:
    try:
        return Expression.parse(value)
    except ExpressionError as exc:
        raise ScenarioError(str(exc), path) from None


@dataclass(frozen=True)
class TimeSpec:
    kind: str  # "circle" | "interval"
    num_nodes: int
    period: float | None = None
    t_range: tuple[float, float] | None = None
    spin_structure: str = ANTIPERIODIC

    @property
    def start(self) -> float:
        return 0.0 if self.kind == "circle" else self.t_range[0]

    @property
    def extent(self) -> float:
        return self.period if self.kind == "circle" else self.t_range[1] - self.t_range[0]

    def nodes(self):
        import numpy as np
        if self.kind == "circle":
            return self.start + np.arange(self.num_nodes) * (self.period / self.num_nodes)
        return np.linspace(self.t_range[0], self.t_range[1], self.num_nodes)


@dataclass(frozen=True)
class Scenario:
    name: str
    n: int
    points_per_axis: int
    circumferences: tuple[float, ...]
    spin_structure: tuple[str, ...]
    metric: MetricFamily
    lapse: LapseFamily
    time: TimeSpec
    signature: Signature
    algebra: tuple[Expression, ...]

    def spatial_grid(self) -> SpatialGrid:
        return SpatialGrid(n=self.n, points_per_axis=self.points_per_axis,
                           circumferences=self.circumferences,
                           spin_structure=self.spin_structure)

    def time_nodes(self):
        return self.time.nodes()

    @property
    def timescale(self) -> float:
        return self.time.extent

    def with_resolution(self, points_per_axis: int | None = None,
                        num_time_nodes: int | None = None) -> "Scenario":
        time = self.time
        if num_time_nodes is not None:
            time = dataclasses.replace(time, num_nodes=int(num_time_nodes))
        return dataclasses.replace(
            self,
            points_per_axis=int(points_per_axis or self.points_per_axis),
            time=time,
        )

    def with_signature(self, signature: Signature) -> "Scenario":
        return dataclasses.replace(self, signature=signature)

    def with_lapse(self, lapse: LapseFamily) -> "Scenario":
        return dataclasses.replace(self, lapse=lapse)


def _parse_metric(data, n: int, path: str) -> MetricFamily:
    if not isinstance(data, dict):
        raise ScenarioError("expected an object", path)
    kind = _get(data, "kind", f"{path}.")
    scales = _get(data, "scales", f"{path}.")
    if not isinstance(scales, list) or len(scales) != n:
        raise ScenarioError(f"expected a list of {n} scale expressions", f"{path}.scales")
    exprs = tuple(_expression(s, f"{path}.scales[{j}]") for j, s in enumerate(scales))
    try:
        return MetricFamily(n=n, kind=str(kind), scale_exprs=exprs)
    except ValueError as exc:
        raise ScenarioError(str(exc), path) from None


def _parse_lapse(data, path: str) -> LapseFamily:
    if data is None:
        return LapseFamily.constant(1.0)
    if not isinstance(data, dict):
        raise ScenarioError("expected an object", path)
    kind = str(_get(data, "kind", f"{path}.", required=False, default="time_only"))
    expr = _expression(_get(data, "value", f"{path}."), f"{path}.value")
    bounds_raw = _get(data, "bounds", f"{path}.", required=False)
    bounds = None
    if bounds_raw is not None:
        if not isinstance(bounds_raw, list) or len(bounds_raw) != 2:
            raise ScenarioError("expected [N1, N2]", f"{path}.bounds")
        bounds = (_number(bounds_raw[0], f"{path}.bounds[0]"),
                  _number(bounds_raw[1], f"{path}.bounds[1]"))
    try:
        return LapseFamily(kind=kind, expr=expr, bounds=bounds)
    except ValueError as exc:
        raise ScenarioError(str(exc), path) from None


def _parse_time(data, path: str) -> TimeSpec:
    if not isinstance(data, dict):
        raise ScenarioError("expected an object", path)
    kind = str(_get(data, "kind", f"{path}."))
    num_nodes = _get(data, "Nt", f"{path}.")
    if not isinstance(num_nodes, int) or num_nodes < 1:
        raise ScenarioError("Nt must be a positive integer", f"{path}.Nt")
    ss = str(_get(data, "spin_structure", f"{path}.", required=False, default=ANTIPERIODIC))
    if ss not in (PERIODIC, ANTIPERIODIC):
        raise ScenarioError(f"unknown spin structure {ss!r}", f"{path}.spin_structure")
    if kind == "circle":
        period = _number(_get(data, "T_per", f"{path}."), f"{path}.T_per")
        if period <= 0:
            raise ScenarioError("period must be positive", f"{path}.T_per")
        return TimeSpec(kind="circle", num_nodes=num_nodes, period=period, spin_structure=ss)
    if kind == "interval":
        rng = _get(data, "range", f"{path}.")
        if not isinstance(rng, list) or len(rng) != 2:
            raise ScenarioError("expected [T0, T1]", f"{path}.range")
        t0 = _number(rng[0], f"{path}.range[0]")
        t1 = _number(rng[1], f"{path}.range[1]")
        if not t1 > t0:
            raise ScenarioError("range must be increasing", f"{path}.range")
        if num_nodes < 3:
            raise ScenarioError("interval time needs Nt >= 3", f"{path}.Nt")
        return TimeSpec(kind="interval", num_nodes=num_nodes, t_range=(t0, t1), spin_structure=ss)
    raise ScenarioError(f"unknown time kind {kind!r}", f"{path}.kind")


def load_scenario(source) -> Scenario:
    """Load and validate a scenario: a path, a JSON string, or a dict."""
    if isinstance(source, (str, Path)):
        p = Path(source)
        if p.exists():
            data = json.loads(p.read_text())
        else:
            try:
                data = json.loads(str(source))
            except json.JSONDecodeError:
                raise ScenarioError(f"no such scenario file {source!r}", "scenario") from None
    elif isinstance(source, dict):
        data = source
    else:
        raise ScenarioError(f"unsupported scenario source {type(source).__name__}", "scenario")
    if not isinstance(data, dict):
        raise ScenarioError("scenario document must be a JSON object", "scenario")

    n = _get(data, "n", "")
    if not isinstance(n, int) or n < 1 or n % 2 == 0:
        raise ScenarioError("spatial dimension must be a positive odd integer", "n")
    pts = _get(data, "L", "")
    if not isinstance(pts, int) or pts < 4:
        raise ScenarioError("L must be an integer >= 4", "L")

    circ_raw = _get(data, "circumferences", "", required=False,
                    default=["2*pi"] * n)
    if not isinstance(circ_raw, list) or len(circ_raw) != n:
        raise ScenarioError(f"expected {n} entries", "circumferences")
    circumferences = tuple(_number(c, f"circumferences[{j}]") for j, c in enumerate(circ_raw))
    if any(c <= 0 for c in circumferences):
        raise ScenarioError("circumferences must be positive", "circumferences")

    ss_raw = _get(data, "spin_structure", "", required=False, default=[ANTIPERIODIC] * n)
    if isinstance(ss_raw, str):
        ss_raw = [ss_raw] * n
    if not isinstance(ss_raw, list) or len(ss_raw) != n:
        raise ScenarioError(f"expected {n} entries", "spin_structure")
    for j, s in enumerate(ss_raw):
        if s not in (PERIODIC, ANTIPERIODIC):
            raise ScenarioError(f"unknown spin structure {s!r}", f"spin_structure[{j}]")

    metric = _parse_metric(_get(data, "metric", ""), n, "metric")
    lapse = _parse_lapse(data.get("lapse"), "lapse")
    time = _parse_time(_get(data, "time", ""), "time")

    sig_raw = str(_get(data, "signature", "", required=False, default="riemannian")).lower()
    try:
        signature = Signature.parse(sig_raw)
    except ValueError as exc:
        raise ScenarioError(str(exc), "signature") from None

    algebra_raw = _get(data, "algebra", "", required=False, default=["cos(x1)"])
    if not isinstance(algebra_raw, list):
        raise ScenarioError("expected a list of expressions", "algebra")
    algebra = tuple(_expression(a, f"algebra[{j}]") for j, a in enumerate(algebra_raw))
    for j, a in enumerate(algebra):
        if a.depends_on("t"):
            raise ScenarioError("algebra elements must be time-independent", f"algebra[{j}]")

    name = str(data.get("name", "scenario"))
    return Scenario(name=name, n=n, points_per_axis=pts, circumferences=circumferences,
                    spin_structure=tuple(ss_raw), metric=metric, lapse=lapse, time=time,
                    signature=signature, algebra=algebra)


def bundled_scenario_names() -> list[str]:
    root = resources.files("foliated_dirac").joinpath("scenarios")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def bundled_scenario_path(name: str) -> Path:
    """Resolve a bundled scenario by short name (e.g. ``flat_t2_riemannian``)."""
    fname = name if name.endswith(".json") else f"{name}.json"
    root = resources.files("foliated_dirac").joinpath("scenarios")
    target = root.joinpath(fname)
    if not target.is_file():
        raise ScenarioError(
            f"unknown bundled scenario {name!r}; available: {', '.join(bundled_scenario_names())}",
            "scenario")
    return Path(str(target))
