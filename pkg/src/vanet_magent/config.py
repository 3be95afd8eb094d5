"""Scenario configuration: a JSON document validated against a strict schema.

Absent keys take the defaults below, unknown keys are rejected, and every
violation is reported at once with its dotted key path.
"""

from __future__ import annotations

import json
import os
from typing import Literal, Union

import pydantic
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import BadConfig, ConfigNotFound, ParseError, ValidationError
from .net import NodeId
from .road import placement_sites

_PATH = "<path>"


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", strict=True, frozen=True)


class FloatRange(_Strict):
    min: float
    max: float

    @model_validator(mode="after")
    def _ordered(self):
        if self.min > self.max:
            raise ValueError(f"{_PATH}.min ({self.min}) > {_PATH}.max ({self.max})")
        return self


class SpeedRange(FloatRange):
    min: float = Field(5.0, ge=0)
    max: float = Field(15.0, ge=0)


class LoadRange(FloatRange):
    min: float = Field(0.0, ge=0, le=1)
    max: float = Field(0.5, ge=0, le=1)


class GridConfig(_Strict):
    rows: int = Field(5, ge=1)
    cols: int = Field(5, ge=1)
    block_m: float = Field(250.0, gt=0)


class VehiclesConfig(_Strict):
    count: int = Field(30, ge=0)
    speed_mps: SpeedRange = SpeedRange()


class DfaConfig(_Strict):
    placement: Union[str, list[int]] = "every:6"


class RadioConfig(_Strict):
    range_m: float = Field(250.0, gt=0)
    base_latency_ms: int = Field(5, gt=0)


class PerKindInt(_Strict):
    dfa: int = Field(ge=0)
    vehicle: int = Field(ge=0)


class PerKindFloat(_Strict):
    dfa: float = Field(ge=0, le=1)
    vehicle: float = Field(ge=0, le=1)


class NodesConfig(_Strict):
    bandwidth_kbps: Union[int, PerKindInt] = PerKindInt(dfa=4000, vehicle=2000)
    buffer_bytes: Union[int, PerKindInt] = 65536
    load_fraction: LoadRange = LoadRange()
    jitter_ms: Union[int, PerKindInt] = 2
    loss_rate: Union[float, PerKindFloat] = 0.01

    @model_validator(mode="after")
    def _bounds(self):
        for name in ("bandwidth_kbps", "buffer_bytes", "jitter_ms", "loss_rate"):
            for v in _per_kind_values(getattr(self, name)):
                if v < 0 or (name == "bandwidth_kbps" and v <= 0) or (name == "loss_rate" and v > 1):
                    raise ValueError(f"{_PATH}.{name} out of range: {v}")
        return self


def _per_kind_values(v):
    return (v.dfa, v.vehicle) if isinstance(v, BaseModel) else (v,)


def per_kind(v, kind: str):
    return getattr(v, kind) if isinstance(v, BaseModel) else v


class CodeBytes(_Strict):
    DFA: int = Field(4000, ge=0)
    FPA: int = Field(1000, ge=0)
    RPA: int = Field(1000, ge=0)
    IVA: int = Field(2000, ge=0)
    OA: int = Field(800, ge=0)
    IFA: int = Field(1200, ge=0)


class AgentsConfig(_Strict):
    code_bytes: CodeBytes = CodeBytes()
    state_bytes_per_entry: int = Field(64, ge=0)


class DiscoveryConfig(_Strict):
    hop_budget: int = Field(5, ge=1)
    period_ms: int = Field(10_000, gt=0)
    table_cap: int = Field(8, ge=0)
    cache_cap: int = Field(16, ge=1)
    stale_periods: int = Field(3, ge=0)


class MobilityConfig(_Strict):
    tick_ms: int = Field(1000, gt=0)


class AlertEvent(_Strict):
    time_ms: int = Field(ge=0)
    origin: str
    category: Literal["accident", "jam", "weather", "vehicle-trace"]
    body: str = ""
    hop_budget: int = Field(10, ge=1)


class QosConfig(_Strict):
    min_bandwidth_kbps: int = Field(0, ge=0)
    max_delay_ms: int = Field(10**9, ge=0)
    max_jitter_ms: int = Field(10**9, ge=0)
    max_loss_rate: float = Field(1.0, ge=0, le=1)


class QueryEvent(_Strict):
    time_ms: int = Field(ge=0)
    origin: str
    key: str
    hop_budget: int = Field(4, ge=1)
    qos: QosConfig = QosConfig()


class AlgorithmsConfig(_Strict):
    fpa_dfa_check_first: bool = False


class MigrationConfig(_Strict):
    loss_on_link_break: bool = False
    retry_limit: int = Field(3, ge=0)
    retry_spacing_ms: int = Field(500, gt=0)


class BenchTaskConfig(_Strict):
    n: int = Field(4, ge=1)
    q: int = Field(500, ge=0)
    s: int = Field(500, ge=0)
    c: int = Field(2000, ge=0)
    u: int = Field(100, ge=0)
    L: int = Field(10, ge=0)
    p: int = Field(5, ge=0)
    k: int = Field(2, ge=1)

    @model_validator(mode="after")
    def _k(self):
        if self.k > self.n:
            raise ValueError(f"{_PATH}.k ({self.k}) > {_PATH}.n ({self.n})")
        return self


class BenchConfig(_Strict):
    tasks: list[BenchTaskConfig] = [BenchTaskConfig()]


class ScenarioConfig(_Strict):
    seed: int = Field(1, ge=0, lt=2**64)
    duration_ms: int = Field(60_000, ge=0)
    grid: GridConfig = GridConfig()
    vehicles: VehiclesConfig = VehiclesConfig()
    dfa: DfaConfig = DfaConfig()
    radio: RadioConfig = RadioConfig()
    nodes: NodesConfig = NodesConfig()
    agents: AgentsConfig = AgentsConfig()
    discovery: DiscoveryConfig = DiscoveryConfig()
    mobility: MobilityConfig = MobilityConfig()
    alerts: list[AlertEvent] = []
    queries: list[QueryEvent] = []
    info: dict[str, list[str]] = {}
    algorithms: AlgorithmsConfig = AlgorithmsConfig()
    migration: MigrationConfig = MigrationConfig()
    bench: BenchConfig = BenchConfig()

    @model_validator(mode="after")
    def _cross_checks(self):
        problems = []
        n_cells = self.grid.rows * self.grid.cols
        try:
            sites = placement_sites(self.dfa.placement, n_cells)
        except BadConfig as e:
            problems.append(f"dfa.placement: {e}")
            sites = None
        n_dfa = None if sites is None else len(sites)
        if sites is not None:
            if not sites:
                problems.append("dfa.placement: selects no intersections")
            if any(not 0 <= i < n_cells for i in sites):
                problems.append("dfa.placement: index outside the grid")
            if len(set(sites)) != len(sites):
                problems.append("dfa.placement: duplicate intersection index")
        if n_cells < 2:
            problems.append("grid: a 1x1 grid has no street segments")

        def check_node(path, text, dfa_only=False):
            try:
                node = NodeId.parse(text)
            except ValueError as e:
                problems.append(f"{path}: {e}")
                return
            if dfa_only and not node.is_dfa:
                problems.append(f"{path}: must name a DFA node")
            limit = n_dfa if node.is_dfa else self.vehicles.count
            if limit is not None and node.index >= limit:
                problems.append(f"{path}: {text} does not exist")

        for i, a in enumerate(self.alerts):
            check_node(f"alerts.{i}.origin", a.origin)
        for i, q in enumerate(self.queries):
            check_node(f"queries.{i}.origin", q.origin, dfa_only=True)
        for key in self.info:
            check_node(f"info.{key}", key, dfa_only=True)
        if problems:
            raise ValueError("\n".join(problems))
        return self

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2) + "\n"


def _format_errors(err: pydantic.ValidationError) -> list[str]:
    out = []
    for e in err.errors():
        path = ".".join(str(p) for p in e["loc"])
        msg = e["msg"]
        if msg.startswith("Value error, "):
            msg = msg[len("Value error, "):]
        if _PATH in msg or "\n" in msg:
            for line in msg.splitlines():
                out.append(line.replace(_PATH, path) if _PATH in line else line)
        else:
            out.append(f"{path or '<root>'}: {msg}")
    return out


def config_from_dict(data: dict) -> ScenarioConfig:
    try:
        return ScenarioConfig.model_validate(data)
    except pydantic.ValidationError as e:
        raise ValidationError(_format_errors(e)) from None


def loads_config(text: str) -> ScenarioConfig:
    if not text.strip():
        return ScenarioConfig()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", 1, 1)
    return config_from_dict(data)


def parse_config(path) -> ScenarioConfig:
    if not os.path.isfile(path):
        raise ConfigNotFound(f"config file not found: {path}")
    with open(path) as fh:
        return loads_config(fh.read())
