"""JSON run configuration with strict key checking.

Example::

    {
      "domain": {"type": "ball", "N": 3},
      "weight": {"type": "constant", "c": 1.0},
      "nonlinearity": {"type": "pure_power", "p": 3},
      "solver": {"rel_tol": 1e-10, "abs_tol": 1e-10, "datum_range": [0.01, 10000.0]},
      "task": {"k": [1, 2, 3, 4], "c2": 1.0, "energy_caps": [10, 100, 1000]},
      "output": {"dir": "out", "svg": false}
    }

Every section except ``domain``, ``weight`` and ``nonlinearity`` is optional.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

from . import model
from .errors import RadnodalError
from .radial_ode import IntegrationOptions


class ConfigError(RadnodalError, ValueError):
    pass


_DOMAIN_KEYS = {"ball": {"type", "N"}, "annulus": {"type", "N", "a", "b"}}
_WEIGHT_KEYS = {
    "constant": {"type", "c"},
    "power_law": {"type", "c", "alpha"},
    "exponential": {"type", "c", "beta"},
}
_NL_KEYS = {
    "pure_power": {"type", "p"},
    "power_sum": {"type", "p", "q", "lam"},
    "linear": {"type"},
}


def _strict(section: str, data, allowed):
    if not isinstance(data, dict):
        raise ConfigError(f"section '{section}' must be an object")
    for key in data:
        if key not in allowed:
            where = "top level" if not section else f"section '{section}'"
            raise ConfigError(f"unknown key '{key}' at {where} (allowed: {', '.join(sorted(allowed))})")


def _typed(section, data, table):
    _strict(section, data, set().union(*table.values()))
    kind = data.get("type")
    if kind not in table:
        raise ConfigError(f"section '{section}': unknown type {kind!r} (choose from {', '.join(table)})")
    _strict(section, data, table[kind])
    return kind


@dataclass
class SolverConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-10
    origin_offset: float = 1e-6
    escape_bound: Optional[float] = None
    max_steps: int = 200_000
    boundary_tol: float = 1e-8
    datum_range: list = field(default_factory=lambda: [1e-2, 1e4])
    sweep_points: int = 64


@dataclass
class TaskConfig:
    k: list = field(default_factory=lambda: [1, 2, 3, 4, 5, 6, 7, 8])
    energy_caps: list = field(default_factory=lambda: [1e1, 1e2, 1e3, 1e4, 1e5, 1e6])
    c1: Optional[float] = None
    c2: float = 1.0
    sigma: Optional[float] = None
    fit_mode: str = "shifted"
    fit_k_range: Optional[list] = None
    levels_file: Optional[str] = None


@dataclass
class OutputConfig:
    dir: str = "out"
    svg: bool = False


def _section(cls, name, data):
    data = data or {}
    _strict(name, data, {f.name for f in fields(cls)})
    try:
        return cls(**data)
    except TypeError as exc:
        raise ConfigError(f"section '{name}': {exc}") from None


@dataclass
class RunConfig:
    domain: dict
    weight: dict
    nonlinearity: dict
    solver: SolverConfig = field(default_factory=SolverConfig)
    task: TaskConfig = field(default_factory=TaskConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    @classmethod
    def from_dict(cls, data) -> "RunConfig":
        _strict("", data, {f.name for f in fields(cls)})
        for required in ("domain", "weight", "nonlinearity"):
            if required not in data:
                raise ConfigError(f"missing required section '{required}'")
        _typed("domain", data["domain"], _DOMAIN_KEYS)
        _typed("weight", data["weight"], _WEIGHT_KEYS)
        _typed("nonlinearity", data["nonlinearity"], _NL_KEYS)
        cfg = cls(
            domain=dict(data["domain"]),
            weight=dict(data["weight"]),
            nonlinearity=dict(data["nonlinearity"]),
            solver=_section(SolverConfig, "solver", data.get("solver")),
            task=_section(TaskConfig, "task", data.get("task")),
            output=_section(OutputConfig, "output", data.get("output")),
        )
        cfg.problem()  # surface model invariant violations at parse time
        cfg.options()
        return cfg

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "RunConfig":
        with open(path) as fh:
            return cls.from_json(fh.read())

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def problem(self) -> model.ProblemSpec:
        d, w, n = self.domain, self.weight, self.nonlinearity
        try:
            if d["type"] == "ball":
                dom = model.Ball(d["N"])
            else:
                dom = model.Annulus(d["N"], d["a"], d["b"])
            if w["type"] == "constant":
                wt = model.ConstantWeight(w.get("c", 1.0))
            elif w["type"] == "power_law":
                wt = model.PowerLawWeight(w.get("c", 1.0), w["alpha"])
            else:
                wt = model.ExponentialWeight(w.get("c", 1.0), w["beta"])
            if n["type"] == "pure_power":
                nl = model.PurePower(n["p"])
            elif n["type"] == "power_sum":
                nl = model.PowerSum(n["p"], n["q"], n.get("lam", 1.0))
            else:
                nl = model.Linear()
            return model.ProblemSpec(dom, wt, nl)
        except KeyError as exc:
            raise ConfigError(f"missing key {exc}") from None
        except model.ModelError as exc:
            raise ConfigError(str(exc)) from None

    def options(self) -> IntegrationOptions:
        s = self.solver
        try:
            return IntegrationOptions(
                rel_tol=s.rel_tol, abs_tol=s.abs_tol, origin_offset=s.origin_offset,
                escape_bound=s.escape_bound, max_steps=s.max_steps, boundary_tol=s.boundary_tol,
            )
        except model.ModelError as exc:
            raise ConfigError(f"section 'solver': {exc}") from None
