"""Declarative experiment configurations stored as TOML."""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..errors import ConfigError
from ..models import Cir, Gbm, ModelSpec, Vasicek
from ..ode import Tolerances, resolve_tolerances

KINDS = ("pce_convergence", "comparison", "beta_sweep")


@dataclass(frozen=True)
class PceSettings:
    p_min: int = 1
    p_max: int = 15
    tolerances: Tolerances = field(default_factory=lambda: resolve_tolerances("standard"))
    nodes: Optional[int] = None
    quantile_sample: int = 5000
    gammas: tuple = (0.99, 0.999)
    parallel: bool = False

    @property
    def degrees(self) -> range:
        return range(self.p_min, self.p_max + 1)


@dataclass(frozen=True)
class QuantileStudy:
    gammas: tuple = (0.99, 0.999)
    M: int = 5000
    repeats: int = 200


@dataclass(frozen=True)
class SizeRange:
    log2_min: int = 8
    log2_max: int = 16
    vectorized: bool = False

    @property
    def sizes(self) -> list:
        return [1 << k for k in range(self.log2_min, self.log2_max + 1)]


@dataclass(frozen=True)
class BetaSweep:
    exp_min: float = -5.0
    exp_max: float = -1.0
    per_decade: int = 2
    p: int = 15

    @property
    def betas(self) -> list:
        n = int(round((self.exp_max - self.exp_min) * self.per_decade)) + 1
        return [10.0 ** (self.exp_min + k / self.per_decade) for k in range(n)]


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a model family swept over volatilities plus method settings."""

    name: str
    kind: str
    models: tuple
    seed: int = 0
    description: str = ""
    output: Optional[str] = None
    pce: Optional[PceSettings] = None
    quantile_study: Optional[QuantileStudy] = None
    mc: Optional[SizeRange] = None
    qmc: Optional[SizeRange] = None
    path_steps: int = 200
    beta_sweep: Optional[BetaSweep] = None
    raw: dict = field(default_factory=dict, repr=False, compare=False)

    def with_overrides(self, seed: Optional[int] = None, nodes: Optional[int] = None,
                       parallel: Optional[bool] = None) -> "ExperimentConfig":
        cfg = self
        raw = json.loads(json.dumps(self.raw))
        if seed is not None:
            cfg = replace(cfg, seed=int(seed))
            raw["seed"] = int(seed)
        if cfg.pce is not None and (nodes is not None or parallel is not None):
            pce = cfg.pce
            if nodes is not None:
                pce = replace(pce, nodes=int(nodes))
                raw.setdefault("pce", {})["nodes"] = int(nodes)
            if parallel is not None:
                pce = replace(pce, parallel=bool(parallel))
            cfg = replace(cfg, pce=pce)
        return replace(cfg, raw=raw)

    def config_hash(self) -> str:
        canon = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()


def _get(table: dict, key: str, typ, default=None, required=False):
    if key not in table:
        if required:
            raise ConfigError(f"missing required key {key!r}")
        return default
    value = table[key]
    if typ is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, typ) or isinstance(value, bool) and typ is not bool:
        raise ConfigError(f"key {key!r} must be {typ.__name__}, got {value!r}")
    return value


def _sigmas(table: dict) -> list:
    raw = table.get("sigma")
    if raw is None:
        raise ConfigError("model.sigma is required")
    values = raw if isinstance(raw, list) else [raw]
    if not values:
        raise ConfigError("model.sigma must not be empty")
    return [float(v) for v in values]


def _models(table: dict) -> tuple:
    kind = _get(table, "type", str, required=True).lower()
    out = []
    try:
        for s in _sigmas(table):
            if kind == "gbm":
                out.append(Gbm(_get(table, "r", float, required=True), s,
                               _get(table, "s0", float, required=True), _get(table, "T", float, required=True)))
            elif kind == "vasicek":
                out.append(Vasicek(_get(table, "alpha", float, required=True), _get(table, "beta", float, required=True),
                                   s, _get(table, "r0", float, required=True), _get(table, "T", float, required=True)))
            elif kind == "cir":
                beta = _get(table, "beta", float, required=True)
                r0 = _get(table, "r0", float, required=True)
                T = _get(table, "T", float, required=True)
                if "q" in table:
                    out.append(Cir.with_dof(_get(table, "q", float), beta, s, r0, T))
                else:
                    out.append(Cir(_get(table, "alpha", float, required=True), beta, s, r0, T))
            else:
                raise ConfigError(f"unknown model type {kind!r}")
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"invalid model parameters: {exc}") from exc
    return tuple(out)


def _gammas(values) -> tuple:
    g = tuple(float(v) for v in values)
    if not g or not all(0.0 < v < 1.0 for v in g):
        raise ConfigError(f"quantile levels must be a non-empty subset of (0, 1), got {values!r}")
    return g


def _pce(t: dict) -> PceSettings:
    p_min = _get(t, "p_min", int, 1)
    p_max = _get(t, "p_max", int, 15)
    if not 0 <= p_min <= p_max:
        raise ConfigError(f"need 0 <= p_min <= p_max, got {p_min}, {p_max}")
    try:
        tol = resolve_tolerances(t.get("tolerances", "standard"))
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    nodes = _get(t, "nodes", int, 0) or None
    return PceSettings(p_min, p_max, tol, nodes, _get(t, "quantile_sample", int, 5000),
                       _gammas(t.get("gammas", [0.99, 0.999])), _get(t, "parallel", bool, False))


def _sizes(t: dict) -> SizeRange:
    lo, hi = _get(t, "log2_min", int, 8), _get(t, "log2_max", int, 16)
    if not 1 <= lo <= hi <= 24:
        raise ConfigError(f"need 1 <= log2_min <= log2_max <= 24, got {lo}, {hi}")
    return SizeRange(lo, hi, _get(t, "vectorized", bool, False))


def parse_config(data: dict, name: Optional[str] = None) -> ExperimentConfig:
    """Validate a parsed TOML document and build an `ExperimentConfig`."""
    name = data.get("name", name)
    if not name:
        raise ConfigError("experiment needs a name")
    kind = _get(data, "kind", str, required=True)
    if kind not in KINDS:
        raise ConfigError(f"kind must be one of {KINDS}, got {kind!r}")
    if "model" not in data:
        raise ConfigError("missing [model] table")
    models = _models(data["model"])
    pce = _pce(data["pce"]) if "pce" in data else None
    qs = None
    if "quantile_study" in data:
        t = data["quantile_study"]
        qs = QuantileStudy(_gammas(t.get("gammas", [0.99, 0.999])), _get(t, "M", int, 5000),
                           _get(t, "repeats", int, 200))
        if qs.M < 2 or qs.repeats < 2:
            raise ConfigError("quantile study needs M >= 2 and repeats >= 2")
    mc = _sizes(data["mc"]) if "mc" in data else None
    qmc = _sizes(data["qmc"]) if "qmc" in data else None
    sweep = None
    if "beta_sweep" in data:
        t = data["beta_sweep"]
        sweep = BetaSweep(_get(t, "exp_min", float, -5.0), _get(t, "exp_max", float, -1.0),
                          _get(t, "per_decade", int, 2), _get(t, "p", int, 15))
        if not (sweep.exp_min <= sweep.exp_max and sweep.per_decade >= 1):
            raise ConfigError("beta_sweep range is empty")
    steps = _get(data.get("paths", {}), "steps", int, 200)

    if kind == "pce_convergence" and pce is None:
        raise ConfigError("pce_convergence needs a [pce] table")
    if kind == "comparison" and sum(x is not None for x in (pce, mc, qmc)) < 2:
        raise ConfigError("comparison needs at least two of [pce], [mc], [qmc]")
    if kind == "beta_sweep":
        if sweep is None:
            raise ConfigError("beta_sweep needs a [beta_sweep] table")
        if not all(isinstance(m, Vasicek) for m in models):
            raise ConfigError("beta_sweep applies to the Vasicek model only")
    seed = _get(data, "seed", int, 0)
    return ExperimentConfig(name, kind, models, seed, _get(data, "description", str, ""),
                            data.get("output"), pce, qs, mc, qmc, steps, sweep, raw=data)


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parse_config(data, path.stem)


def _bundled():
    return resources.files("pce_sde").joinpath("experiments")


def list_experiments() -> list:
    """Names of the experiment configurations shipped with the package."""
    return sorted(p.name[:-5] for p in _bundled().iterdir() if p.name.endswith(".toml"))


def resolve_config(source: str) -> ExperimentConfig:
    """Load `source` as a file path, falling back to a bundled experiment name."""
    path = Path(source)
    if path.is_file():
        return load_config(path)
    entry = _bundled().joinpath(path.stem + ".toml")
    if entry.is_file():
        data = tomllib.loads(entry.read_text())
        return parse_config(data, path.stem)
    raise ConfigError(f"no config file or bundled experiment named {source!r}")
