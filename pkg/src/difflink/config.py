"""Experiment configuration.

Configs are JSON objects; every key is optional and unknown keys are
rejected. Nested sections are addressed with dotted keys in overrides,
e.g. ``sils.rho=0.006``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from pathlib import Path

ALGORITHMS = ("atc", "esls", "sils")
SCENARIOS = ("static", "time_varying")
DEFAULT_SILS_RHO = {"static": 4e-3, "time_varying": 6e-3}


class ConfigError(ValueError):
    def __init__(self, field_name, message):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


@dataclass
class SilsConfig:
    rho: float | None = None  # None resolves to the scenario default
    epsilon: float = 10.0
    persist_coeffs: bool = False
    clamp: bool = False


@dataclass
class EslsConfig:
    renormalize: bool = True
    require_self: bool = False
    max_neighborhood: int = 12


@dataclass
class TopologyConfig:
    radius: float = 0.35
    edge_list: str | None = None


@dataclass
class ExperimentConfig:
    scenario: str = "static"
    n_nodes: int = 20
    filter_len: int = 10
    step_size: float = 0.045
    noise_var: float | list = 0.001
    runs: int = 100
    iterations: int = 1000
    seed: int = 7
    algorithms: list = field(default_factory=lambda: list(ALGORITHMS))
    sils: SilsConfig = field(default_factory=SilsConfig)
    esls: EslsConfig = field(default_factory=EslsConfig)
    topology: TopologyConfig = field(default_factory=TopologyConfig)
    ar_coeff_range: list = field(default_factory=lambda: [0.0, 0.5])
    markov_std: float = 1e-3
    complex_valued: bool = True
    batch_size: int = 25
    workers: int = 1
    trace: bool = False
    output_dir: str = "results"

    @property
    def sils_rho(self) -> float:
        if self.sils.rho is not None:
            return self.sils.rho
        return DEFAULT_SILS_RHO[self.scenario]

    def to_dict(self) -> dict:
        return asdict(self)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _positive(name, value, allow_zero=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(name, f"expected a number, got {value!r}")
    if value < 0 or (value == 0 and not allow_zero):
        bound = "non-negative" if allow_zero else "positive"
        raise ConfigError(name, f"must be {bound}, got {value!r}")


def _integer(name, value, minimum=1):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(name, f"expected an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(name, f"must be at least {minimum}, got {value}")


def _boolean(name, value):
    if not isinstance(value, bool):
        raise ConfigError(name, f"expected true or false, got {value!r}")


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    if cfg.scenario not in SCENARIOS:
        raise ConfigError("scenario", f"must be one of {SCENARIOS}, got {cfg.scenario!r}")
    _integer("n_nodes", cfg.n_nodes)
    _integer("filter_len", cfg.filter_len)
    _integer("runs", cfg.runs)
    _integer("iterations", cfg.iterations)
    _integer("batch_size", cfg.batch_size)
    _integer("workers", cfg.workers)
    _integer("seed", cfg.seed, minimum=0)
    _positive("step_size", cfg.step_size)
    _positive("markov_std", cfg.markov_std, allow_zero=True)
    if isinstance(cfg.noise_var, list):
        if len(cfg.noise_var) != cfg.n_nodes:
            raise ConfigError("noise_var", f"per-node list needs {cfg.n_nodes} entries, "
                                           f"got {len(cfg.noise_var)}")
        for v in cfg.noise_var:
            _positive("noise_var", v, allow_zero=True)
    else:
        _positive("noise_var", cfg.noise_var, allow_zero=True)
    if not cfg.algorithms:
        raise ConfigError("algorithms", "must name at least one algorithm")
    for a in cfg.algorithms:
        if a not in ALGORITHMS:
            raise ConfigError("algorithms", f"unknown algorithm {a!r}; choose from {ALGORITHMS}")
    if len(set(cfg.algorithms)) != len(cfg.algorithms):
        raise ConfigError("algorithms", "duplicate entries")
    lo_hi = cfg.ar_coeff_range
    if (not isinstance(lo_hi, list) or len(lo_hi) != 2
            or not 0 <= lo_hi[0] <= lo_hi[1] < 1):
        raise ConfigError("ar_coeff_range", f"need [lo, hi] with 0 <= lo <= hi < 1, got {lo_hi!r}")
    if cfg.sils.rho is not None:
        _positive("sils.rho", cfg.sils.rho, allow_zero=True)
    _positive("sils.epsilon", cfg.sils.epsilon)
    _boolean("sils.persist_coeffs", cfg.sils.persist_coeffs)
    _boolean("sils.clamp", cfg.sils.clamp)
    _boolean("esls.renormalize", cfg.esls.renormalize)
    _boolean("esls.require_self", cfg.esls.require_self)
    _integer("esls.max_neighborhood", cfg.esls.max_neighborhood)
    _positive("topology.radius", cfg.topology.radius)
    if cfg.topology.radius > 2 ** 0.5:
        raise ConfigError("topology.radius", f"must not exceed sqrt(2), got {cfg.topology.radius}")
    _boolean("complex_valued", cfg.complex_valued)
    _boolean("trace", cfg.trace)
    return cfg


def _build(cls, data: dict, prefix=""):
    if not isinstance(data, dict):
        raise ConfigError(prefix.rstrip(".") or "<root>", f"expected an object, got {data!r}")
    known = {f.name: f for f in fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in known:
            raise ConfigError(prefix + key, "unknown key")
        default = known[key].default_factory() if callable(known[key].default_factory) else None
        if is_dataclass(default):
            value = _build(type(default), value, prefix + key + ".")
        if isinstance(value, tuple):
            value = list(value)
        kwargs[key] = value
    return cls(**kwargs)


def from_dict(data: dict) -> ExperimentConfig:
    return validate(_build(ExperimentConfig, data))


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(data: dict, overrides) -> dict:
    """Apply ``key=value`` strings (dotted keys for sections) to a raw dict."""
    data = json.loads(json.dumps(data))
    for item in overrides:
        if "=" not in item:
            raise ConfigError(item, "override must look like key=value")
        key, text = item.split("=", 1)
        parts = key.strip().split(".")
        target = data
        for p in parts[:-1]:
            target = target.setdefault(p, {})
            if not isinstance(target, dict):
                raise ConfigError(key, "not a section")
        target[parts[-1]] = _parse_value(text.strip())
    return data


def load_config(path=None, overrides=()) -> ExperimentConfig:
    data = {}
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
        if text.strip():
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigError(str(path), f"invalid JSON: {exc}") from exc
    return from_dict(apply_overrides(data, overrides))
