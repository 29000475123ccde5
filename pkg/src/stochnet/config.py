"""TOML experiment configuration: parsing, validation, defaults.

Sections: [network] (kind: ou-random | mutualistic | matrix-file),
[model] (kind: ou | glv | custom-coefficients, epsilon list, alpha
parameters), [sde] (dt, t_end, record_every, realizations, seed, shared_x0,
x0 range), [output] (directory, formats). Validation errors name the
offending key.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .errors import ConfigError

OU_T_END = 200.0
GLV_T_END = 50.0


@dataclass(frozen=True)
class NetworkConfig:
    kind: str
    n: int = 0
    mu_a: float = 0.0
    incidence: str = ""
    mu_gamma: float = 0.0
    beta_max: float = -0.001
    path: str = ""


@dataclass(frozen=True)
class ModelConfig:
    kind: str
    epsilon: tuple
    mu_alpha: float = 1.0
    b: tuple = ()
    dpq: tuple = ()
    d: tuple = ()


@dataclass(frozen=True)
class SdeConfig:
    dt: float
    t_end: float
    record_every: int
    realizations: int
    seed: int
    shared_x0: bool = False
    x0_min: float = 0.0
    x0_max: float = 1.0


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "run"
    formats: tuple = ("csv", "json")


@dataclass(frozen=True)
class ExperimentConfig:
    network: NetworkConfig
    model: ModelConfig
    sde: SdeConfig
    output: OutputConfig
    base_dir: str = "."
    raw: dict = field(default_factory=dict, repr=False)

    def resolve(self, rel_path: str) -> str:
        if os.path.isabs(rel_path):
            return rel_path
        return os.path.normpath(os.path.join(self.base_dir, rel_path))


def _need(section, key, where, types, default=None, required=False):
    if key not in section:
        if required:
            raise ConfigError(f"missing key {where}.{key}")
        return default
    val = section[key]
    if types is float:
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ConfigError(f"{where}.{key} must be a number")
        return float(val)
    if types is int:
        if isinstance(val, bool) or not isinstance(val, int):
            raise ConfigError(f"{where}.{key} must be an integer")
        return val
    if types is bool:
        if not isinstance(val, bool):
            raise ConfigError(f"{where}.{key} must be a boolean")
        return val
    if types is str:
        if not isinstance(val, str):
            raise ConfigError(f"{where}.{key} must be a string")
        return val
    return val


def load_config(path) -> ExperimentConfig:
    """Parse and validate a TOML experiment file."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config does not parse as TOML: {exc}")
    return validate_config(raw, base_dir=os.path.dirname(os.path.abspath(path)))


def validate_config(raw: dict, base_dir: str = ".") -> ExperimentConfig:
    for section in ("network", "model", "sde"):
        if section not in raw:
            raise ConfigError(f"missing section [{section}]")

    net_raw = raw["network"]
    kind = _need(net_raw, "kind", "network", str, required=True)
    if kind == "ou-random":
        n = _need(net_raw, "n", "network", int, required=True)
        mu_a = _need(net_raw, "mu_a", "network", float, required=True)
        if n < 1:
            raise ConfigError("network.n must be >= 1")
        if mu_a <= 0:
            raise ConfigError("network.mu_a must be positive")
        network = NetworkConfig(kind=kind, n=n, mu_a=mu_a)
    elif kind == "mutualistic":
        incidence = _need(net_raw, "incidence", "network", str, required=True)
        mu_gamma = _need(net_raw, "mu_gamma", "network", float, required=True)
        beta_max = _need(net_raw, "beta_max", "network", float, default=-0.001)
        if beta_max >= 0:
            raise ConfigError("network.beta_max must be negative")
        network = NetworkConfig(
            kind=kind, incidence=incidence, mu_gamma=mu_gamma, beta_max=beta_max
        )
    elif kind == "matrix-file":
        mpath = _need(net_raw, "path", "network", str, required=True)
        network = NetworkConfig(kind=kind, path=mpath)
    else:
        raise ConfigError(f"network.kind {kind!r} is not one of "
                          "ou-random, mutualistic, matrix-file")

    mod_raw = raw["model"]
    mkind = _need(mod_raw, "kind", "model", str, required=True)
    if mkind not in ("ou", "glv", "custom-coefficients"):
        raise ConfigError(f"model.kind {mkind!r} is not one of "
                          "ou, glv, custom-coefficients")
    eps = _need(mod_raw, "epsilon", "model", list, required=True)
    if not isinstance(eps, list) or not eps:
        raise ConfigError("model.epsilon must be a nonempty list")
    for v in eps:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or v < 0:
            raise ConfigError("model.epsilon entries must be numbers >= 0")
    mu_alpha = _need(mod_raw, "mu_alpha", "model", float, default=1.0)
    b = tuple()
    dpq = tuple()
    d = tuple()
    if mkind == "custom-coefficients":
        for key in ("b", "dpq", "d"):
            if key not in mod_raw:
                raise ConfigError(f"missing key model.{key} for custom-coefficients")
        b = tuple(mod_raw["b"])
        dpq = tuple(tuple(row) for row in mod_raw["dpq"])
        d = tuple(mod_raw["d"])
    model = ModelConfig(
        kind=mkind,
        epsilon=tuple(float(v) for v in eps),
        mu_alpha=mu_alpha,
        b=b,
        dpq=dpq,
        d=d,
    )

    sde_raw = raw["sde"]
    default_t_end = GLV_T_END if mkind == "glv" else OU_T_END
    dt = _need(sde_raw, "dt", "sde", float, default=1e-3)
    t_end = _need(sde_raw, "t_end", "sde", float, default=default_t_end)
    record_every = _need(sde_raw, "record_every", "sde", int, default=500)
    realizations = _need(sde_raw, "realizations", "sde", int, required=True)
    seed = _need(sde_raw, "seed", "sde", int, required=True)
    shared_x0 = _need(sde_raw, "shared_x0", "sde", bool, default=False)
    x0_min = _need(sde_raw, "x0_min", "sde", float, default=0.0)
    x0_max = _need(sde_raw, "x0_max", "sde", float, default=1.0)
    if dt <= 0:
        raise ConfigError("sde.dt must be positive")
    if t_end < dt:
        raise ConfigError("sde.t_end must be at least sde.dt")
    if record_every < 1:
        raise ConfigError("sde.record_every must be >= 1")
    if realizations < 1:
        raise ConfigError("sde.realizations must be >= 1")
    if seed < 0:
        raise ConfigError("sde.seed must be a nonnegative integer")
    if not x0_min < x0_max:
        raise ConfigError("sde.x0_min must be below sde.x0_max")
    sde = SdeConfig(
        dt=dt,
        t_end=t_end,
        record_every=record_every,
        realizations=realizations,
        seed=seed,
        shared_x0=shared_x0,
        x0_min=x0_min,
        x0_max=x0_max,
    )

    out_raw = raw.get("output", {})
    directory = _need(out_raw, "directory", "output", str, default="run")
    formats = out_raw.get("formats", ["csv", "json"])
    if not isinstance(formats, list) or not all(isinstance(f, str) for f in formats):
        raise ConfigError("output.formats must be a list of strings")
    output = OutputConfig(directory=directory, formats=tuple(formats))

    cfg = ExperimentConfig(
        network=network,
        model=model,
        sde=sde,
        output=output,
        base_dir=base_dir,
        raw=raw,
    )
    if network.kind == "mutualistic":
        inc_path = cfg.resolve(network.incidence)
        if not os.path.exists(inc_path):
            raise ConfigError(f"network.incidence file not found: {inc_path}")
    if network.kind == "matrix-file":
        mat_path = cfg.resolve(network.path)
        if not os.path.exists(mat_path):
            raise ConfigError(f"network.path file not found: {mat_path}")
    return cfg
