"""TOML campaign configuration and ``--fault`` overrides."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .sim.campaign import Campaign, default_campaign
from .sim.physics import GripperConfig
from .sim.trial import Faults


class ConfigError(ValueError):
    pass


FAULT_ALIASES = {
    "overpressure": "overpressure",
    "degradation": "degradation_slope",
    "degradation_slope": "degradation_slope",
    "collision": "collision_bug",
    "collision_bug": "collision_bug",
    "speed": "speed_violation",
    "speed_violation": "speed_violation",
}

_TUPLE_FIELDS = {"pressure_limits_pa", "flow_limits_m3s"}


@dataclass(frozen=True)
class RunConfig:
    gripper: GripperConfig = field(default_factory=GripperConfig)
    seed: int = 0
    trials_per_class: int = 100
    hours_horizon: float = 100.0
    sample_period_s: float = 0.01
    faults: Faults = field(default_factory=Faults)

    def campaign(self) -> Campaign:
        c = default_campaign(self.seed, self.trials_per_class, self.faults, self.gripper, self.hours_horizon)
        return dataclasses.replace(c, sample_period_s=self.sample_period_s)

    def to_dict(self) -> dict:
        gripper = dataclasses.asdict(self.gripper)
        return {
            "gripper": {k: list(v) if isinstance(v, tuple) else v for k, v in gripper.items()},
            "campaign": {"seed": self.seed, "trials_per_class": self.trials_per_class,
                         "hours_horizon": self.hours_horizon, "sample_period_s": self.sample_period_s},
            "faults": self.faults.as_dict(),
        }

    def digest(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _bool(key: str, value: Any) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.lower() in ("1", "true", "yes", "on"):
        return True
    if isinstance(value, str) and value.lower() in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"fault {key} expects true/false, got {value!r}")


def _float(where: str, value: Any) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"{where} expects a number, got {value!r}")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{where} expects a number, got {value!r}") from None


def parse_faults(table: dict, base: Faults = Faults()) -> Faults:
    values = base.as_dict()
    for key, raw in table.items():
        name = FAULT_ALIASES.get(key)
        if name is None:
            raise ConfigError(f"unknown fault {key!r} (known: {', '.join(sorted(set(FAULT_ALIASES.values())))})")
        if name == "degradation_slope":
            v = _float(f"fault {key}", raw)
            if v < 0:
                raise ConfigError("degradation slope must be non-negative")
            values[name] = v
        else:
            values[name] = _bool(key, raw)
    return Faults(**values)


def parse_fault_flags(flags: Iterable[str], base: Faults = Faults()) -> Faults:
    table = {}
    for flag in flags:
        key, sep, value = flag.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"--fault expects key=value, got {flag!r}")
        table[key.strip()] = value.strip()
    return parse_faults(table, base)


def _gripper(table: dict) -> GripperConfig:
    known = {f.name for f in dataclasses.fields(GripperConfig)}
    kwargs = {}
    for key, value in table.items():
        if key not in known:
            raise ConfigError(f"unknown gripper parameter {key!r}")
        if key in _TUPLE_FIELDS:
            if not isinstance(value, list) or len(value) != 2:
                raise ConfigError(f"{key} expects [lo, hi]")
            kwargs[key] = (_float(key, value[0]), _float(key, value[1]))
        elif isinstance(value, dict):
            kwargs[key] = {str(k): _float(f"{key}.{k}", v) for k, v in value.items()}
        else:
            kwargs[key] = _float(key, value)
    cfg = GripperConfig(**kwargs)
    try:
        cfg.validate()
    except ValueError as e:
        raise ConfigError(str(e)) from None
    return cfg


def parse_config(text: str) -> RunConfig:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"invalid TOML: {e}") from None
    unknown = set(data) - {"gripper", "campaign", "faults"}
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    camp = data.get("campaign", {})
    extra = set(camp) - {"seed", "trials_per_class", "hours_horizon", "sample_period_s"}
    if extra:
        raise ConfigError(f"unknown campaign key(s): {', '.join(sorted(extra))}")
    seed = camp.get("seed", 0)
    trials = camp.get("trials_per_class", 100)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError("campaign.seed must be a non-negative integer")
    if not isinstance(trials, int) or isinstance(trials, bool) or trials < 1:
        raise ConfigError("campaign.trials_per_class must be a positive integer")
    horizon = _float("campaign.hours_horizon", camp.get("hours_horizon", 100.0))
    period = _float("campaign.sample_period_s", camp.get("sample_period_s", 0.01))
    if horizon <= 0 or period <= 0:
        raise ConfigError("campaign.hours_horizon and campaign.sample_period_s must be positive")
    return RunConfig(_gripper(data.get("gripper", {})), seed, trials, horizon, period,
                     parse_faults(data.get("faults", {})))


def load_config(path) -> RunConfig:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {p}") from None
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"cannot read config {p}: {e}") from None
    return parse_config(text)
