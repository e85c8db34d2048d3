"""Scenario configuration for the verification harness."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

from ..bundles import FIBER_KINDS
from ..errors import ConfigError
from ..lie import GROUP_NAMES

SUITES = ("axioms", "prop21", "prop22", "thm41", "thm42", "appendix",
          "curvature_oracle", "pin_conventions")
LEDGER_SUITES = ("thm41", "thm42", "curvature_oracle")

# per-check tolerances on the scaled residual |lhs - rhs| / max(1, |rhs|)
DEFAULT_TOLERANCES = {
    "axioms": 1e-12,
    "prop21": 1e-10,
    "prop22": 1e-9,
    "prop22.semiholonomy": 1e-12,
    "prop22.holonomy": 1e-12,
    "thm41": 1e-9,
    "thm42": 1e-9,
    "appendix.invariance": 1e-11,
    "appendix.roundtrip": 1e-12,
    "appendix.morphism": 1e-10,
    "curvature_oracle": 1e-9,
    "pin_conventions": 1e-9,
}
ABSOLUTE_KEYS = ("axioms", "prop22.semiholonomy", "prop22.holonomy", "appendix.roundtrip")


@dataclass(frozen=True)
class Degrees:
    bisection: int = 2
    connection: int = 2
    section: int = 2


@dataclass(frozen=True)
class Scenario:
    name: str
    n: int
    group: str
    fiber: str = "linear"
    trials: int = 100
    degrees: Degrees = field(default_factory=Degrees)

    def validate(self) -> "Scenario":
        if self.n not in (1, 2, 3):
            raise ConfigError(f"{self.name}: base dimension must be 1, 2 or 3")
        if self.group not in GROUP_NAMES:
            raise ConfigError(f"{self.name}: unknown group {self.group!r}")
        if self.fiber not in FIBER_KINDS:
            raise ConfigError(f"{self.name}: unknown fiber {self.fiber!r}")
        for k, v in asdict(self.degrees).items():
            if not (isinstance(v, int) and 0 <= v <= 4):
                raise ConfigError(f"{self.name}: degree {k} must be an int in 0..4")
        if not (isinstance(self.trials, int) and self.trials >= 1):
            raise ConfigError(f"{self.name}: trials must be >= 1")
        return self


@dataclass(frozen=True)
class HarnessConfig:
    scenarios: tuple
    suites: tuple = SUITES
    seed: int = 0
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    ledger: str | None = None

    def tolerance(self, suite: str, check: str) -> float:
        key = f"{suite}.{check}"
        if key in self.tolerances:
            tol = self.tolerances[key]
        else:
            tol = self.tolerances.get(suite, DEFAULT_TOLERANCES.get(suite, 1e-9))
        env = os.environ.get("GG_TOL_REL")
        if env is not None and key not in ABSOLUTE_KEYS and suite not in ABSOLUTE_KEYS:
            tol = float(env)
        return tol


def _scenario(d: dict, idx: int) -> Scenario:
    if not isinstance(d, dict):
        raise ConfigError("each scenario must be an object")
    known = {"name", "n", "group", "fiber", "trials", "degrees"}
    extra = set(d) - known
    if extra:
        raise ConfigError(f"unknown scenario keys: {sorted(extra)}")
    try:
        deg = Degrees(**d.get("degrees", {}))
        return Scenario(name=d.get("name", f"scenario{idx}"), n=d["n"], group=d["group"],
                        fiber=d.get("fiber", "linear"), trials=d.get("trials", 100),
                        degrees=deg).validate()
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"bad scenario {idx}: {exc}") from exc


def config_from_dict(d: dict) -> HarnessConfig:
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    raw = d.get("scenarios")
    if raw is None:
        body = {k: v for k, v in d.items() if k not in ("suites", "seed", "tolerances", "ledger")}
        raw = [body]
    if not raw:
        raise ConfigError("config lists no scenarios")
    scen = tuple(_scenario(s, i) for i, s in enumerate(raw))
    suites = d.get("suites", list(SUITES))
    if suites == "all":
        suites = list(SUITES)
    for s in suites:
        if s not in SUITES:
            raise ConfigError(f"unknown suite {s!r}")
    seed = d.get("seed", 0)
    if not (isinstance(seed, int) and 0 <= seed < 2**64):
        raise ConfigError("seed must be an unsigned 64-bit integer")
    tols = dict(DEFAULT_TOLERANCES)
    tols.update(d.get("tolerances", {}))
    return HarnessConfig(scen, tuple(suites), seed, tols, d.get("ledger"))


def load_config(path) -> HarnessConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    cfg = config_from_dict(data)
    if cfg.ledger is not None and not os.path.isabs(cfg.ledger):
        cfg = HarnessConfig(cfg.scenarios, cfg.suites, cfg.seed, cfg.tolerances,
                            str(Path(path).resolve().parent / cfg.ledger))
    return cfg
