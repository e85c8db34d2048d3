"""Convention ledger: the signs and factor fixed by the pinning oracles."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from ..errors import ConfigError, ConventionUnpinned


@dataclass(frozen=True)
class Conventions:
    alternator_factor: float = 0.5
    curvature_sign: int = -1
    covariant_derivative_sign: int = 1

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"


def save_ledger(conv: Conventions, path) -> None:
    Path(path).write_text(conv.to_json())


def load_ledger(path) -> Conventions:
    if path is None or not Path(path).exists():
        raise ConventionUnpinned(
            "coupling and curvature suites need a convention ledger; run the pin_conventions suite first")
    try:
        d = json.loads(Path(path).read_text())
        conv = Conventions(float(d["alternator_factor"]), int(d["curvature_sign"]),
                           int(d["covariant_derivative_sign"]))
    except (KeyError, ValueError, TypeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"malformed convention ledger {path}: {exc}") from exc
    if conv.curvature_sign not in (1, -1) or conv.covariant_derivative_sign not in (1, -1):
        raise ConfigError("ledger signs must be +1 or -1")
    return conv
