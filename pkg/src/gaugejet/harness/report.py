"""Verification reports and their JSON / CSV serializations."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field


@dataclass
class CheckResult:
    scenario: str
    suite: str
    check: str
    tolerance: float
    residuals: list = field(repr=False)

    @property
    def trials(self) -> int:
        return len(self.residuals)

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0

    @property
    def mean_residual(self) -> float:
        return sum(self.residuals) / len(self.residuals) if self.residuals else 0.0

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def summary(self, residuals: bool = False) -> dict:
        d = {"scenario": self.scenario, "suite": self.suite, "check": self.check,
             "trials": self.trials, "max_residual": self.max_residual,
             "mean_residual": self.mean_residual, "tolerance": self.tolerance,
             "pass": self.passed}
        if residuals:
            d["residuals"] = [float(r) for r in self.residuals]
        return d


@dataclass
class Report:
    seed: int
    conventions: dict | None
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    wall_time_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and not any(
            n.get("fatal") for n in self.notes)

    def suites(self, residuals: bool = False) -> dict:
        """Per (scenario, suite): aggregate max residual, trials, pass and per-check summaries."""
        out = {}
        for c in self.checks:
            key = f"{c.scenario}/{c.suite}"
            agg = out.setdefault(key, {"scenario": c.scenario, "suite": c.suite,
                                       "max_residual": 0.0, "trials": 0, "pass": True,
                                       "checks": []})
            agg["max_residual"] = max(agg["max_residual"], c.max_residual)
            agg["trials"] = max(agg["trials"], c.trials)
            agg["pass"] = agg["pass"] and c.passed
            agg["checks"].append(c.summary(residuals))
        return out

    def to_dict(self, include_timing: bool = False, residuals: bool = False) -> dict:
        d = {"seed": self.seed, "conventions": self.conventions, "pass": self.passed,
             "suites": self.suites(residuals), "notes": self.notes}
        if include_timing:
            d["wall_time_s"] = self.wall_time_s
        return d


def emit(report: Report, fmt: str = "json", include_timing: bool = False,
         residuals: bool = False) -> str:
    """Serialize a report. Output is byte-stable for identical inputs unless
    timing is requested. ``residuals`` embeds every trial residual in the JSON
    so that :func:`report_from_json` can rebuild the report exactly."""
    if fmt == "json":
        d = report.to_dict(include_timing, residuals)
        return json.dumps(d, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["scenario", "suite", "trial", "residual"])
        for c in report.checks:
            for i, r in enumerate(c.residuals):
                w.writerow([c.scenario, f"{c.suite}.{c.check}", i, repr(float(r))])
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def parse_csv(text: str) -> list:
    """Rows of a residual CSV as (scenario, suite, trial, residual) tuples."""
    rows = list(csv.reader(io.StringIO(text)))
    return [(s, su, int(t), float(r)) for s, su, t, r in rows[1:]]


def parse_json(text: str) -> dict:
    return json.loads(text)


def report_from_json(text: str) -> Report:
    """Inverse of ``emit(report, "json", residuals=True)``."""
    d = json.loads(text)
    checks = []
    for agg in d["suites"].values():
        for c in agg["checks"]:
            if "residuals" not in c:
                raise ValueError("report was emitted without residuals")
            checks.append(CheckResult(c["scenario"], c["suite"], c["check"], c["tolerance"],
                                      list(c["residuals"])))
    return Report(d["seed"], d["conventions"], checks, d["notes"], d.get("wall_time_s", 0.0))
