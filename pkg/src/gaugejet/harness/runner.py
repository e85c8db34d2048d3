"""Runs configured suites over their scenarios and assembles a report."""
from __future__ import annotations

import time
from dataclasses import asdict, replace

from ..errors import ConventionUnpinned
from ..randomgen import rng_for
from .config import SUITES, LEDGER_SUITES, HarnessConfig, Scenario
from .conventions import Conventions, load_ledger, save_ledger
from .report import CheckResult, Report
from .suites import SUITE_FUNCS, Context


def run_suite(name: str, scn: Scenario, cfg: HarnessConfig, scenario_index: int = 0,
              conventions: Conventions | None = None) -> list:
    """All trials of one suite on one scenario; returns CheckResults."""
    ctx = Context.build(scn, conventions)
    fn = SUITE_FUNCS[name]
    suite_index = SUITES.index(name)
    per_check: dict = {}
    for t in range(scn.trials):
        rng = rng_for(cfg.seed, scenario_index, suite_index, t)
        for check, r in fn(ctx, rng).items():
            per_check.setdefault(check, []).append(float(r))
    return [CheckResult(scn.name, name, check, cfg.tolerance(name, check), res)
            for check, res in per_check.items()]


def pin_conventions(cfg: HarnessConfig):
    """Pick the unique sign candidates that pass over all scenarios.

    Returns (Conventions or None, CheckResults, notes).
    """
    results = []
    for i, scn in enumerate(cfg.scenarios):
        results.extend(run_suite("pin_conventions", scn, cfg, i))
    tol = cfg.tolerance("pin_conventions", "")
    worst: dict = {}
    for r in results:
        worst[r.check] = max(worst.get(r.check, 0.0), r.max_residual)
    chosen, notes = {}, []
    for key in ("covariant_derivative_sign", "bracket_sign", "curvature_sign"):
        winners = [s for s in (1, -1) if worst.get(f"{key}={s:+d}", float("inf")) <= tol]
        if not winners:
            notes.append({"fatal": True, "message": f"{key}: no candidate passes"})
        elif len(winners) > 1:
            notes.append({"fatal": True, "message": f"{key}: both signs pass; the scenarios do "
                          "not discriminate (use a non-abelian group with n >= 2)"})
        else:
            chosen[key] = winners[0]
    if chosen.get("bracket_sign", 1) != 1:
        notes.append({"fatal": True, "message": "curvature bracket enters with a minus sign"})
    # pin outcome is reported as one check per key: residual of the winner
    out = []
    for key, s in chosen.items():
        res = [x for r in results if r.check == f"{key}={s:+d}" for x in r.residuals]
        out.append(CheckResult("all", "pin_conventions", key, tol, res))
    conv = None
    if not any(n.get("fatal") for n in notes):
        conv = Conventions(0.5, chosen["curvature_sign"], chosen["covariant_derivative_sign"])
    return conv, out, notes


def run(cfg: HarnessConfig, ledger_path=None) -> Report:
    start = time.perf_counter()
    ledger_path = ledger_path or cfg.ledger
    conv = None
    checks, notes = [], []
    if "pin_conventions" in cfg.suites:
        conv, pin_checks, pin_notes = pin_conventions(cfg)
        checks.extend(pin_checks)
        notes.extend(pin_notes)
        if conv is not None and ledger_path:
            save_ledger(conv, ledger_path)
    needs = [s for s in cfg.suites if s in LEDGER_SUITES]
    if needs and conv is None:
        if "pin_conventions" in cfg.suites:
            raise ConventionUnpinned("pinning failed; see report notes")
        conv = load_ledger(ledger_path)
    for i, scn in enumerate(cfg.scenarios):
        for name in cfg.suites:
            if name == "pin_conventions":
                continue
            checks.extend(run_suite(name, scn, cfg, i, conv))
    report = Report(cfg.seed, asdict(conv) if conv else None, checks, notes)
    report.wall_time_s = time.perf_counter() - start
    return report


def with_seed(cfg: HarnessConfig, seed: int) -> HarnessConfig:
    return replace(cfg, seed=seed)


def with_suites(cfg: HarnessConfig, suites) -> HarnessConfig:
    return replace(cfg, suites=tuple(suites))
