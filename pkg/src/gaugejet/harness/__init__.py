"""Randomized verification harness."""
from .config import DEFAULT_TOLERANCES, SUITES, HarnessConfig, Scenario, config_from_dict, load_config
from .conventions import Conventions, load_ledger, save_ledger
from .report import CheckResult, Report, emit, parse_csv, parse_json, report_from_json
from .runner import pin_conventions, run, run_suite

__all__ = ["DEFAULT_TOLERANCES", "SUITES", "HarnessConfig", "Scenario", "config_from_dict",
           "load_config", "Conventions", "load_ledger", "save_ledger", "CheckResult", "Report",
           "report_from_json", "emit", "parse_csv", "parse_json", "pin_conventions", "run",
           "run_suite"]
