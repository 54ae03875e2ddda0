"""Command-line runner and report emitter."""

from .report import Report, emit_report
from .scenarios import SCENARIOS, list_scenarios, run_scenario

__all__ = ["Report", "SCENARIOS", "emit_report", "list_scenarios", "run_scenario"]
