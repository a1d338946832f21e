"""
Action log for the consensus toolkit.

One line per major action, appended to HIERCON_LOG_FILE (output/hiercon.log
by default). Earlier runs are kept; each run opens with a separator line.
"""

import logging
from pathlib import Path
from typing import Optional

from .config import DEFAULT_LOG_FILE

_SEPARATOR = "=" * 80
_LINE_FORMAT = "[%(asctime)s] %(levelname)s: %(message)s"
_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


class ActionLogger:
    """Writes `[time] LEVEL: ACTION - details` lines to the action log file."""

    def __init__(self, log_file: str = DEFAULT_LOG_FILE):
        self.path = Path(log_file)
        self.path.parent.mkdir(parents=True, exist_ok=True)

        handler = logging.FileHandler(self.path, mode="a", encoding="utf-8")
        handler.setFormatter(logging.Formatter(_LINE_FORMAT, datefmt=_DATE_FORMAT))

        # Console records come from the module loggers, not from here
        self._sink = logging.getLogger("hiercon_actions")
        self._sink.propagate = False
        self._sink.setLevel(logging.INFO)
        for old in list(self._sink.handlers):
            self._sink.removeHandler(old)
            old.close()
        self._sink.addHandler(handler)

    def _emit(self, level: int, action: str, details: str = "") -> None:
        self._sink.log(level, f"{action} - {details}" if details else action)

    def new_run(self) -> None:
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(f"\n{_SEPARATOR}\n")

    # ==================== Lifecycle ====================

    def app_init(self, details: str = "") -> None:
        """Open a new run in the log."""
        self.new_run()
        self._emit(logging.INFO, "APP INITIALIZED", details)

    def file_written(self, path: str, kind: str = "") -> None:
        details = f"{kind}: {path}" if kind else path
        self._emit(logging.INFO, "FILE WRITTEN", details)

    # ==================== Graphs ====================

    def graph_loaded(self, source: str, n: int, dag_edges: int, reverse_edges: int) -> None:
        """Log a graph read from a graph spec file."""
        self._emit(
            logging.INFO,
            "GRAPH LOADED",
            f"Source: {source}, n={n}, DAG edges: {dag_edges}, reverse edges: {reverse_edges}",
        )

    def graph_written(self, path: str, family: str, n: int) -> None:
        self._emit(logging.INFO, "GRAPH WRITTEN", f"Family: {family}, n={n}, Path: {path}")

    # ==================== Analysis ====================

    def spectrum_computed(self, n: int, abs_criterion: float, rel_criterion: float) -> None:
        """Log a computed spectrum with both criterion values."""
        self._emit(
            logging.INFO,
            "SPECTRUM COMPUTED",
            f"n={n}, abs: {abs_criterion:.6g}, rel: {rel_criterion:.6g}",
        )

    def verdict_reached(self, protocol: str, verdict: str, margin: float) -> None:
        level = logging.WARNING if verdict != "consensus" else logging.INFO
        self._emit(level, "VERDICT", f"Protocol: {protocol}, Verdict: {verdict.upper()}, Margin: {margin:.6g}")

    def simulation_finished(self, protocol: str, outcome: str, at_time: float, overflow: bool = False) -> None:
        """Log the outcome of one closed-loop simulation."""
        details = f"Protocol: {protocol}, Outcome: {outcome.upper()}, t={at_time:.4g}"
        if overflow:
            details += ", OVERFLOW"
        self._emit(logging.INFO, "SIMULATION FINISHED", details)

    # ==================== Sweeps ====================

    def sweep_started(self, family: str, n_start: int, n_stop: int, ratio: float) -> None:
        self._emit(logging.INFO, "SWEEP STARTED", f"Family: {family}, n={n_start}..{n_stop}, beta^2/alpha={ratio:.6g}")

    def sweep_record(self, n: int, absolute: str, relative: str) -> None:
        self._emit(logging.INFO, "SWEEP RECORD", f"n={n}, absolute: {absolute}, relative: {relative}")

    def breaking_size_found(self, protocol: str, n: Optional[int]) -> None:
        """
        Log the smallest size without consensus.

        Args:
            protocol: Protocol name
            n: Breaking size, or None when every size reached consensus
        """
        details = f"Protocol: {protocol}, n={n}" if n is not None else f"Protocol: {protocol}, none"
        self._emit(logging.INFO, "BREAKING SIZE", details)

    # ==================== Errors ====================

    def error(self, message: str, exception: Optional[Exception] = None) -> None:
        details = f"{message}: {exception}" if exception else message
        self._emit(logging.ERROR, "ERROR", details)


_instance: Optional[ActionLogger] = None


def get_logger(log_file: str = DEFAULT_LOG_FILE) -> ActionLogger:
    """Return the shared ActionLogger; the first call fixes its file."""
    global _instance
    if _instance is None:
        _instance = ActionLogger(log_file)
    return _instance
