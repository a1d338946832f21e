"""CSV and JSON export for traces, reports and sweeps."""

import csv
import json
import logging
from pathlib import Path
from typing import Any

from .config import SWEEP_CSV_FIELDS
from .dynamics import SimulationTrace
from .logger import get_logger
from .sweep import SweepResult

logger = logging.getLogger(__name__)
action_logger = get_logger()


def trace_fields(n: int) -> list[str]:
    """Trace CSV columns: t, x_1..x_n, v_1..v_n, pos_disagreement, vel_disagreement."""
    return (
        ["t"]
        + [f"x_{i}" for i in range(1, n + 1)]
        + [f"v_{i}" for i in range(1, n + 1)]
        + ["pos_disagreement", "vel_disagreement"]
    )


def _write_rows(rows: list[dict[str, Any]], fields: list[str], out_path: str) -> None:
    Path(out_path).parent.mkdir(parents=True, exist_ok=True)
    try:
        with open(out_path, "w", newline="", encoding="utf-8") as file:
            writer = csv.DictWriter(file, fieldnames=fields, lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({field: row.get(field, "") for field in fields})
        logger.info(f"Wrote {len(rows)} rows to {out_path}")
        action_logger.file_written(out_path, "CSV")
    except OSError as e:
        logger.error(f"Failed to write CSV file {out_path}: {e}")
        raise


def write_trace_csv(trace: SimulationTrace, out_path: str) -> None:
    """
    Write a simulation trace, one row per stored sample.

    Args:
        trace: Simulation trace
        out_path: Path to output CSV file

    Raises:
        OSError: If file cannot be written
    """
    n = trace.positions.shape[1]
    fields = trace_fields(n)
    rows = []
    for k, t in enumerate(trace.times):
        values = [float(t), *trace.positions[k], *trace.velocities[k],
                  trace.pos_disagreement[k], trace.vel_disagreement[k]]
        rows.append({field: float(value) for field, value in zip(fields, values)})
    _write_rows(rows, fields, out_path)


def write_sweep_csv(result: SweepResult, out_path: str) -> None:
    """Write one row per family size with criteria, verdicts and consistency flags."""
    _write_rows(result.to_rows(), SWEEP_CSV_FIELDS, out_path)


def write_json(data: dict[str, Any], out_path: str) -> None:
    """
    Write a JSON document; identical data gives byte-identical files.

    Raises:
        OSError: If file cannot be written
    """
    Path(out_path).parent.mkdir(parents=True, exist_ok=True)
    try:
        with open(out_path, "w", encoding="utf-8", newline="\n") as file:
            json.dump(data, file, indent=2)
            file.write("\n")
        action_logger.file_written(out_path, "JSON")
    except OSError as e:
        logger.error(f"Failed to write JSON file {out_path}: {e}")
        raise


def trace_verdict(trace: SimulationTrace) -> dict[str, Any]:
    """Verdict sidecar contents for a trace."""
    return {
        "outcome": trace.outcome.value,
        "decided_at": trace.decided_at,
        "overflow": trace.overflow,
        "samples": len(trace.times),
        "final_pos_disagreement": float(trace.pos_disagreement[-1]),
        "final_vel_disagreement": float(trace.vel_disagreement[-1]),
    }
