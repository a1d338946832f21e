"""JSON graph spec files: {"n": int, "dag_edges": [[c, p, w], ...], "reverse_edges": [[c, p, w], ...]}."""

import json
import logging
from pathlib import Path
from typing import Any

from .errors import GraphSpecError
from .graph import Edge, MixedGraph, add_reverse_edges, build_dag
from .logger import get_logger

logger = logging.getLogger(__name__)
action_logger = get_logger()

SPEC_FIELDS = ("n", "dag_edges", "reverse_edges")


def _parse_edges(raw: Any, field: str) -> list[Edge]:
    if not isinstance(raw, list):
        raise GraphSpecError(f"'{field}' must be a list of [child, parent, weight] triples")

    edges: list[Edge] = []
    for k, item in enumerate(raw):
        if not (isinstance(item, list) and len(item) == 3):
            raise GraphSpecError(f"'{field}[{k}]' must be a [child, parent, weight] triple, got {item!r}")
        child, parent, weight = item
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in (child, parent)):
            raise GraphSpecError(f"'{field}[{k}]' vertex indices must be integers")
        if isinstance(weight, bool) or not isinstance(weight, (int, float)):
            raise GraphSpecError(f"'{field}[{k}]' weight must be a number")
        edges.append((child, parent, float(weight)))
    return edges


def graph_from_dict(data: Any) -> MixedGraph:
    """
    Build a mixed graph from a parsed spec, rejecting unknown fields.

    Raises:
        GraphSpecError: On shape problems
        GraphError: On the same validation failures as build_dag/add_reverse_edges
    """
    if not isinstance(data, dict):
        raise GraphSpecError("graph spec must be a JSON object")

    unknown = sorted(set(data) - set(SPEC_FIELDS))
    if unknown:
        raise GraphSpecError(f"unknown fields in graph spec: {', '.join(unknown)}")
    if "n" not in data or "dag_edges" not in data:
        raise GraphSpecError("graph spec requires 'n' and 'dag_edges'")

    n = data["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise GraphSpecError(f"'n' must be an integer, got {n!r}")

    dag = build_dag(n, _parse_edges(data["dag_edges"], "dag_edges"))
    return add_reverse_edges(dag, _parse_edges(data.get("reverse_edges", []), "reverse_edges"))


def graph_to_dict(m: MixedGraph) -> dict[str, Any]:
    return {
        "n": m.n,
        "dag_edges": [[c, p, w] for c, p, w in m.dag_edges],
        "reverse_edges": [[c, p, w] for c, p, w in m.reverse_edges],
    }


def load_graph(path: str) -> MixedGraph:
    """
    Load and validate a graph spec file.

    Args:
        path: Path to a UTF-8 JSON file

    Returns:
        Validated MixedGraph

    Raises:
        GraphSpecError: If the file is not valid JSON or has the wrong shape
        OSError: If the file cannot be read
    """
    try:
        with open(path, encoding="utf-8") as file:
            data = json.load(file)
    except json.JSONDecodeError as e:
        raise GraphSpecError(f"{path} is not valid JSON: {e}") from e

    m = graph_from_dict(data)
    action_logger.graph_loaded(str(path), m.n, len(m.dag_edges), len(m.reverse_edges))
    return m


def write_graph(m: MixedGraph, path: str) -> None:
    """Write a graph spec file; identical graphs produce byte-identical files."""
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as file:
            json.dump(graph_to_dict(m), file, indent=2)
            file.write("\n")
        logger.info(f"Wrote graph spec (n={m.n}) to {path}")
    except OSError as e:
        logger.error(f"Failed to write graph spec {path}: {e}")
        raise
