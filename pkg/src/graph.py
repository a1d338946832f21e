"""
Hierarchical graphs (DAGs in linear extension ordering) and mixed graphs.

Vertices are numbered 1..n. An edge (i, j, w) means vertex i (child) receives
information from vertex j (parent) with weight w. DAG edges have i > j; reverse
edges have i < j.
"""

import logging
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

import networkx as nx
import numpy as np

from .errors import (
    DuplicateEdge,
    DuplicateReverseEdge,
    EdgeOrderViolation,
    GraphError,
    InfeasibleReverseCount,
    NonPositiveWeight,
    ReverseOrderViolation,
    TooFewVertices,
    VertexOutOfRange,
)

logger = logging.getLogger(__name__)

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class HierarchicalGraph:
    """A DAG whose edges all point from a lower-numbered parent to a higher-numbered child."""

    n: int
    dag_edges: tuple[Edge, ...]

    def adjacency(self) -> np.ndarray:
        """Weighted adjacency matrix (0-based, strictly lower triangular)."""
        A = np.zeros((self.n, self.n))
        for child, parent, weight in self.dag_edges:
            A[child - 1, parent - 1] = weight
        return A

    def in_degrees(self) -> np.ndarray:
        """Weighted in-degrees d_ii."""
        return self.adjacency().sum(axis=1)


@dataclass(frozen=True)
class MixedGraph:
    """A hierarchical graph plus reverse edges pointing against the ordering."""

    base: HierarchicalGraph
    reverse_edges: tuple[Edge, ...]

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def dag_edges(self) -> tuple[Edge, ...]:
        return self.base.dag_edges

    def reverse_adjacency(self) -> np.ndarray:
        """Weights of reverse edges only (0-based, strictly upper triangular)."""
        R = np.zeros((self.n, self.n))
        for child, parent, weight in self.reverse_edges:
            R[child - 1, parent - 1] = weight
        return R

    def adjacency(self) -> np.ndarray:
        """Weighted adjacency of the mixed graph (DAG plus reverse edges)."""
        return self.base.adjacency() + self.reverse_adjacency()

    def info_flow_graph(self) -> nx.DiGraph:
        """Digraph with an arc parent -> child for every edge (direction of information flow)."""
        G = nx.DiGraph()
        G.add_nodes_from(range(1, self.n + 1))
        for child, parent, weight in self.dag_edges + self.reverse_edges:
            G.add_edge(parent, child, weight=weight)
        return G


@dataclass(frozen=True)
class AssumptionParams:
    """Tightest neighbor-count and weight bounds a concrete mixed graph satisfies."""

    zeta: int
    xi: int
    a_bar: float
    a_bar_r: float
    d_max: float


@dataclass(frozen=True, eq=False)
class LaplacianDecomposition:
    """
    Mixed-graph Laplacian split into the DAG Laplacian and the reverse-edge part.

    theta, phi and span are None when the graph has no reverse edges.
    """

    L_total: np.ndarray
    L_dag: np.ndarray
    P: np.ndarray
    theta: Optional[int]
    phi: Optional[int]
    span: Optional[int]

    def blocks(self) -> dict[str, np.ndarray]:
        """
        Block views L1, Theta, Delta, L2 cut at the reverse-edge boundaries.

        L1 covers vertices before theta, Theta and Delta the range theta..phi,
        L2 the vertices after phi. All reverse-edge entries of P fall in Delta.

        Raises:
            GraphError: If the graph has no reverse edges
        """
        if self.theta is None:
            raise GraphError("block form is undefined without reverse edges")
        lo, hi = self.theta - 1, self.phi
        return {
            "L1": self.L_dag[:lo, :lo],
            "Theta": self.L_dag[lo:hi, lo:hi],
            "Delta": self.P[lo:hi, lo:hi],
            "L2": self.L_dag[hi:, hi:],
        }


# ==================== Validation ====================

def _check_size(n: int) -> None:
    if n <= 2:
        raise TooFewVertices(f"need n > 2 vertices, got {n}")


def _check_weight(edge: Edge) -> None:
    weight = edge[2]
    if not (math.isfinite(weight) and weight > 0):
        raise NonPositiveWeight(f"edge {edge[:2]} has weight {weight}; weights must be positive and finite")


def _check_vertices(n: int, edge: Edge) -> None:
    for v in edge[:2]:
        if not 1 <= v <= n:
            raise VertexOutOfRange(f"edge {edge[:2]} references vertex {v} outside 1..{n}")


def _normalize(edges: Iterable[Edge]) -> list[Edge]:
    return [(int(c), int(p), float(w)) for c, p, w in edges]


# ==================== Construction ====================

def build_dag(n: int, edges: Iterable[Edge]) -> HierarchicalGraph:
    """
    Build a hierarchical graph from edges given in linear extension ordering.

    Vertices are never re-sorted: every edge must already satisfy child > parent.

    Args:
        n: Vertex count (> 2)
        edges: (child, parent, weight) triples, one-based

    Returns:
        Validated HierarchicalGraph with edges in canonical (child, parent) order

    Raises:
        TooFewVertices, VertexOutOfRange, EdgeOrderViolation, NonPositiveWeight, DuplicateEdge
    """
    _check_size(n)
    seen: set[tuple[int, int]] = set()
    normalized = _normalize(edges)
    for edge in normalized:
        _check_vertices(n, edge)
        child, parent, _ = edge
        if child <= parent:
            raise EdgeOrderViolation(
                f"DAG edge ({child}, {parent}) has child <= parent; "
                "vertices must be numbered in linear extension ordering"
            )
        _check_weight(edge)
        if (child, parent) in seen:
            raise DuplicateEdge(f"DAG edge ({child}, {parent}) given twice")
        seen.add((child, parent))

    return HierarchicalGraph(n=n, dag_edges=tuple(sorted(normalized)))


def add_reverse_edges(g: HierarchicalGraph, redges: Iterable[Edge]) -> MixedGraph:
    """
    Attach reverse edges (child < parent) to a hierarchical graph.

    Args:
        g: Base hierarchical graph
        redges: (child, parent, weight) triples with child < parent

    Returns:
        MixedGraph; an empty list gives a mixed graph with the DAG's Laplacian

    Raises:
        VertexOutOfRange, ReverseOrderViolation, NonPositiveWeight, DuplicateReverseEdge
    """
    seen: set[tuple[int, int]] = set()
    normalized = _normalize(redges)
    for edge in normalized:
        _check_vertices(g.n, edge)
        child, parent, _ = edge
        if child >= parent:
            raise ReverseOrderViolation(
                f"reverse edge ({child}, {parent}) has child >= parent; "
                "that is a forward edge and belongs to the DAG"
            )
        _check_weight(edge)
        if (child, parent) in seen:
            raise DuplicateReverseEdge(f"reverse edge ({child}, {parent}) given twice")
        seen.add((child, parent))

    return MixedGraph(base=g, reverse_edges=tuple(sorted(normalized)))


# ==================== Analysis ====================

def laplacian(m: MixedGraph) -> LaplacianDecomposition:
    """
    Compute the mixed-graph Laplacian L_total = L_dag + P.

    L_dag has the weighted DAG in-degrees on its diagonal and -a_ij off it.
    P has -a_ij for every reverse edge and, on its diagonal, the total
    reverse-edge weight each vertex receives.
    """
    A = m.base.adjacency()
    R = m.reverse_adjacency()
    L_dag = np.diag(m.base.in_degrees()) - A
    P = np.diag(R.sum(axis=1)) - R

    if m.reverse_edges:
        theta = min(child for child, _, _ in m.reverse_edges)
        phi = max(parent for _, parent, _ in m.reverse_edges)
        span: Optional[int] = phi - theta
    else:
        theta = phi = span = None

    return LaplacianDecomposition(
        L_total=L_dag + P,
        L_dag=L_dag,
        P=P,
        theta=theta,
        phi=phi,
        span=span,
    )


def assumption_params(m: MixedGraph) -> AssumptionParams:
    """Exact neighbor-count and weight maxima of a mixed graph."""
    A = m.base.adjacency()
    R = m.reverse_adjacency()

    # Every edge with i > j is a DAG edge and every edge with i < j a reverse edge
    superior = (A > 0).sum(axis=1)
    inferior = (R > 0).sum(axis=1)

    return AssumptionParams(
        zeta=int(superior.max()),
        xi=int(inferior.max()),
        a_bar=float(A.max()),
        a_bar_r=float(R.max()),
        d_max=float(m.base.in_degrees().max()),
    )


def has_spanning_tree(m: MixedGraph) -> bool:
    """
    Check whether some root reaches every vertex along information flow.

    Vertices without incoming information are tried first: more than one of
    them rules a spanning tree out, exactly one is the only possible root.
    """
    G = m.info_flow_graph()
    sources = [v for v in G.nodes if G.in_degree(v) == 0]
    if len(sources) > 1:
        return False

    candidates = sources or list(G.nodes)
    for root in candidates:
        if len(nx.descendants(G, root)) == m.n - 1:
            logger.debug(f"Spanning tree rooted at vertex {root}")
            return True
    return False


# ==================== Generators ====================

def _check_weight_bounds(weight_bounds: tuple[float, float]) -> None:
    low, high = weight_bounds
    if not (0 < low <= high and math.isfinite(high)):
        raise GraphError(f"weight bounds must satisfy 0 < low <= high, got {weight_bounds}")


def _sample_reverse_pairs(
    rng: np.random.Generator,
    n: int,
    count: int,
    max_inferior: Optional[int] = None,
) -> list[tuple[int, int]]:
    """
    Draw distinct reverse pairs (i, j), i < j, uniformly without replacement.

    With max_inferior set, candidates that would give a vertex more than
    max_inferior inferior neighbors are skipped, so fewer than count may return.
    """
    pairs = list(combinations(range(1, n + 1), 2))
    if count > len(pairs):
        raise InfeasibleReverseCount(
            f"requested {count} reverse edges but only {len(pairs)} vertex pairs exist for n={n}"
        )
    if count == 0:
        return []

    chosen: list[tuple[int, int]] = []
    inferior_count = [0] * (n + 1)
    for idx in rng.permutation(len(pairs)):
        child, parent = pairs[idx]
        if max_inferior is not None and inferior_count[child] >= max_inferior:
            continue
        chosen.append((child, parent))
        inferior_count[child] += 1
        if len(chosen) == count:
            break
    return chosen


def gen_path(n: int, w: float = 1.0) -> HierarchicalGraph:
    """Directed path 1 -> 2 -> ... -> n with uniform weight w."""
    _check_size(n)
    return build_dag(n, [(i + 1, i, w) for i in range(1, n)])


def gen_star(n: int, rho: float = 1.0) -> HierarchicalGraph:
    """Directed star: hub vertex 1 feeds every fringe vertex 2..n with weight rho."""
    _check_size(n)
    return build_dag(n, [(i, 1, rho) for i in range(2, n + 1)])


def gen_path_reverse(
    n: int,
    q: int = 1,
    m: Optional[int] = None,
    w: float = 1.0,
    reverse_weight: float = 1.0,
) -> MixedGraph:
    """
    Path graph plus one reverse edge from agent m to agent q (q < m).

    q = 1, m = n gives the full-span family whose leading block is a directed ring.

    Args:
        n: Path length
        q: Receiving (lower-numbered) vertex
        m: Sending vertex (default: n)
        w: Path edge weight
        reverse_weight: Weight of the reverse edge
    """
    m = n if m is None else m
    return add_reverse_edges(gen_path(n, w), [(q, m, reverse_weight)])


def gen_star_mixed(
    n: int,
    rho: float,
    rev_count: int,
    weight_bounds: tuple[float, float],
    seed: int,
) -> MixedGraph:
    """Star graph with rev_count reverse edges of random placement and weight."""
    _check_weight_bounds(weight_bounds)
    star = gen_star(n, rho)
    rng = np.random.default_rng(seed)
    pairs = _sample_reverse_pairs(rng, n, rev_count)
    weights = rng.uniform(*weight_bounds, size=len(pairs))
    return add_reverse_edges(star, [(c, p, w) for (c, p), w in zip(pairs, weights)])


def gen_random_mixed(
    n: int,
    dag_density: float,
    rev_count: int,
    weight_bounds: tuple[float, float],
    seed: int,
    max_superior: Optional[int] = None,
    max_inferior: Optional[int] = None,
) -> MixedGraph:
    """
    Random mixed graph that always has a spanning tree.

    The DAG part always contains the path edges (i+1, i); every other forward
    pair is added with probability dag_density. rev_count distinct reverse
    pairs are then drawn uniformly. Optional per-vertex caps bound the number
    of superior (max_superior) and inferior (max_inferior) neighbors; with a
    cap set, rev_count becomes an upper bound.

    Args:
        n: Vertex count (> 2)
        dag_density: Probability of each extra forward edge, in (0, 1]
        rev_count: Number of reverse edges
        weight_bounds: (low, high) with 0 < low <= high
        seed: Seed for numpy's default_rng

    Raises:
        TooFewVertices, GraphError, InfeasibleReverseCount
    """
    _check_size(n)
    if not 0 < dag_density <= 1:
        raise GraphError(f"dag_density must be in (0, 1], got {dag_density}")
    if rev_count < 0:
        raise GraphError(f"rev_count must be >= 0, got {rev_count}")
    if max_superior is not None and max_superior < 1:
        raise GraphError("max_superior must be at least 1 to keep the spanning path")
    _check_weight_bounds(weight_bounds)

    rng = np.random.default_rng(seed)
    low, high = weight_bounds

    edges: list[Edge] = []
    for child in range(2, n + 1):
        edges.append((child, child - 1, float(rng.uniform(low, high))))
        superior = 1
        for parent in range(1, child - 1):
            if max_superior is not None and superior >= max_superior:
                break
            if rng.random() < dag_density:
                edges.append((child, parent, float(rng.uniform(low, high))))
                superior += 1

    pairs = _sample_reverse_pairs(rng, n, rev_count, max_inferior)
    redges = [(c, p, float(rng.uniform(low, high))) for c, p in pairs]

    return add_reverse_edges(build_dag(n, edges), redges)
