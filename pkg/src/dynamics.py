"""
Closed-loop double-integrator simulation.

Each agent i has x_i' = v_i, v_i' = u_i with
- absolute velocity protocol: u_i = alpha * sum_j a_ij (x_j - x_i) - beta * v_i
- relative velocity protocol: u_i = alpha * sum_j a_ij (x_j - x_i) + beta * sum_j a_ij (v_j - v_i)
where a_ij are the mixed-graph weights (DAG plus reverse edges).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .config import (
    SIM_CONV_TOL,
    SIM_DIV_TOL,
    SIM_DT,
    SIM_OVERFLOW_GUARD,
    SIM_SAMPLE_STRIDE,
    SIM_T_MAX,
)
from .errors import DimensionMismatch, DynamicsError, InvalidSimulationConfig, NoSpanningTree
from .graph import MixedGraph, has_spanning_tree, laplacian
from .logger import get_logger
from .spectral import GainPair, Protocol, Verdict

logger = logging.getLogger(__name__)
action_logger = get_logger()


class SimOutcome(str, Enum):
    CONVERGED = "converged"
    DIVERGED = "diverged"
    UNDECIDED = "undecided"


class Consistency(str, Enum):
    AGREE = "agree"
    DISAGREE = "disagree"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class AgentState:
    x: float
    v: float


@dataclass(frozen=True)
class SimulationConfig:
    """
    Integration and classification settings.

    Args:
        dt: RK4 step
        t_max: Horizon; runs still undecided here are UNDECIDED
        conv_tol: Both disagreements below this means CONVERGED
        div_tol: Either disagreement above this means DIVERGED
        sample_stride: Store every k-th step in the trace
        overflow_guard: Any state above this in magnitude stops the run as DIVERGED
        stop_early: Halt at the first verdict instead of integrating to t_max
    """

    dt: float = SIM_DT
    t_max: float = SIM_T_MAX
    conv_tol: float = SIM_CONV_TOL
    div_tol: float = SIM_DIV_TOL
    sample_stride: int = SIM_SAMPLE_STRIDE
    overflow_guard: float = SIM_OVERFLOW_GUARD
    stop_early: bool = True

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidSimulationConfig(f"dt must be positive, got {self.dt}")
        if self.t_max < self.dt:
            raise InvalidSimulationConfig(f"t_max ({self.t_max}) must be >= dt ({self.dt})")
        if not 0 < self.conv_tol < self.div_tol:
            raise InvalidSimulationConfig("need 0 < conv_tol < div_tol")
        if self.sample_stride < 1:
            raise InvalidSimulationConfig(f"sample_stride must be >= 1, got {self.sample_stride}")

    @property
    def steps(self) -> int:
        return int(round(self.t_max / self.dt))


@dataclass(frozen=True, eq=False)
class SimulationTrace:
    """Sampled trajectory; positions and velocities are (samples, n) arrays."""

    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    pos_disagreement: np.ndarray
    vel_disagreement: np.ndarray
    outcome: SimOutcome
    decided_at: float
    overflow: bool = False

    @property
    def final_velocities(self) -> np.ndarray:
        return self.velocities[-1]


# ==================== Control law ====================

def _acceleration(
    L: np.ndarray,
    gains: GainPair,
    protocol: Protocol,
    x: np.ndarray,
    v: np.ndarray,
) -> np.ndarray:
    if protocol is Protocol.ABSOLUTE:
        return -gains.alpha * (L @ x) - gains.beta * v
    return -gains.alpha * (L @ x) - gains.beta * (L @ v)


def control_input(
    m: MixedGraph,
    gains: GainPair,
    protocol: Protocol,
    states: Sequence[AgentState],
) -> np.ndarray:
    """
    Accelerations u_i for every agent.

    Raises:
        DimensionMismatch: If len(states) != n
    """
    if len(states) != m.n:
        raise DimensionMismatch(f"expected {m.n} agent states, got {len(states)}")
    x = np.array([s.x for s in states], dtype=float)
    v = np.array([s.v for s in states], dtype=float)
    return _acceleration(laplacian(m).L_total, gains, protocol, x, v)


def system_matrix(m: MixedGraph, gains: GainPair, protocol: Protocol) -> np.ndarray:
    """2n x 2n matrix of the closed loop z' = M z with z = (x, v)."""
    n = m.n
    L = laplacian(m).L_total
    velocity_block = -gains.beta * (np.eye(n) if protocol is Protocol.ABSOLUTE else L)
    return np.block([
        [np.zeros((n, n)), np.eye(n)],
        [-gains.alpha * L, velocity_block],
    ])


def initial_conditions(n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Positions and velocities drawn uniformly from [-1, 1]."""
    rng = np.random.default_rng(seed)
    return rng.uniform(-1.0, 1.0, size=n), rng.uniform(-1.0, 1.0, size=n)


# ==================== Integration ====================

def _as_state_vector(values: Sequence[float], n: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != (n,):
        raise DimensionMismatch(f"{name} must have length {n}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DynamicsError(f"{name} has non-finite entries")
    return arr


def simulate(
    m: MixedGraph,
    gains: GainPair,
    protocol: Protocol,
    x0: Sequence[float],
    v0: Sequence[float],
    cfg: Optional[SimulationConfig] = None,
) -> SimulationTrace:
    """
    Integrate the closed loop with classical fixed-step RK4.

    The first step at which both disagreements drop below conv_tol gives
    CONVERGED, the first at which either exceeds div_tol gives DIVERGED.
    A state exceeding the overflow guard is DIVERGED with overflow=True.

    Args:
        m: Mixed graph the protocol runs on
        gains: Control gains
        protocol: ABSOLUTE or RELATIVE
        x0: Initial positions (length n)
        v0: Initial velocities (length n)
        cfg: Simulation settings (default: SimulationConfig())

    Returns:
        SimulationTrace sampled every cfg.sample_stride steps plus the decisive step
    """
    cfg = cfg or SimulationConfig()
    n = m.n
    x0 = _as_state_vector(x0, n, "x0")
    v0 = _as_state_vector(v0, n, "v0")

    M = system_matrix(m, gains, protocol)
    h = cfg.dt
    z = np.concatenate([x0, v0])

    times: list[float] = []
    samples: list[np.ndarray] = []
    pos_dis: list[float] = []
    vel_dis: list[float] = []

    def record(t: float, state: np.ndarray, pd: float, vd: float) -> None:
        times.append(t)
        samples.append(state.copy())
        pos_dis.append(pd)
        vel_dis.append(vd)

    def classify(state: np.ndarray) -> tuple[Optional[SimOutcome], float, float, bool]:
        if not np.all(np.isfinite(state)) or np.abs(state).max() > cfg.overflow_guard:
            return SimOutcome.DIVERGED, float("inf"), float("inf"), True
        pd = float(np.ptp(state[:n]))
        vd = float(np.ptp(state[n:]))
        if pd > cfg.div_tol or vd > cfg.div_tol:
            return SimOutcome.DIVERGED, pd, vd, False
        if pd < cfg.conv_tol and vd < cfg.conv_tol:
            return SimOutcome.CONVERGED, pd, vd, False
        return None, pd, vd, False

    outcome, pd, vd, overflow = classify(z)
    record(0.0, z, pd, vd)
    decided_at = 0.0
    halted = overflow

    steps = cfg.steps
    step = 0
    while step < steps and not halted and not (outcome is not None and cfg.stop_early):
        k1 = M @ z
        k2 = M @ (z + 0.5 * h * k1)
        k3 = M @ (z + 0.5 * h * k2)
        k4 = M @ (z + h * k3)
        z = z + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        step += 1
        t = step * h

        status, pd, vd, halted = classify(z)
        decisive = outcome is None and status is not None
        if decisive:
            outcome, overflow, decided_at = status, halted, t

        if decisive or halted or step % cfg.sample_stride == 0 or step == steps:
            record(t, z, pd, vd)

    if outcome is None:
        outcome, decided_at = SimOutcome.UNDECIDED, times[-1]

    states = np.array(samples)
    trace = SimulationTrace(
        times=np.array(times),
        positions=states[:, :n],
        velocities=states[:, n:],
        pos_disagreement=np.array(pos_dis),
        vel_disagreement=np.array(vel_dis),
        outcome=outcome,
        decided_at=decided_at,
        overflow=overflow,
    )
    logger.debug(f"Simulated n={n} ({protocol.value}): {outcome.value} at t={decided_at:.4g}")
    action_logger.simulation_finished(protocol.value, outcome.value, decided_at, overflow)
    return trace


# ==================== Invariants and cross-checks ====================

def left_zero_eigenvector(m: MixedGraph) -> np.ndarray:
    """
    Nonnegative w with w^T L = 0 and sum(w) = 1.

    Raises:
        NoSpanningTree: If the zero eigenvalue of L is not simple
    """
    if not has_spanning_tree(m):
        raise NoSpanningTree(f"graph with n={m.n} has no spanning tree")

    basis = scipy.linalg.null_space(laplacian(m).L_total.T)
    if basis.shape[1] != 1:
        raise NoSpanningTree(f"left null space has dimension {basis.shape[1]}, expected 1")

    w = basis[:, 0] / basis[:, 0].sum()
    w = np.clip(w, 0.0, None)
    return w / w.sum()


def classify_consistency(trace: SimulationTrace, verdict: Verdict) -> Consistency:
    """Compare a simulation outcome with the spectral verdict for the same instance."""
    if trace.outcome is SimOutcome.UNDECIDED or verdict is Verdict.BOUNDARY:
        return Consistency.INCONCLUSIVE

    agrees = (
        (trace.outcome is SimOutcome.CONVERGED and verdict is Verdict.CONSENSUS)
        or (trace.outcome is SimOutcome.DIVERGED and verdict is Verdict.NO_CONSENSUS)
    )
    return Consistency.AGREE if agrees else Consistency.DISAGREE
