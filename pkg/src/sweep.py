"""
Scalability sweeps over growing graph families with one fixed gain pair.

A family builds each size independently (members need not be nested). Per-n
seeds are derived from one master seed, so every record is reproducible on
its own.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from math import comb
from typing import Any, Optional

import numpy as np

from .config import (
    CONSISTENCY_MARGIN,
    DEFAULT_DENSITY,
    DEFAULT_SEED,
    DEFAULT_WEIGHT_BOUNDS,
    DEFAULT_XI,
    DEFAULT_ZETA,
    MARGIN_TOL,
    ZERO_TOL,
)
from .dynamics import (
    Consistency,
    SimOutcome,
    SimulationConfig,
    classify_consistency,
    initial_conditions,
    simulate,
)
from .errors import GraphError, HierconError, SweepError
from .graph import MixedGraph, gen_path_reverse, gen_random_mixed, gen_star_mixed, laplacian
from .logger import get_logger
from .spectral import (
    GainPair,
    Protocol,
    SpectralReport,
    Verdict,
    VerdictResult,
    analyze,
    consensus_verdict,
)

logger = logging.getLogger(__name__)
action_logger = get_logger()


class FamilyKind(str, Enum):
    PATH_FULL_SPAN_REVERSE = "path-ring"
    PATH_INNER_REVERSE = "path-inner"
    STAR = "star"
    RANDOM_MIXED = "random"


@dataclass(frozen=True)
class FamilySpec:
    """
    A mixed graph family over n = n_start, n_start + n_stride, ..., <= n_stop.

    Per-kind parameters:
        path-ring: weight (path), reverse_weight; reverse edge n -> 1
        path-inner: weight, reverse_weight, inner_q; reverse edge n -> inner_q
        star: rho, reverse_count (default n // 2), weight_bounds for reverse weights
        random: density, zeta, xi caps, weight_bounds; up to xi * n reverse edges
    """

    kind: FamilyKind
    n_start: int
    n_stop: int
    n_stride: int = 1
    weight: float = 1.0
    reverse_weight: float = 1.0
    rho: float = 1.0
    inner_q: int = 2
    reverse_count: Optional[int] = None
    density: float = DEFAULT_DENSITY
    zeta: int = DEFAULT_ZETA
    xi: int = DEFAULT_XI
    weight_bounds: tuple[float, float] = DEFAULT_WEIGHT_BOUNDS
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.n_start <= 2:
            raise GraphError(f"family must start above n = 2, got {self.n_start}")
        if self.n_stop < self.n_start:
            raise GraphError(f"empty size range {self.n_start}:{self.n_stop}")
        if self.n_stride < 1:
            raise GraphError(f"stride must be >= 1, got {self.n_stride}")
        if self.kind is FamilyKind.PATH_INNER_REVERSE and not 2 <= self.inner_q < self.n_start:
            raise GraphError(f"inner_q must satisfy 2 <= q < n_start, got q={self.inner_q}")

    def sizes(self, n_stop: Optional[int] = None) -> range:
        return range(self.n_start, (self.n_stop if n_stop is None else n_stop) + 1, self.n_stride)

    def seed_for(self, n: int, stream: int = 0) -> int:
        """Seed for size n, independent of the rest of the range."""
        return int(np.random.SeedSequence([self.seed, n, stream]).generate_state(1)[0])

    def build(self, n: int) -> MixedGraph:
        if self.kind is FamilyKind.PATH_FULL_SPAN_REVERSE:
            return gen_path_reverse(n, q=1, w=self.weight, reverse_weight=self.reverse_weight)
        if self.kind is FamilyKind.PATH_INNER_REVERSE:
            return gen_path_reverse(n, q=self.inner_q, w=self.weight, reverse_weight=self.reverse_weight)
        if self.kind is FamilyKind.STAR:
            count = n // 2 if self.reverse_count is None else self.reverse_count
            return gen_star_mixed(n, self.rho, count, self.weight_bounds, self.seed_for(n))
        rev_count = min(self.xi * n, comb(n, 2))
        return gen_random_mixed(
            n,
            self.density,
            rev_count,
            self.weight_bounds,
            self.seed_for(n),
            max_superior=self.zeta,
            max_inferior=self.xi,
        )


@dataclass(frozen=True, eq=False)
class SweepRecord:
    n: int
    span: Optional[int]
    report: SpectralReport
    verdicts: dict[Protocol, VerdictResult]
    simulations: dict[Protocol, SimOutcome] = field(default_factory=dict)
    consistency: dict[Protocol, Consistency] = field(default_factory=dict)

    @property
    def abs_criterion(self) -> float:
        return self.report.abs_criterion

    @property
    def rel_criterion(self) -> float:
        return self.report.rel_criterion

    def to_row(self) -> dict[str, Any]:
        row: dict[str, Any] = {
            "n": self.n,
            "span": "" if self.span is None else self.span,
            "abs_criterion": self.report.abs_criterion,
            "rel_criterion": self.report.rel_criterion,
            "gershgorin_bound": self.report.gershgorin_bound,
            "max_imag": self.report.spectrum.max_imag,
            "has_spanning_tree": self.report.has_spanning_tree,
        }
        for protocol in Protocol:
            result = self.verdicts[protocol]
            row[f"{protocol.value}_verdict"] = result.verdict.value
            row[f"{protocol.value}_margin"] = result.margin
            row[f"{protocol.value}_simulation"] = self.simulations[protocol].value if self.simulations else ""
            row[f"{protocol.value}_consistency"] = self.consistency[protocol].value if self.consistency else ""
        return row


@dataclass(frozen=True)
class BreakingSize:
    """Smallest size without consensus (None if none up to the cap), plus skipped boundary sizes."""

    n: Optional[int]
    boundary_sizes: tuple[int, ...] = ()


@dataclass(frozen=True, eq=False)
class SweepResult:
    spec: FamilySpec
    gains: GainPair
    records: list[SweepRecord]
    breaking_sizes: dict[Protocol, BreakingSize]

    def to_rows(self) -> list[dict[str, Any]]:
        return [record.to_row() for record in self.records]

    def to_dict(self, full: bool = False) -> dict[str, Any]:
        """
        JSON-ready view of the sweep.

        Args:
            full: Include every record's eigenvalues
        """
        records = []
        for record in self.records:
            entry = record.to_row()
            if full:
                entry["eigenvalues"] = record.report.to_dict(full=True)["eigenvalues"]
            records.append(entry)

        return {
            "family": self.spec.kind.value,
            "n_start": self.spec.n_start,
            "n_stop": self.spec.n_stop,
            "n_stride": self.spec.n_stride,
            "seed": self.spec.seed,
            "alpha": self.gains.alpha,
            "beta": self.gains.beta,
            "gain_ratio": self.gains.gain_ratio,
            "breaking_sizes": {p.value: b.n for p, b in self.breaking_sizes.items()},
            "boundary_sizes": {p.value: list(b.boundary_sizes) for p, b in self.breaking_sizes.items()},
            "records": records,
        }


# ==================== Per-size work ====================

def _build_and_analyze(spec: FamilySpec, n: int, zero_tol: float) -> tuple[MixedGraph, SpectralReport]:
    try:
        m = spec.build(n)
        return m, analyze(m, zero_tol)
    except HierconError as e:
        raise SweepError(n, str(e)) from e


def _sweep_record(
    spec: FamilySpec,
    gains: GainPair,
    n: int,
    simulate_flag: bool,
    cfg: SimulationConfig,
    zero_tol: float,
    margin_tol: float,
    consistency_margin: float = CONSISTENCY_MARGIN,
) -> SweepRecord:
    m, report = _build_and_analyze(spec, n, zero_tol)
    verdicts = {p: consensus_verdict(report, gains, p, margin_tol) for p in Protocol}

    simulations: dict[Protocol, SimOutcome] = {}
    consistency: dict[Protocol, Consistency] = {}
    if simulate_flag:
        x0, v0 = initial_conditions(n, spec.seed_for(n, stream=1))
        for protocol in Protocol:
            try:
                trace = simulate(m, gains, protocol, x0, v0, cfg)
            except HierconError as e:
                raise SweepError(n, str(e)) from e
            simulations[protocol] = trace.outcome
            if abs(verdicts[protocol].margin) <= consistency_margin:
                # Near the criterion a finite horizon cannot separate slow decay from slow growth
                consistency[protocol] = Consistency.INCONCLUSIVE
            else:
                consistency[protocol] = classify_consistency(trace, verdicts[protocol].verdict)

    action_logger.sweep_record(
        n,
        verdicts[Protocol.ABSOLUTE].verdict.value,
        verdicts[Protocol.RELATIVE].verdict.value,
    )
    return SweepRecord(
        n=n,
        span=laplacian(m).span,
        report=report,
        verdicts=verdicts,
        simulations=simulations,
        consistency=consistency,
    )


def _breaking_size(records: list[SweepRecord], protocol: Protocol) -> BreakingSize:
    boundary: list[int] = []
    for record in records:
        verdict = record.verdicts[protocol].verdict
        if verdict is Verdict.BOUNDARY:
            boundary.append(record.n)
        elif verdict is Verdict.NO_CONSENSUS:
            return BreakingSize(n=record.n, boundary_sizes=tuple(boundary))
    return BreakingSize(n=None, boundary_sizes=tuple(boundary))


# ==================== Public API ====================

def run_sweep(
    spec: FamilySpec,
    gains: GainPair,
    simulate_flag: bool = False,
    cfg: Optional[SimulationConfig] = None,
    workers: int = 1,
    zero_tol: float = ZERO_TOL,
    margin_tol: float = MARGIN_TOL,
    consistency_margin: float = CONSISTENCY_MARGIN,
) -> SweepResult:
    """
    Analyze every size of a family with one gain pair.

    Args:
        spec: Family and size range
        gains: Gains held fixed across the whole family
        simulate_flag: Also simulate both protocols and score consistency
        cfg: Simulation settings (default: SimulationConfig())
        workers: Threads for per-size records; records keep size order
        consistency_margin: Records with |margin| at or below this are not scored

    Raises:
        SweepError: Carrying the offending n
    """
    cfg = cfg or SimulationConfig()
    sizes = spec.sizes()
    action_logger.sweep_started(spec.kind.value, spec.n_start, spec.n_stop, gains.gain_ratio)
    logger.info(f"Sweeping {spec.kind.value} family over {len(sizes)} sizes (simulate={simulate_flag})")

    def work(n: int) -> SweepRecord:
        return _sweep_record(spec, gains, n, simulate_flag, cfg, zero_tol, margin_tol, consistency_margin)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(work, sizes))
    else:
        records = [work(n) for n in sizes]

    breaking = {p: _breaking_size(records, p) for p in Protocol}
    for protocol, result in breaking.items():
        action_logger.breaking_size_found(protocol.value, result.n)
        if result.boundary_sizes:
            logger.warning(f"Boundary verdicts for {protocol.value} at n={list(result.boundary_sizes)}")

    return SweepResult(spec=spec, gains=gains, records=records, breaking_sizes=breaking)


def find_breaking_size(
    spec: FamilySpec,
    gains: GainPair,
    protocol: Protocol,
    n_cap: int,
    zero_tol: float = ZERO_TOL,
    margin_tol: float = MARGIN_TOL,
) -> BreakingSize:
    """
    Smallest n <= n_cap (ignoring spec.n_stop) whose spectral verdict is NO_CONSENSUS.

    Boundary verdicts never count as breaking; they are returned separately.
    """
    if n_cap < spec.n_start:
        raise SweepError(n_cap, f"n_cap must be >= n_start ({spec.n_start})")

    boundary: list[int] = []
    for n in spec.sizes(n_stop=n_cap):
        _, report = _build_and_analyze(spec, n, zero_tol)
        verdict = consensus_verdict(report, gains, protocol, margin_tol).verdict
        if verdict is Verdict.BOUNDARY:
            boundary.append(n)
        elif verdict is Verdict.NO_CONSENSUS:
            action_logger.breaking_size_found(protocol.value, n)
            return BreakingSize(n=n, boundary_sizes=tuple(boundary))

    action_logger.breaking_size_found(protocol.value, None)
    return BreakingSize(n=None, boundary_sizes=tuple(boundary))
