"""
Laplacian spectra and the second-order consensus criteria.

With gains (alpha, beta) and a graph that has a spanning tree:
- the absolute velocity protocol reaches consensus iff
  beta^2/alpha > max over nonzero eigenvalues of Im^2/Re,
- the relative velocity protocol reaches consensus iff
  beta^2/alpha > max over nonzero eigenvalues of Im^2/(Re |lambda|^2).
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from .config import MARGIN_TOL, ZERO_TOL
from .errors import (
    AllEigenvaluesZero,
    ConvergenceFailure,
    InvalidGains,
    NotAStar,
    SpectralError,
)
from .graph import AssumptionParams, MixedGraph, assumption_params, has_spanning_tree, laplacian
from .logger import get_logger

logger = logging.getLogger(__name__)
action_logger = get_logger()


class Protocol(str, Enum):
    ABSOLUTE = "absolute"
    RELATIVE = "relative"


class Verdict(str, Enum):
    CONSENSUS = "consensus"
    NO_CONSENSUS = "no_consensus"
    BOUNDARY = "boundary"


@dataclass(frozen=True, eq=False)
class Spectrum:
    """All n eigenvalues with multiplicity, sorted by real then imaginary part."""

    eigenvalues: np.ndarray

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def max_imag(self) -> float:
        return float(np.abs(self.eigenvalues.imag).max())


@dataclass(frozen=True)
class GainPair:
    """State gain alpha and velocity gain beta, shared by every agent."""

    alpha: float
    beta: float

    def __post_init__(self):
        for name, value in (("alpha", self.alpha), ("beta", self.beta)):
            if not (math.isfinite(value) and value > 0):
                raise InvalidGains(f"{name} must be positive and finite, got {value}")

    @property
    def gain_ratio(self) -> float:
        """beta^2 / alpha, the quantity both criteria compare against."""
        return self.beta ** 2 / self.alpha


@dataclass(frozen=True, eq=False)
class SpectralReport:
    spectrum: Spectrum
    abs_criterion: float
    rel_criterion: float
    gershgorin_bound: float
    has_spanning_tree: bool

    def criterion(self, protocol: Protocol) -> float:
        return self.abs_criterion if protocol is Protocol.ABSOLUTE else self.rel_criterion

    def to_dict(self, full: bool = True) -> dict[str, Any]:
        """
        JSON-ready view of the report.

        Args:
            full: Include eigenvalues as [re, im] pairs
        """
        data: dict[str, Any] = {
            "n": len(self.spectrum),
            "abs_criterion": self.abs_criterion,
            "rel_criterion": self.rel_criterion,
            "gershgorin_bound": self.gershgorin_bound,
            "has_spanning_tree": self.has_spanning_tree,
            "max_imag": self.spectrum.max_imag,
        }
        if full:
            data["eigenvalues"] = [[float(z.real), float(z.imag)] for z in self.spectrum.eigenvalues]
        return data


@dataclass(frozen=True)
class VerdictResult:
    verdict: Verdict
    margin: float


# ==================== Eigenvalues ====================

def eigenvalues(L: np.ndarray) -> Spectrum:
    """
    Eigenvalues of a dense real square matrix.

    Delegates to LAPACK's general nonsymmetric driver (balancing, Hessenberg
    reduction, shifted QR). Complex eigenvalues of real input come back in
    exact conjugate pairs.

    Raises:
        SpectralError: If the input is not a finite square matrix
        ConvergenceFailure: If the QR iteration does not converge
    """
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1] or L.shape[0] == 0:
        raise SpectralError(f"expected a non-empty square matrix, got shape {L.shape}")
    if not np.all(np.isfinite(L)):
        raise SpectralError("matrix has non-finite entries")

    try:
        values = scipy.linalg.eigvals(L, check_finite=False)
    except np.linalg.LinAlgError as e:
        raise ConvergenceFailure(f"eigensolver did not converge for n={L.shape[0]}: {e}") from e

    return Spectrum(eigenvalues=np.sort_complex(np.asarray(values, dtype=complex)))


def laplacian_spectrum(m: MixedGraph) -> Spectrum:
    """
    Spectrum of a mixed-graph Laplacian through its block lower triangular form.

    Rows outside theta..phi have no entries above the diagonal, so their
    diagonal entries are eigenvalues as they stand. Only the block spanned by
    reverse edges goes to the eigensolver. Repeated in-degrees (unit-weight
    paths) stay exactly real instead of splitting into complex pairs.
    """
    decomposition = laplacian(m)
    if decomposition.theta is None:
        return Spectrum(eigenvalues=np.sort_complex(np.diag(decomposition.L_total).astype(complex)))

    blocks = decomposition.blocks()
    inner = eigenvalues(blocks["Theta"] + blocks["Delta"]).eigenvalues
    outer = np.concatenate([np.diag(blocks["L1"]), np.diag(blocks["L2"])]).astype(complex)
    return Spectrum(eigenvalues=np.sort_complex(np.concatenate([outer, inner])))


def _nonzero(spec: Spectrum, zero_tol: float) -> np.ndarray:
    values = spec.eigenvalues[np.abs(spec.eigenvalues) > zero_tol]
    if values.size == 0:
        raise AllEigenvaluesZero(f"no eigenvalue with modulus above {zero_tol}")
    return values


def abs_criterion(spec: Spectrum, zero_tol: float = ZERO_TOL) -> float:
    """max Im^2/Re over nonzero eigenvalues; 0 for a real spectrum."""
    values = _nonzero(spec, zero_tol)
    with np.errstate(divide="ignore"):
        ratios = np.where(values.imag == 0, 0.0, values.imag ** 2 / values.real)
    return float(ratios.max())


def rel_criterion(spec: Spectrum, zero_tol: float = ZERO_TOL) -> float:
    """max Im^2/(Re |lambda|^2) over nonzero eigenvalues; 0 for a real spectrum."""
    values = _nonzero(spec, zero_tol)
    with np.errstate(divide="ignore"):
        ratios = np.where(
            values.imag == 0,
            0.0,
            values.imag ** 2 / (values.real * np.abs(values) ** 2),
        )
    return float(ratios.max())


# ==================== Gershgorin ====================

def gershgorin_bound(p: AssumptionParams) -> float:
    """2(zeta*a_bar + xi*a_bar_r): family-wide bound on the absolute criterion."""
    return 2.0 * (p.zeta * p.a_bar + p.xi * p.a_bar_r)


def gershgorin_discs(L: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row disc centers and radii of a square matrix."""
    L = np.asarray(L, dtype=float)
    centers = np.diag(L).copy()
    radii = np.abs(L).sum(axis=1) - np.abs(centers)
    return centers, radii


def in_gershgorin_union(spec: Spectrum, L: np.ndarray, tol: float = 1e-8) -> bool:
    """True if every eigenvalue lies in at least one row disc (within tol)."""
    centers, radii = gershgorin_discs(L)
    dist = np.abs(spec.eigenvalues[:, None] - centers[None, :])
    return bool(np.all((dist <= radii[None, :] + tol).any(axis=1)))


def scalable_absolute_gains(params: AssumptionParams, slack: float = 1.0, alpha: float = 1.0) -> GainPair:
    """
    Gains with beta^2/alpha = gershgorin_bound + slack.

    Any family obeying the same bounds then reaches consensus under the
    absolute velocity protocol at every size.
    """
    if slack <= 0:
        raise InvalidGains(f"slack must be positive, got {slack}")
    return GainPair(alpha=alpha, beta=math.sqrt(alpha * (gershgorin_bound(params) + slack)))


# ==================== Closed forms ====================

def ring_spectrum_closed_form(s: int) -> Spectrum:
    """Spectrum of the unit-weight directed ring on s+1 vertices."""
    if s < 1:
        raise SpectralError(f"span must be >= 1, got {s}")
    angles = 2 * np.pi * np.arange(1, s + 1) / (s + 1)
    gammas = (1 - np.cos(angles)) + 1j * np.sin(angles)
    return Spectrum(eigenvalues=np.sort_complex(np.concatenate([[0j], gammas])))


def path_family_rel_criterion(s: int) -> float:
    """Relative criterion of the ring block of span s: cot^2(pi/(s+1)) / 2."""
    if s < 1:
        raise SpectralError(f"span must be >= 1, got {s}")
    if s == 1:
        return 0.0
    return 0.5 / math.tan(math.pi / (s + 1)) ** 2


def path_family_abs_criterion(s: int) -> float:
    """Absolute criterion of the ring block of span s: 1 + cos(2 pi/(s+1))."""
    if s < 1:
        raise SpectralError(f"span must be >= 1, got {s}")
    if s == 1:
        return 0.0
    return 1.0 + math.cos(2 * math.pi / (s + 1))


def star_spectrum_closed_form(m: MixedGraph) -> Spectrum:
    """
    Spectrum of a star with arbitrary reverse edges: {0} and rho + p_ii, i = 1..n-1.

    p_ii is the total reverse-edge weight vertex i receives. Vertex n never
    receives a reverse edge, so its term is dropped in favor of the zero.

    Raises:
        NotAStar: If the DAG part is not a hub-at-1 star with one common weight
    """
    n = m.n
    weights = {w for _, _, w in m.dag_edges}
    expected = {(i, 1) for i in range(2, n + 1)}
    if {(c, p) for c, p, _ in m.dag_edges} != expected or len(m.dag_edges) != n - 1 or len(weights) != 1:
        raise NotAStar("DAG part must be edges (i, 1, rho) for i = 2..n with one common weight")

    rho = weights.pop()
    p_diag = m.reverse_adjacency().sum(axis=1)
    values = np.concatenate([[0.0], rho + p_diag[: n - 1]]).astype(complex)
    return Spectrum(eigenvalues=np.sort_complex(values))


def spectra_match(a: Spectrum, b: Spectrum, tol: float = 1e-8) -> bool:
    """Multiset equality of two spectra within tol (optimal one-to-one pairing)."""
    if len(a) != len(b):
        return False
    cost = np.abs(a.eigenvalues[:, None] - b.eigenvalues[None, :])
    rows, cols = linear_sum_assignment(cost)
    return bool(cost[rows, cols].max() <= tol)


# ==================== Reports and verdicts ====================

def analyze(m: MixedGraph, zero_tol: float = ZERO_TOL) -> SpectralReport:
    """Spectrum, both criteria, Gershgorin bound and spanning-tree flag of a mixed graph."""
    spec = laplacian_spectrum(m)
    tree = has_spanning_tree(m)

    try:
        abs_value = abs_criterion(spec, zero_tol)
        rel_value = rel_criterion(spec, zero_tol)
    except AllEigenvaluesZero:
        # Only possible without a spanning tree, where the verdict is fixed anyway
        logger.warning(f"All eigenvalues are zero for n={m.n}; criteria reported as 0")
        abs_value = rel_value = 0.0

    report = SpectralReport(
        spectrum=spec,
        abs_criterion=abs_value,
        rel_criterion=rel_value,
        gershgorin_bound=gershgorin_bound(assumption_params(m)),
        has_spanning_tree=tree,
    )
    logger.debug(f"Analyzed n={m.n}: abs={abs_value:.6g}, rel={rel_value:.6g}, tree={tree}")
    action_logger.spectrum_computed(m.n, abs_value, rel_value)
    return report


def consensus_verdict(
    report: SpectralReport,
    gains: GainPair,
    protocol: Protocol,
    margin_tol: float = MARGIN_TOL,
) -> VerdictResult:
    """
    Compare beta^2/alpha against the protocol's criterion.

    margin = beta^2/alpha - criterion. Within margin_tol of zero the outcome is
    BOUNDARY: the closed loop then has eigenvalues on the imaginary axis and
    oscillates. Without a spanning tree the verdict is always NO_CONSENSUS.
    """
    margin = gains.gain_ratio - report.criterion(protocol)

    if not report.has_spanning_tree or margin < -margin_tol:
        verdict = Verdict.NO_CONSENSUS
    elif margin > margin_tol:
        verdict = Verdict.CONSENSUS
    else:
        verdict = Verdict.BOUNDARY

    return VerdictResult(verdict=verdict, margin=margin)
