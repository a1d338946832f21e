"""
Scalability sweeps over growing families with fixed gains.

Core claims:
    - the path-ring family breaks the relative protocol at a finite size for every gain pair
    - breaking sizes grow with beta^2/alpha
    - the absolute protocol survives every size once beta^2/alpha clears the Gershgorin bound
    - star families never break either protocol
    - per-size records are reproducible and independent of threading
"""

import math

import pytest
from pytest import approx

from src.dynamics import Consistency, SimOutcome, SimulationConfig
from src.errors import GraphError, SweepError
from src.graph import AssumptionParams, assumption_params
from src.spectral import GainPair, Protocol, Verdict, path_family_rel_criterion, scalable_absolute_gains
from src.sweep import FamilyKind, FamilySpec, find_breaking_size, run_sweep


def _ring_family(n_start: int = 3, n_stop: int = 20) -> FamilySpec:
    return FamilySpec(kind=FamilyKind.PATH_FULL_SPAN_REVERSE, n_start=n_start, n_stop=n_stop)


# == 1. FamilySpec ==========================================================

class TestFamilySpec:
    def test_sizes_with_stride(self):
        spec = FamilySpec(kind=FamilyKind.STAR, n_start=3, n_stop=11, n_stride=4)
        assert list(spec.sizes()) == [3, 7, 11]

    @pytest.mark.parametrize("kwargs", [
        {"n_start": 2, "n_stop": 5},
        {"n_start": 5, "n_stop": 4},
        {"n_start": 3, "n_stop": 5, "n_stride": 0},
    ])
    def test_invalid_ranges(self, kwargs):
        with pytest.raises(GraphError):
            FamilySpec(kind=FamilyKind.STAR, **kwargs)

    def test_inner_reverse_needs_room(self):
        with pytest.raises(GraphError):
            FamilySpec(kind=FamilyKind.PATH_INNER_REVERSE, n_start=4, n_stop=8, inner_q=4)

    def test_per_size_seed_ignores_range(self):
        a = FamilySpec(kind=FamilyKind.RANDOM_MIXED, n_start=3, n_stop=10, seed=5)
        b = FamilySpec(kind=FamilyKind.RANDOM_MIXED, n_start=8, n_stop=40, seed=5)
        assert a.seed_for(9) == b.seed_for(9)
        assert a.build(9) == b.build(9)
        assert a.seed_for(9) != a.seed_for(9, stream=1)

    def test_random_members_respect_caps(self):
        spec = FamilySpec(kind=FamilyKind.RANDOM_MIXED, n_start=5, n_stop=40, n_stride=5, zeta=2, xi=3)
        for n in spec.sizes():
            p = assumption_params(spec.build(n))
            assert p.zeta <= 2 and p.xi <= 3

    def test_star_default_reverse_count(self):
        spec = FamilySpec(kind=FamilyKind.STAR, n_start=3, n_stop=12)
        assert len(spec.build(12).reverse_edges) == 6

    def test_path_inner_edge(self):
        spec = FamilySpec(kind=FamilyKind.PATH_INNER_REVERSE, n_start=5, n_stop=9, inner_q=3)
        assert spec.build(9).reverse_edges == ((3, 9, 1.0),)


# == 2. Path-ring family ====================================================

class TestPathRingFamily:
    def test_absolute_holds_relative_breaks_at_ten(self):
        result = run_sweep(_ring_family(), GainPair(1.0, 2.0))
        for record in result.records:
            assert record.verdicts[Protocol.ABSOLUTE].verdict is Verdict.CONSENSUS
            expected = Verdict.NO_CONSENSUS if record.n >= 10 else Verdict.CONSENSUS
            assert record.verdicts[Protocol.RELATIVE].verdict is expected
        assert result.breaking_sizes[Protocol.RELATIVE].n == 10
        assert result.breaking_sizes[Protocol.ABSOLUTE].n is None

    def test_relative_criterion_follows_closed_form(self):
        result = run_sweep(_ring_family(3, 40), GainPair(1.0, 1.0))
        for record in result.records:
            assert record.span == record.n - 1
            assert record.rel_criterion == approx(path_family_rel_criterion(record.n - 1), abs=1e-8)

    def test_absolute_criterion_within_ring_bound(self):
        result = run_sweep(_ring_family(3, 60), GainPair(1.0, 1.0))
        for record in result.records:
            # zeta = xi = 1 with unit weights
            assert record.abs_criterion <= 4.0
            assert record.report.gershgorin_bound == approx(4.0)

    @pytest.mark.parametrize("beta, expected", [(1.0, 6), (2.0, 10)])
    def test_breaking_sizes(self, beta, expected):
        breaking = find_breaking_size(_ring_family(), GainPair(1.0, beta), Protocol.RELATIVE, n_cap=200)
        assert breaking.n == expected

    def test_absolute_never_breaks_up_to_200(self):
        breaking = find_breaking_size(_ring_family(), GainPair(1.0, 2.0), Protocol.ABSOLUTE, n_cap=200)
        assert breaking.n is None
        assert breaking.boundary_sizes == ()

    def test_scalable_gains_hold_every_size(self):
        gains = scalable_absolute_gains(AssumptionParams(zeta=1, xi=1, a_bar=1.0, a_bar_r=1.0, d_max=1.0))
        assert find_breaking_size(_ring_family(), gains, Protocol.ABSOLUTE, n_cap=200).n is None

    def test_breaking_size_nondecreasing_in_gain_ratio(self):
        sizes = []
        for beta in (0.8, 1.0, 1.5, 2.0, 3.0, 4.0):
            breaking = find_breaking_size(_ring_family(), GainPair(1.0, beta), Protocol.RELATIVE, n_cap=400)
            assert breaking.n is not None
            sizes.append(breaking.n)
        assert sizes == sorted(sizes)

    def test_boundary_sizes_are_not_breaking(self):
        # beta^2/alpha = 1.5 sits exactly on the relative criterion at n = 6
        breaking = find_breaking_size(_ring_family(), GainPair(1.0, math.sqrt(1.5)), Protocol.RELATIVE, n_cap=20)
        assert breaking.boundary_sizes == (6,)
        assert breaking.n == 7

    def test_cap_below_start(self):
        with pytest.raises(SweepError):
            find_breaking_size(_ring_family(5, 10), GainPair(1.0, 1.0), Protocol.RELATIVE, n_cap=4)


# == 3. Star and random families ============================================

class TestOtherFamilies:
    def test_star_never_breaks(self):
        spec = FamilySpec(kind=FamilyKind.STAR, n_start=3, n_stop=40, rho=1.0)
        result = run_sweep(spec, GainPair(3.0, 0.2))
        assert all(r.report.spectrum.max_imag <= 1e-8 for r in result.records)
        for protocol in Protocol:
            assert result.breaking_sizes[protocol].n is None

    def test_path_inner_breaks_relative(self):
        spec = FamilySpec(kind=FamilyKind.PATH_INNER_REVERSE, n_start=4, n_stop=60, inner_q=2)
        result = run_sweep(spec, GainPair(1.0, 2.0))
        assert result.breaking_sizes[Protocol.RELATIVE].n is not None
        assert result.breaking_sizes[Protocol.ABSOLUTE].n is None

    def test_random_family_with_scalable_gains(self):
        spec = FamilySpec(kind=FamilyKind.RANDOM_MIXED, n_start=5, n_stop=60, n_stride=5, zeta=3, xi=3)
        high = spec.weight_bounds[1]
        gains = scalable_absolute_gains(AssumptionParams(zeta=3, xi=3, a_bar=high, a_bar_r=high, d_max=6 * high))
        result = run_sweep(spec, gains)
        assert result.breaking_sizes[Protocol.ABSOLUTE].n is None
        for record in result.records:
            assert record.report.has_spanning_tree
            assert record.abs_criterion <= record.report.gershgorin_bound + 1e-8

    def test_infeasible_member_reports_its_size(self):
        spec = FamilySpec(kind=FamilyKind.STAR, n_start=3, n_stop=6, reverse_count=5)
        with pytest.raises(SweepError) as excinfo:
            run_sweep(spec, GainPair(1.0, 1.0))
        assert excinfo.value.n == 3


# == 4. Reproducibility and output ==========================================

class TestSweepResult:
    def test_threads_keep_order_and_values(self):
        spec = FamilySpec(kind=FamilyKind.RANDOM_MIXED, n_start=3, n_stop=30, seed=8)
        serial = run_sweep(spec, GainPair(1.0, 2.0))
        threaded = run_sweep(spec, GainPair(1.0, 2.0), workers=4)
        assert serial.to_rows() == threaded.to_rows()

    def test_rows_without_simulation(self):
        result = run_sweep(_ring_family(3, 5), GainPair(1.0, 1.0))
        row = result.to_rows()[0]
        assert row["n"] == 3 and row["span"] == 2
        assert row["absolute_simulation"] == "" and row["relative_consistency"] == ""

    def test_dict_view(self):
        result = run_sweep(_ring_family(3, 12), GainPair(1.0, 1.0))
        data = result.to_dict()
        assert data["family"] == "path-ring"
        # 1 + cos(2 pi/n) equals 1 at n = 4 and exceeds it from n = 5
        assert data["breaking_sizes"] == {"absolute": 5, "relative": 6}
        assert data["boundary_sizes"] == {"absolute": [4], "relative": []}
        assert len(data["records"]) == 10
        assert "eigenvalues" not in data["records"][0]
        assert len(result.to_dict(full=True)["records"][-1]["eigenvalues"]) == 12

    @pytest.mark.slow
    def test_simulated_records_agree(self):
        cfg = SimulationConfig(dt=1e-2, t_max=1000.0, sample_stride=1000)
        result = run_sweep(_ring_family(8, 11), GainPair(1.0, 2.0), simulate_flag=True, cfg=cfg, workers=2)
        for record in result.records:
            assert Consistency.DISAGREE not in record.consistency.values()
            assert record.simulations[Protocol.ABSOLUTE] is SimOutcome.CONVERGED
            assert record.consistency[Protocol.ABSOLUTE] is Consistency.AGREE
        by_n = {r.n: r for r in result.records}
        for n in (10, 11):
            assert by_n[n].simulations[Protocol.RELATIVE] is SimOutcome.DIVERGED
            assert by_n[n].consistency[Protocol.RELATIVE] is Consistency.AGREE
