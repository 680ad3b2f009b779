import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from trinebell import (
    CorrelationRecord,
    InvalidArgumentError,
    InvalidDistributionError,
    basis_from_angle,
    bell_record,
    bell_sum_check,
    enumerate_deterministic_strategies,
    lhv_bell_record,
    model_from_triplet_distribution,
    scan_angles,
    venn_bound_check,
    venn_chain,
    venn_decomposition,
)
from trinebell.analysis import refine_scan

ALL_TRIPLETS = enumerate_deterministic_strategies()
TRINE = (0.0, 2.0 * math.pi / 3.0, -2.0 * math.pi / 3.0)


@st.composite
def triplet_distributions(draw):
    values = draw(
        st.lists(
            st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
            min_size=8,
            max_size=8,
        )
    )
    total = sum(values)
    assume(total > 1e-6)
    return {t: v / total for t, v in zip(ALL_TRIPLETS, values)}


class TestBellSumCheck:
    def test_violating_record(self):
        total, ok = bell_sum_check(CorrelationRecord.from_p_same(0.25, 0.25, 0.25))
        assert total == 0.75
        assert ok is False

    def test_identical_settings(self):
        total, ok = bell_sum_check(CorrelationRecord.from_p_same(1.0, 1.0, 1.0))
        assert (total, ok) == (3.0, True)

    def test_uniform_mixture_value(self):
        # oracle: uniform-8 has four agreeing triplets per pair
        total, ok = bell_sum_check(CorrelationRecord.from_p_same(0.5, 0.5, 0.5))
        assert (total, ok) == (1.5, True)

    def test_boundary_counts_as_satisfied(self):
        _, ok = bell_sum_check(CorrelationRecord.from_p_same(0.0, 0.0, 1.0))
        assert ok is True

    def test_out_of_range_rejected(self):
        with pytest.raises(InvalidArgumentError):
            bell_sum_check(CorrelationRecord.from_p_same(1.5, -0.25, 0.25))


class TestVennDecomposition:
    def test_uniform(self):
        # oracle by enumeration: 4 triplets with a=b, 4 with a=c, 2 with a!=b and a!=c
        weights = {t: 0.125 for t in ALL_TRIPLETS}
        dashed = sum(w for t, w in weights.items() if t.a == t.b)
        gray = sum(w for t, w in weights.items() if t.a == t.c)
        dotted = sum(w for t, w in weights.items() if t.a != t.b and t.a != t.c)
        assert (dashed, gray, dotted) == (0.5, 0.5, 0.25)
        areas = venn_decomposition(weights)
        assert (areas.dashed, areas.gray, areas.dotted) == (0.5, 0.5, 0.25)
        assert areas.residual == pytest.approx(0.0, abs=1e-12)

    def test_point_mass_dotted(self):
        areas = venn_decomposition({(0, 1, 1): 1.0})
        assert (areas.dashed, areas.gray, areas.dotted) == (0.0, 0.0, 1.0)

    def test_point_mass_constant(self):
        areas = venn_decomposition({(0, 0, 0): 1.0})
        assert (areas.dashed, areas.gray, areas.dotted) == (1.0, 1.0, 0.0)

    def test_bad_normalization(self):
        with pytest.raises(InvalidDistributionError):
            venn_decomposition({(0, 0, 0): 0.5})

    @given(triplet_distributions())
    def test_regions_tile_the_unit(self, weights):
        areas = venn_decomposition(weights)
        assert abs(areas.residual) <= 1e-12
        assert min(areas.dashed, areas.gray, areas.dotted) >= 0.0


class TestVennBound:
    def test_uniform_chain_values(self):
        chain = venn_chain({t: 0.125 for t in ALL_TRIPLETS})
        assert chain.area_sum == pytest.approx(1.25, abs=1e-12)
        assert chain.p_same_sum == pytest.approx(1.5, abs=1e-12)
        assert chain.holds

    def test_all_point_masses(self):
        for t in ALL_TRIPLETS:
            assert venn_bound_check({t: 1.0})

    @given(triplet_distributions())
    def test_random_distributions(self, weights):
        assert venn_bound_check(weights)

    @given(triplet_distributions())
    def test_bell_sum_identity(self, weights):
        # the model-path bell sum equals dashed + gray + mass(b = c)
        record = lhv_bell_record(model_from_triplet_distribution(weights))
        chain = venn_chain(weights)
        assert record.bell_sum == pytest.approx(chain.p_same_sum, abs=1e-12)
        mass_bc = chain.p_same_bc
        assert record.bell_sum == pytest.approx(chain.areas.dashed + chain.areas.gray + mass_bc, abs=1e-12)
        assert mass_bc >= chain.areas.dotted - 1e-12


class TestScan:
    def test_trine_grid(self):
        result = scan_angles(np.array(TRINE))
        assert result.min_sum <= 0.75 + 1e-12
        assert result.bell_sums.shape == (3, 3)

    def test_single_point(self):
        result = scan_angles([0.0])
        assert result.min_sum == pytest.approx(3.0, abs=1e-12)
        assert result.argmin == (0.0, 0.0, 0.0)

    def test_min_matches_table(self):
        result = scan_angles(np.radians(np.arange(0.0, 360.0, 10.0)))
        assert result.min_sum == result.bell_sums.min()

    def test_agrees_with_per_point_records(self, phi_plus):
        grid = np.radians(np.arange(0.0, 360.0, 30.0))
        result = scan_angles(grid)
        basis_a = basis_from_angle(0.0)
        for i, tb in enumerate(grid):
            for j, tc in enumerate(grid):
                record = bell_record(
                    phi_plus, basis_a, basis_from_angle(float(tb)), basis_from_angle(float(tc))
                )
                assert abs(result.bell_sums[i, j] - record.bell_sum) <= 1e-12

    def test_quantum_floor(self):
        result = scan_angles(np.radians(np.arange(0.0, 360.0, 3.0)))
        assert result.bell_sums.min() >= 0.75 - 1e-6

    @given(
        ta=st.floats(-3.0, 3.0, allow_nan=False),
        tb=st.floats(-3.0, 3.0, allow_nan=False),
        tc=st.floats(-3.0, 3.0, allow_nan=False),
        offset=st.floats(-3.0, 3.0, allow_nan=False),
    )
    def test_global_rotation_invariance(self, phi_plus, ta, tb, tc, offset):
        base = bell_record(
            phi_plus,
            basis_from_angle(ta),
            basis_from_angle(tb),
            basis_from_angle(tc),
        )
        shifted = bell_record(
            phi_plus,
            basis_from_angle(ta + offset),
            basis_from_angle(tb + offset),
            basis_from_angle(tc + offset),
        )
        assert abs(base.bell_sum - shifted.bell_sum) <= 1e-10

    def test_empty_grid_rejected(self):
        with pytest.raises(InvalidArgumentError):
            scan_angles([])

    def test_non_finite_grid_rejected(self):
        with pytest.raises(InvalidArgumentError):
            scan_angles([0.0, math.nan])

    def test_refine_near_trine(self):
        coarse = scan_angles(np.radians(np.arange(0.0, 360.0, 5.0)))
        refined = refine_scan(coarse, math.radians(1.0), math.radians(0.05))
        assert refined.min_sum <= coarse.min_sum + 1e-12
        assert refined.min_sum == pytest.approx(0.75, abs=1e-6)

    def test_refine_rejects_bad_step(self):
        coarse = scan_angles([0.0, 1.0])
        with pytest.raises(InvalidArgumentError):
            refine_scan(coarse, window=1.0, step=0.0)
