import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trinebell import (
    CorrelationRecord,
    InvalidArgumentError,
    InvalidStateError,
    TwoQubitState,
    basis_from_angle,
    bell_record,
    joint_distribution,
    p_same,
    verify_schmidt_invariance,
)
from trinebell.quantum import phase_rotated

SQRT_HALF = 1.0 / math.sqrt(2.0)

angles = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


def agreement_oracle(theta1, theta2):
    # closed form verified symbolically in test_agreement_closed_form_symbolic
    return math.cos((theta1 - theta2) / 2.0) ** 2


class TestPhiPlus:
    def test_amplitudes(self, phi_plus):
        assert phi_plus.amp[0] == complex(0.7071067811865476)
        assert phi_plus.amp[3] == complex(0.7071067811865476)
        assert phi_plus.amp[1] == 0 and phi_plus.amp[2] == 0

    def test_normalized(self, phi_plus):
        assert abs(sum(abs(a) ** 2 for a in phi_plus.amp) - 1.0) <= 1e-12

    def test_symmetric(self, phi_plus):
        assert phi_plus.amp[0] == phi_plus.amp[3]


class TestBasisFromAngle:
    def test_computational(self):
        b = basis_from_angle(0.0, "A")
        assert b.ket0 == (1.0, 0.0)
        assert b.ket1 == (0.0, -1.0)

    def test_plus_120(self):
        b = basis_from_angle(2.0 * math.pi / 3.0, "B")
        assert b.ket0 == pytest.approx((0.5, math.sqrt(3.0) / 2.0), abs=1e-15)
        assert b.ket1 == pytest.approx((math.sqrt(3.0) / 2.0, -0.5), abs=1e-15)

    def test_minus_120_spans_expected_rays(self):
        # same rays as ((1/2, -sqrt3/2), (sqrt3/2, 1/2)) up to a global sign
        b = basis_from_angle(-2.0 * math.pi / 3.0, "C")
        ray0 = (0.5, -math.sqrt(3.0) / 2.0)
        ray1 = (math.sqrt(3.0) / 2.0, 0.5)
        dot0 = b.ket0[0] * ray0[0] + b.ket0[1] * ray0[1]
        dot1 = b.ket1[0] * ray1[0] + b.ket1[1] * ray1[1]
        assert abs(abs(dot0) - 1.0) <= 1e-12
        assert abs(abs(dot1) - 1.0) <= 1e-12

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_non_finite_rejected(self, bad):
        with pytest.raises(InvalidArgumentError):
            basis_from_angle(bad)

    @given(angles)
    def test_orthonormal(self, theta):
        b = basis_from_angle(theta)
        assert abs(math.hypot(*b.ket0) - 1.0) <= 1e-12
        assert abs(math.hypot(*b.ket1) - 1.0) <= 1e-12
        assert abs(b.ket0[0] * b.ket1[0] + b.ket0[1] * b.ket1[1]) <= 1e-12


class TestJointDistribution:
    def test_trine_ab(self, phi_plus, trine):
        jd = joint_distribution(phi_plus, trine["A"], trine["B"])
        assert jd.p[0, 0] == pytest.approx(0.125, abs=1e-12)
        assert jd.p[1, 1] == pytest.approx(0.125, abs=1e-12)
        # off-diagonal from normalization with p_same = 1/4, split by symmetry
        assert jd.p[0, 1] == pytest.approx(0.375, abs=1e-12)
        assert jd.p[1, 0] == pytest.approx(0.375, abs=1e-12)

    def test_same_setting(self, phi_plus, trine):
        jd = joint_distribution(phi_plus, trine["A"], trine["A"])
        assert jd.p[0, 0] == pytest.approx(0.5, abs=1e-12)
        assert jd.p[1, 1] == pytest.approx(0.5, abs=1e-12)
        assert jd.p[0, 1] == pytest.approx(0.0, abs=1e-12)
        assert jd.p[1, 0] == pytest.approx(0.0, abs=1e-12)

    def test_product_state(self, trine):
        zero_zero = TwoQubitState((1.0, 0.0, 0.0, 0.0))
        jd = joint_distribution(zero_zero, trine["A"], trine["A"])
        assert jd.p[0, 0] == 1.0
        assert jd.p[0, 1] == jd.p[1, 0] == jd.p[1, 1] == 0.0

    def test_unnormalized_rejected(self, trine):
        bad = TwoQubitState((1.0, 0.0, 0.0, 1.0))
        with pytest.raises(InvalidStateError):
            joint_distribution(bad, trine["A"], trine["A"])

    @given(angles, angles, st.integers(min_value=0, max_value=2**32 - 1))
    def test_normalization_random_states(self, t1, t2, seed):
        rng = np.random.default_rng(seed)
        raw = rng.normal(size=4) + 1j * rng.normal(size=4)
        state = TwoQubitState(tuple(raw / np.linalg.norm(raw)))
        jd = joint_distribution(state, basis_from_angle(t1), basis_from_angle(t2))
        assert jd.p.min() >= 0.0
        assert abs(jd.p.sum() - 1.0) <= 1e-12


class TestPSame:
    def test_trine_ab(self, phi_plus, trine):
        assert p_same(phi_plus, trine["A"], trine["B"]) == pytest.approx(0.25, abs=1e-12)

    def test_same_basis(self, phi_plus, trine):
        assert p_same(phi_plus, trine["B"], trine["B"]) == pytest.approx(1.0, abs=1e-12)

    def test_perfect_correlation_360_grid(self, phi_plus):
        for theta in np.linspace(0.0, 2.0 * math.pi, 360, endpoint=False):
            b = basis_from_angle(float(theta))
            assert abs(p_same(phi_plus, b, b) - 1.0) <= 1e-12

    def test_angle_law_100x100_grid(self, phi_plus):
        grid = np.linspace(-math.pi, math.pi, 100)
        bases = [basis_from_angle(float(t)) for t in grid]
        for i, t1 in enumerate(grid):
            for j, t2 in enumerate(grid):
                expected = agreement_oracle(float(t1), float(t2))
                assert abs(p_same(phi_plus, bases[i], bases[j]) - expected) <= 1e-10

    @given(t1=angles, t2=angles)
    def test_symmetry(self, phi_plus, t1, t2):
        b1, b2 = basis_from_angle(t1), basis_from_angle(t2)
        assert abs(p_same(phi_plus, b1, b2) - p_same(phi_plus, b2, b1)) <= 1e-12

    @given(t1=angles, t2=angles)
    def test_matches_oracle(self, phi_plus, t1, t2):
        b1, b2 = basis_from_angle(t1), basis_from_angle(t2)
        assert abs(p_same(phi_plus, b1, b2) - agreement_oracle(t1, t2)) <= 1e-10


def test_agreement_closed_form_symbolic():
    """Independent oracle: expand the Born rule symbolically."""
    sp = pytest.importorskip("sympy")
    t1, t2 = sp.symbols("t1 t2", real=True)

    def ket(outcome, t):
        if outcome == 0:
            return sp.Matrix([sp.cos(t / 2), sp.sin(t / 2)])
        return sp.Matrix([sp.sin(t / 2), -sp.cos(t / 2)])

    state = sp.Matrix([1, 0, 0, 1]) / sp.sqrt(2)

    def amplitude(x1, x2):
        k1, k2 = ket(x1, t1), ket(x2, t2)
        kron = sp.Matrix([k1[0] * k2[0], k1[0] * k2[1], k1[1] * k2[0], k1[1] * k2[1]])
        return (kron.T * state)[0]

    agreement = amplitude(0, 0) ** 2 + amplitude(1, 1) ** 2
    assert sp.simplify(agreement - sp.cos((t1 - t2) / 2) ** 2) == 0


class TestBellRecord:
    def test_trine(self, phi_plus, trine):
        r = bell_record(phi_plus, trine["A"], trine["B"], trine["C"])
        assert r.p_same_ab == pytest.approx(0.25, abs=1e-12)
        assert r.p_same_ac == pytest.approx(0.25, abs=1e-12)
        assert r.p_same_bc == pytest.approx(0.25, abs=1e-12)
        assert r.bell_sum == pytest.approx(0.75, abs=1e-12)

    def test_identical_settings(self, phi_plus, trine):
        r = bell_record(phi_plus, trine["A"], trine["A"], trine["A"])
        for value in (r.p_same_ab, r.p_same_ac, r.p_same_bc):
            assert value == pytest.approx(1.0, abs=1e-12)
        assert r.bell_sum == pytest.approx(3.0, abs=1e-12)

    def test_opposite_angles(self, phi_plus):
        # oracle: agreement is cos^2 of half the angle difference
        a, b, c = (basis_from_angle(t) for t in (0.0, math.pi, math.pi))
        r = bell_record(phi_plus, a, b, c)
        assert r.p_same_ab == pytest.approx(0.0, abs=1e-12)
        assert r.p_same_ac == pytest.approx(0.0, abs=1e-12)
        assert r.p_same_bc == pytest.approx(1.0, abs=1e-12)
        assert r.bell_sum == pytest.approx(1.0, abs=1e-12)


def test_correlation_record_sum_identity_enforced():
    with pytest.raises(InvalidArgumentError):
        CorrelationRecord(p_same_ab=0.2, p_same_ac=0.2, p_same_bc=0.2, bell_sum=0.7)


class TestSchmidtInvariance:
    def test_trine_bases(self, phi_plus, trine):
        for basis in trine.values():
            assert verify_schmidt_invariance(phi_plus, basis)

    def test_angle_sweep(self, phi_plus):
        for theta in np.linspace(-math.pi, math.pi, 73):
            assert verify_schmidt_invariance(phi_plus, basis_from_angle(float(theta)))

    def test_product_state_not_invariant(self, trine):
        zero_zero = TwoQubitState((1.0, 0.0, 0.0, 0.0))
        assert not verify_schmidt_invariance(zero_zero, trine["B"])

    @given(theta=angles, phase=angles)
    def test_global_phase_irrelevant(self, phi_plus, theta, phase):
        rotated = phase_rotated(phi_plus, phase)
        assert verify_schmidt_invariance(rotated, basis_from_angle(theta))

    def test_orthogonal_bell_state_rejected(self, trine):
        psi_plus = TwoQubitState((0.0, SQRT_HALF, SQRT_HALF, 0.0))
        assert not verify_schmidt_invariance(psi_plus, trine["A"])
