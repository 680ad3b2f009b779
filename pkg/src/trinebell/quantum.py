"""Exact two-qubit engine: state vectors, equatorial measurement bases, and
Born-rule joint statistics for a matched pair of qubits.

Conventions
-----------
* Amplitudes are indexed big-endian by the outcome pair (x1, x2): ``amp[0]``
  is 00, ``amp[1]`` is 01, ``amp[2]`` is 10, ``amp[3]`` is 11.  Object 1 owns
  the first index.
* Measurement bases live in the real (equatorial) plane of the Bloch sphere
  and are parametrized by a single angle::

      ket0 = (cos(theta/2),  sin(theta/2))
      ket1 = (sin(theta/2), -cos(theta/2))

  ``theta = 0`` is the computational basis {|0>, |1>}.  The global sign of
  ``ket1`` is a fixed convention; Born probabilities never depend on it.
* Amplitudes are carried as complex numbers even though every built-in state
  and basis is real, so the engine extends to arbitrary two-qubit kets.
* Probability identities are enforced at ``PROB_TOL``; input states are gated
  at ``NORM_TOL`` and renormalized exactly before probabilities are formed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, InvalidStateError

NORM_TOL = 1e-9
PROB_TOL = 1e-12
RAY_TOL = 1e-10

TRINE_ANGLES: tuple[float, float, float] = (0.0, 2.0 * math.pi / 3.0, -2.0 * math.pi / 3.0)


@dataclass(frozen=True)
class TwoQubitState:
    """State vector of a qubit pair over the product basis {00, 01, 10, 11}.

    Construction only checks finiteness; operations that form probabilities
    gate on normalization so that deliberately unnormalized vectors can be
    built and rejected where they matter.
    """

    amp: tuple[complex, complex, complex, complex]

    def __post_init__(self) -> None:
        if len(self.amp) != 4:
            raise InvalidArgumentError(f"expected 4 amplitudes, got {len(self.amp)}")
        amp = tuple(complex(a) for a in self.amp)
        if not all(math.isfinite(a.real) and math.isfinite(a.imag) for a in amp):
            raise InvalidArgumentError("amplitudes must be finite")
        object.__setattr__(self, "amp", amp)

    @property
    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amp))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm - 1.0) <= tol


def make_phi_plus() -> TwoQubitState:
    """The maximally entangled pair (|00> + |11>)/sqrt(2)."""
    r = math.sqrt(0.5)
    return TwoQubitState((r, 0.0, 0.0, r))


@dataclass(frozen=True)
class MeasurementBasis:
    """An orthonormal single-qubit basis pair in the equatorial plane.

    ``label`` is a property name ("A", "B", "C", or free form) carried into
    reports; it does not affect any computation.
    """

    theta: float
    ket0: tuple[float, float]
    ket1: tuple[float, float]
    label: str = ""

    def __post_init__(self) -> None:
        for name, ket in (("ket0", self.ket0), ("ket1", self.ket1)):
            if len(ket) != 2 or not all(math.isfinite(v) for v in ket):
                raise InvalidArgumentError(f"{name} must be a finite length-2 vector")
            n = math.hypot(*ket)
            if abs(n - 1.0) > PROB_TOL:
                raise InvalidArgumentError(f"{name} is not unit norm (|{name}| = {n!r})")
        inner = self.ket0[0] * self.ket1[0] + self.ket0[1] * self.ket1[1]
        if abs(inner) > PROB_TOL:
            raise InvalidArgumentError(f"ket0 and ket1 are not orthogonal (<0|1> = {inner!r})")

    def ket(self, outcome: int) -> tuple[float, float]:
        if outcome not in (0, 1):
            raise InvalidArgumentError(f"outcome must be 0 or 1, got {outcome!r}")
        return self.ket0 if outcome == 0 else self.ket1


def basis_from_angle(theta: float, label: str = "") -> MeasurementBasis:
    """Build the equatorial basis at angle ``theta`` (radians)."""
    theta = float(theta)
    if not math.isfinite(theta):
        raise InvalidArgumentError(f"theta must be finite, got {theta!r}")
    h = 0.5 * theta
    c, s = math.cos(h), math.sin(h)
    return MeasurementBasis(theta=theta, ket0=(c, s), ket1=(s, -c), label=label)


def trine_bases() -> dict[str, MeasurementBasis]:
    """The three property bases A, B, C separated by 120 degrees."""
    return {
        label: basis_from_angle(angle, label)
        for label, angle in zip(("A", "B", "C"), TRINE_ANGLES)
    }


@dataclass(frozen=True, eq=False)
class JointOutcomeDistribution:
    """Joint Born probabilities p[x, x'] for one basis choice per object."""

    p: np.ndarray
    settings: tuple[str, str]

    def __eq__(self, other) -> bool:
        if not isinstance(other, JointOutcomeDistribution):
            return NotImplemented
        return self.settings == other.settings and bool(np.array_equal(self.p, other.p))

    def __post_init__(self) -> None:
        p = np.array(self.p, dtype=float)
        if p.shape != (2, 2):
            raise InvalidArgumentError(f"expected a 2x2 table, got shape {p.shape}")
        if p.min() < -PROB_TOL:
            raise InvalidArgumentError(f"negative probability {p.min()!r}")
        if abs(p.sum() - 1.0) > PROB_TOL:
            raise InvalidArgumentError(f"probabilities sum to {p.sum()!r}, expected 1")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "settings", (str(self.settings[0]), str(self.settings[1])))

    @property
    def p_same(self) -> float:
        return float(self.p[0, 0] + self.p[1, 1])


def _gated_amplitudes(state: TwoQubitState) -> np.ndarray:
    n = state.norm
    if abs(n - 1.0) > NORM_TOL:
        raise InvalidStateError(f"state norm deviates from 1 by {abs(n - 1.0)!r} (> {NORM_TOL})")
    return np.asarray(state.amp, dtype=complex) / n


def _outcome_amplitude(amp: np.ndarray, k1: tuple[float, float], k2: tuple[float, float]) -> complex:
    # <k1 x k2 | psi> with real kets; amp is big-endian (x1, x2)
    return (
        k1[0] * (k2[0] * amp[0] + k2[1] * amp[1])
        + k1[1] * (k2[0] * amp[2] + k2[1] * amp[3])
    )


def joint_distribution(
    state: TwoQubitState, basis1: MeasurementBasis, basis2: MeasurementBasis
) -> JointOutcomeDistribution:
    """Born-rule joint outcome table: p[x, x'] = |<ket_x ket_x' | state>|^2."""
    amp = _gated_amplitudes(state)
    p = np.empty((2, 2), dtype=float)
    for x in (0, 1):
        for xp in (0, 1):
            p[x, xp] = abs(_outcome_amplitude(amp, basis1.ket(x), basis2.ket(xp))) ** 2
    return JointOutcomeDistribution(p=p, settings=(basis1.label, basis2.label))


def p_same(state: TwoQubitState, basis1: MeasurementBasis, basis2: MeasurementBasis) -> float:
    """Probability that measuring basis1 on object 1 and basis2 on object 2 agree."""
    return joint_distribution(state, basis1, basis2).p_same


@dataclass(frozen=True)
class CorrelationRecord:
    """The three pairwise agreement probabilities and their sum.

    The sum identity is enforced here; the range of the individual entries is
    the caller's contract and is checked where the bound is evaluated.
    """

    p_same_ab: float
    p_same_ac: float
    p_same_bc: float
    bell_sum: float

    def __post_init__(self) -> None:
        total = self.p_same_ab + self.p_same_ac + self.p_same_bc
        if abs(self.bell_sum - total) > PROB_TOL:
            raise InvalidArgumentError(
                f"bell_sum {self.bell_sum!r} does not equal the sum of parts {total!r}"
            )

    @classmethod
    def from_p_same(cls, ab: float, ac: float, bc: float) -> "CorrelationRecord":
        return cls(p_same_ab=ab, p_same_ac=ac, p_same_bc=bc, bell_sum=ab + ac + bc)


def bell_record(
    state: TwoQubitState,
    a: MeasurementBasis,
    b: MeasurementBasis,
    c: MeasurementBasis,
) -> CorrelationRecord:
    """Agreement probabilities for the setting pairs (a,b), (a,c), (b,c)."""
    return CorrelationRecord.from_p_same(
        p_same(state, a, b), p_same(state, a, c), p_same(state, b, c)
    )


def verify_schmidt_invariance(state: TwoQubitState, basis: MeasurementBasis) -> bool:
    """True iff ``state`` equals (ket0 ket0 + ket1 ket1)/sqrt(2) up to a global phase.

    The comparison is a ray comparison: the candidate is aligned to the state
    by the phase of their overlap and amplitudes must then match within
    ``RAY_TOL`` each.
    """
    if abs(state.norm - 1.0) > NORM_TOL:
        return False
    k0, k1 = basis.ket0, basis.ket1
    target = np.array(
        [
            k0[0] * k0[0] + k1[0] * k1[0],
            k0[0] * k0[1] + k1[0] * k1[1],
            k0[1] * k0[0] + k1[1] * k1[0],
            k0[1] * k0[1] + k1[1] * k1[1],
        ],
        dtype=complex,
    ) / math.sqrt(2.0)
    amp = np.asarray(state.amp, dtype=complex)
    overlap = complex(np.vdot(target, amp))
    if abs(overlap) <= RAY_TOL:
        return False
    phase = overlap / abs(overlap)
    return bool(np.max(np.abs(amp - phase * target)) <= RAY_TOL)


def phase_rotated(state: TwoQubitState, phase: float) -> TwoQubitState:
    """The same ray with a global phase applied; useful for invariance tests."""
    z = cmath.exp(1j * phase)
    return TwoQubitState(tuple(z * a for a in state.amp))
