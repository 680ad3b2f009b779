"""Bound evaluation, the area-decomposition proof as arithmetic, and the
measurement-angle scan.

The bound under test: for three two-valued properties with matched pairs,

    p_same(A,B) + p_same(A,C) + p_same(B,C) >= 1.

The area argument tiles the unit of probability with three regions of a
triplet distribution: "dashed" (a = b), "gray" (a = c) and "dotted" (a
differs from both b and c, which forces b = c).  Their total is at least 1,
and each agreement probability dominates its region, so the sum dominates 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import InvalidArgumentError, InvalidDistributionError
from .lhv import INPUT_SUM_TOL, PropertyTriplet, as_triplet
from .quantum import CorrelationRecord

BOUND_TOL = 1e-12


def bell_sum_check(record: CorrelationRecord) -> tuple[float, bool]:
    """Evaluate the bound; returns (sum, satisfied)."""
    for name, value in (
        ("p_same_ab", record.p_same_ab),
        ("p_same_ac", record.p_same_ac),
        ("p_same_bc", record.p_same_bc),
    ):
        if not math.isfinite(value) or value < -BOUND_TOL or value > 1.0 + BOUND_TOL:
            raise InvalidArgumentError(f"{name} must be a probability in [0, 1], got {value!r}")
    return record.bell_sum, record.bell_sum >= 1.0 - BOUND_TOL


def _normalized_triplet_weights(weights: Mapping) -> dict[PropertyTriplet, float]:
    items: dict[PropertyTriplet, float] = {}
    for key, w in weights.items():
        triplet = as_triplet(key)
        w = float(w)
        if not math.isfinite(w) or w < 0.0:
            raise InvalidDistributionError(
                f"triplet {''.join(map(str, triplet))!r}: weight must be >= 0, got {w!r}"
            )
        if triplet in items:
            raise InvalidDistributionError(f"duplicate triplet {''.join(map(str, triplet))!r}")
        items[triplet] = w
    if not items:
        raise InvalidDistributionError("triplet distribution is empty")
    total = math.fsum(items.values())
    if abs(total - 1.0) > INPUT_SUM_TOL:
        raise InvalidDistributionError(f"triplet weights sum to {total!r}, expected 1")
    return {t: w / total for t, w in items.items()}


@dataclass(frozen=True)
class VennAreas:
    """Region masses of a triplet distribution.

    ``residual`` is what remains after the three regions (counting the
    dashed/gray overlap once) tile the whole; it is zero up to rounding and is
    kept as an explicit consistency witness.
    """

    dashed: float
    gray: float
    dotted: float
    residual: float


def venn_decomposition(weights: Mapping) -> VennAreas:
    """Masses of the regions a=b (dashed), a=c (gray) and a!=b, a!=c (dotted)."""
    dist = _normalized_triplet_weights(weights)
    dashed = math.fsum(w for t, w in dist.items() if t.a == t.b)
    gray = math.fsum(w for t, w in dist.items() if t.a == t.c)
    overlap = math.fsum(w for t, w in dist.items() if t.a == t.b and t.a == t.c)
    dotted = math.fsum(w for t, w in dist.items() if t.a != t.b and t.a != t.c)
    residual = 1.0 - (dashed + gray - overlap) - dotted
    return VennAreas(dashed=dashed, gray=gray, dotted=dotted, residual=residual)


@dataclass(frozen=True)
class VennChain:
    """Termwise record of the area argument for one triplet distribution."""

    areas: VennAreas
    p_same_ab: float
    p_same_ac: float
    p_same_bc: float
    p_same_sum: float
    area_sum: float
    step_bc_dominates_dotted: bool
    step_sum_dominates_areas: bool
    step_areas_cover_unit: bool

    @property
    def holds(self) -> bool:
        return (
            self.step_bc_dominates_dotted
            and self.step_sum_dominates_areas
            and self.step_areas_cover_unit
        )


def venn_chain(weights: Mapping) -> VennChain:
    """Run the area argument termwise on a triplet distribution.

    For matched deterministic objects the agreement probabilities are region
    masses themselves: p_same(A,B) is the dashed mass, p_same(A,C) the gray
    mass, and p_same(B,C) the mass where b = c, which contains the dotted
    region.
    """
    dist = _normalized_triplet_weights(weights)
    areas = venn_decomposition(dist)
    p_ab = math.fsum(w for t, w in dist.items() if t.a == t.b)
    p_ac = math.fsum(w for t, w in dist.items() if t.a == t.c)
    p_bc = math.fsum(w for t, w in dist.items() if t.b == t.c)
    p_sum = p_ab + p_ac + p_bc
    area_sum = areas.dashed + areas.gray + areas.dotted
    return VennChain(
        areas=areas,
        p_same_ab=p_ab,
        p_same_ac=p_ac,
        p_same_bc=p_bc,
        p_same_sum=p_sum,
        area_sum=area_sum,
        step_bc_dominates_dotted=p_bc >= areas.dotted - BOUND_TOL,
        step_sum_dominates_areas=p_sum >= area_sum - BOUND_TOL,
        step_areas_cover_unit=area_sum >= 1.0 - BOUND_TOL,
    )


def venn_bound_check(weights: Mapping) -> bool:
    """True iff the termwise area argument closes for this distribution."""
    return venn_chain(weights).holds


@dataclass(frozen=True, eq=False)
class ScanResult:
    """Bell sums over a grid of measurement angles, first angle pinned to 0.

    ``bell_sums[i, j]`` is the sum at (theta_b_axis[i], theta_c_axis[j]).
    ``argmin`` is the first grid point (row-major) attaining ``min_sum``.
    Angles are radians throughout.
    """

    theta_b_axis: np.ndarray
    theta_c_axis: np.ndarray
    bell_sums: np.ndarray
    min_sum: float
    argmin: tuple[float, float, float]

    def rows(self) -> Iterator[tuple[float, float, float, float]]:
        """Flattened (theta_a, theta_b, theta_c, bell_sum) rows, row-major."""
        for i, tb in enumerate(self.theta_b_axis):
            for j, tc in enumerate(self.theta_c_axis):
                yield 0.0, float(tb), float(tc), float(self.bell_sums[i, j])

    @property
    def grid(self) -> list[tuple[float, float, float, float]]:
        """The full table as materialized rows."""
        return list(self.rows())


def _checked_axis(angles: Sequence[float], name: str) -> np.ndarray:
    axis = np.atleast_1d(np.array(angles, dtype=float, copy=True))
    if axis.ndim != 1 or axis.size == 0:
        raise InvalidArgumentError(f"{name} must be a non-empty 1-d sequence of angles")
    if not np.all(np.isfinite(axis)):
        raise InvalidArgumentError(f"{name} contains non-finite angles")
    return axis


def scan_angles(
    theta_grid: Sequence[float], theta_grid_c: Sequence[float] | None = None
) -> ScanResult:
    """Bell sums of the maximally entangled pair over a grid of basis angles.

    The first object's angle is pinned to 0: the sum depends only on angle
    differences (a common rotation of all three bases leaves it unchanged), so
    the search space is the (theta_b, theta_c) plane.  Evaluation is the Born
    rule vectorized over the grid: agreement probability is the squared ket
    overlap contraction, exactly as in ``quantum.joint_distribution``.
    """
    b = _checked_axis(theta_grid, "theta_grid")
    c = b if theta_grid_c is None else _checked_axis(theta_grid_c, "theta_grid_c")

    cb, sb = np.cos(b / 2.0), np.sin(b / 2.0)
    cc, sc = np.cos(c / 2.0), np.sin(c / 2.0)
    # agreement = |<k0 k0'|state>|^2 + |<k1 k1'|state>|^2; both ket overlaps
    # reduce to the same dot product, and at theta_a = 0 it is cos(theta/2).
    p_ab = cb**2
    p_ac = cc**2
    p_bc = (np.outer(cb, cc) + np.outer(sb, sc)) ** 2
    sums = p_ab[:, None] + p_ac[None, :] + p_bc

    flat_index = int(np.argmin(sums))
    i, j = np.unravel_index(flat_index, sums.shape)
    min_sum = float(sums[i, j])
    sums.setflags(write=False)
    b.setflags(write=False)
    c.setflags(write=False)
    return ScanResult(
        theta_b_axis=b,
        theta_c_axis=c,
        bell_sums=sums,
        min_sum=min_sum,
        argmin=(0.0, float(b[i]), float(c[j])),
    )


def refine_scan(result: ScanResult, window: float, step: float) -> ScanResult:
    """Re-scan a +/- ``window`` neighborhood of the incumbent minimum at ``step``."""
    if step <= 0.0 or window <= 0.0:
        raise InvalidArgumentError("window and step must be positive")
    _, tb, tc = result.argmin
    n = int(round(2.0 * window / step)) + 1
    local_b = tb + np.linspace(-window, window, n)
    local_c = tc + np.linspace(-window, window, n)
    return scan_angles(local_b, local_c)
