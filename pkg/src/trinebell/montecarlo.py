"""Seeded, reproducible sampling of measurement outcomes with uncertainty.

Reproducibility contract
------------------------
All randomness comes from one PCG64 stream seeded by ``RunConfig.seed``.  The
draw order is fixed and part of the contract:

1. settings: one uniform integer in [0, 9) per trial (skipped for a fixed
   setting pair), decoded as (k // 3, k % 3) over the ordered settings A, B, C;
2. outcome uniforms, per trial in trial order:
   * quantum source: one uniform, mapped through the cumulative joint
     distribution of the trial's setting pair in outcome order 00, 01, 10, 11;
   * hidden-variable source: one uniform selecting lambda through the
     cumulative weights, then one uniform per object compared against
     P_i(0 | setting, lambda).

``run_experiment`` draws each stage as a block (vectorized); the per-trial
primitive ``sample_trial`` uses the identical decision rules.  Setting choices
are drawn independently of everything else, so the choice of measurement is
uninformative about the hidden variable by construction.

Identical (config, source) inputs produce bit-identical trial arrays and
reports.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from statistics import NormalDist
from typing import Iterator, Mapping

import numpy as np

from .errors import InvalidArgumentError
from .lhv import SETTINGS, LhvModel, _setting_index
from .quantum import MeasurementBasis, TwoQubitState, joint_distribution, make_phi_plus, trine_bases

Z_99 = NormalDist().inv_cdf(0.995)

ORDERED_PAIRS: tuple[tuple[str, str], ...] = tuple(itertools.product(SETTINGS, repeat=2))
BELL_PAIRS: tuple[tuple[str, str], ...] = (("A", "B"), ("A", "C"), ("B", "C"))

# Wilson replaces the normal interval once either outcome count drops below
# this; the normal approximation has no width at an empirical 0 or 1.
WILSON_COUNT = 5


@dataclass(frozen=True)
class RunConfig:
    """Experiment shape: sample count, seed, engine tag and settings policy.

    ``settings_policy`` is "uniform" (independent uniform pair per trial) or a
    fixed ordered pair written as two setting letters, e.g. "AB".
    """

    n_samples: int
    seed: int
    source: str
    settings_policy: str = "uniform"

    def __post_init__(self) -> None:
        if int(self.n_samples) < 1:
            raise InvalidArgumentError(f"n_samples must be >= 1, got {self.n_samples!r}")
        object.__setattr__(self, "n_samples", int(self.n_samples))
        object.__setattr__(self, "seed", int(self.seed))
        if self.source not in ("quantum", "lhv"):
            raise InvalidArgumentError(f"source must be 'quantum' or 'lhv', got {self.source!r}")
        object.__setattr__(self, "settings_policy", _normalize_policy(self.settings_policy))

    @property
    def fixed_pair(self) -> tuple[str, str] | None:
        if self.settings_policy == "uniform":
            return None
        return self.settings_policy[0], self.settings_policy[1]


def _normalize_policy(policy: str) -> str:
    policy = str(policy).strip()
    if policy.lower() == "uniform":
        return "uniform"
    pair = policy.upper()
    if len(pair) == 2 and pair[0] in SETTINGS and pair[1] in SETTINGS:
        return pair
    raise InvalidArgumentError(
        f"settings policy must be 'uniform' or a pair like 'AB', got {policy!r}"
    )


@dataclass(frozen=True)
class TrialRecord:
    index: int
    setting_1: str
    setting_2: str
    outcome_1: int
    outcome_2: int


@dataclass(frozen=True)
class QuantumSource:
    """Born-rule outcome source: a shared state plus one basis per property."""

    state: TwoQubitState
    bases: Mapping[str, MeasurementBasis]

    @classmethod
    def trine(cls) -> "QuantumSource":
        return cls(state=make_phi_plus(), bases=trine_bases())

    @cached_property
    def _joint_cache(self) -> np.ndarray:
        """Cumulative joint distributions, shape (9, 4), row per ordered pair."""
        rows = []
        for s1, s2 in ORDERED_PAIRS:
            p = joint_distribution(self.state, self.bases[s1], self.bases[s2]).p
            rows.append(np.cumsum(p.reshape(-1)))
        return np.array(rows)

    def joint(self, setting1: str, setting2: str) -> np.ndarray:
        return joint_distribution(self.state, self.bases[setting1], self.bases[setting2]).p


@dataclass(frozen=True)
class LhvSource:
    """Hidden-variable outcome source; a fresh lambda is drawn every trial."""

    model: LhvModel

    @cached_property
    def _cum_weights(self) -> np.ndarray:
        return np.cumsum(self.model.weights)

    def joint(self, setting1: str, setting2: str) -> np.ndarray:
        from .lhv import joint_probability

        return np.array(
            [
                [joint_probability(self.model, setting1, setting2, x, xp) for xp in (0, 1)]
                for x in (0, 1)
            ]
        )


def _source_tag(source) -> str:
    if isinstance(source, QuantumSource):
        return "quantum"
    if isinstance(source, LhvSource):
        return "lhv"
    raise InvalidArgumentError(f"unsupported source type {type(source).__name__}")


def sample_trial(
    source,
    settings: tuple[str, str],
    rng: np.random.Generator,
    index: int = 0,
) -> TrialRecord:
    """Draw one trial at a fixed setting pair from the source's distribution."""
    s1, s2 = settings
    i1, i2 = _setting_index(s1), _setting_index(s2)
    if isinstance(source, QuantumSource):
        cum = source._joint_cache[3 * i1 + i2]
        u = rng.random()
        k = int(np.sum(u >= cum[:3]))
        x, xp = k // 2, k % 2
    elif isinstance(source, LhvSource):
        cum = source._cum_weights
        lam = int(np.sum(rng.random() >= cum[:-1]))
        tables = source.model.tables
        x = int(rng.random() >= tables[lam, 0, i1, 0])
        xp = int(rng.random() >= tables[lam, 1, i2, 0])
    else:
        raise InvalidArgumentError(f"unsupported source type {type(source).__name__}")
    return TrialRecord(index=index, setting_1=s1, setting_2=s2, outcome_1=x, outcome_2=xp)


@dataclass(frozen=True, eq=False)
class TrialArrays:
    """Columnar trial log; ``lambda_idx`` is present for hidden-variable runs."""

    setting_1: np.ndarray
    setting_2: np.ndarray
    outcome_1: np.ndarray
    outcome_2: np.ndarray
    lambda_idx: np.ndarray | None

    def __len__(self) -> int:
        return len(self.outcome_1)

    def records(self) -> Iterator[TrialRecord]:
        for i in range(len(self)):
            yield TrialRecord(
                index=i,
                setting_1=SETTINGS[self.setting_1[i]],
                setting_2=SETTINGS[self.setting_2[i]],
                outcome_1=int(self.outcome_1[i]),
                outcome_2=int(self.outcome_2[i]),
            )


def generate_trials(config: RunConfig, source) -> TrialArrays:
    """Generate the full trial log for a run, following the documented draw order."""
    if _source_tag(source) != config.source:
        raise InvalidArgumentError(
            f"config.source is {config.source!r} but a {_source_tag(source)} source was given"
        )
    n = config.n_samples
    rng = np.random.default_rng(config.seed)

    if config.fixed_pair is None:
        k = rng.integers(0, 9, size=n)
        s1 = (k // 3).astype(np.int8)
        s2 = (k % 3).astype(np.int8)
    else:
        s1 = np.full(n, _setting_index(config.fixed_pair[0]), dtype=np.int8)
        s2 = np.full(n, _setting_index(config.fixed_pair[1]), dtype=np.int8)

    if isinstance(source, QuantumSource):
        u = rng.random(n)
        cum = source._joint_cache  # (9, 4)
        thresholds = cum[3 * s1.astype(int) + s2.astype(int)]  # (n, 4)
        k = (u[:, None] >= thresholds[:, :3]).sum(axis=1)
        x = (k // 2).astype(np.int8)
        xp = (k % 2).astype(np.int8)
        lam = None
    else:
        cumw = source._cum_weights
        lam = (rng.random(n)[:, None] >= cumw[:-1][None, :]).sum(axis=1)
        tables = source.model.tables
        p1_zero = tables[lam, 0, s1.astype(int), 0]
        x = (rng.random(n) >= p1_zero).astype(np.int8)
        p2_zero = tables[lam, 1, s2.astype(int), 0]
        xp = (rng.random(n) >= p2_zero).astype(np.int8)

    return TrialArrays(setting_1=s1, setting_2=s2, outcome_1=x, outcome_2=xp, lambda_idx=lam)


@dataclass(frozen=True)
class PairEstimate:
    """Agreement estimate for one ordered setting pair."""

    setting_1: str
    setting_2: str
    n_trials: int
    n_same: int
    p_same: float
    std_error: float
    interval: tuple[float, float]
    method: str


@dataclass(frozen=True)
class EstimateReport:
    """Per-pair agreement estimates and the propagated bound-sum estimate.

    ``bell_sum`` is present only when all three off-diagonal ordered pairs
    (A,B), (A,C), (B,C) received at least one trial; its standard error is the
    root-sum-square of the pair errors (trials are partitioned by settings, so
    the three estimates are independent).
    """

    config: RunConfig
    pairs: tuple[PairEstimate, ...]
    bell_sum: float | None
    bell_sum_std_error: float | None
    bell_sum_interval: tuple[float, float] | None

    def pair(self, setting1: str, setting2: str) -> PairEstimate | None:
        for p in self.pairs:
            if (p.setting_1, p.setting_2) == (setting1, setting2):
                return p
        return None


def _pair_estimate(s1: str, s2: str, n: int, n_same: int) -> PairEstimate:
    p_hat = n_same / n
    se = math.sqrt(p_hat * (1.0 - p_hat) / n)
    if min(n_same, n - n_same) < WILSON_COUNT:
        method = "wilson"
        z2 = Z_99 * Z_99
        denom = 1.0 + z2 / n
        center = (p_hat + z2 / (2.0 * n)) / denom
        half = (Z_99 / denom) * math.sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n))
        lo, hi = center - half, center + half
    else:
        method = "normal"
        lo, hi = p_hat - Z_99 * se, p_hat + Z_99 * se
    return PairEstimate(
        setting_1=s1,
        setting_2=s2,
        n_trials=n,
        n_same=n_same,
        p_same=p_hat,
        std_error=se,
        interval=(max(0.0, lo), min(1.0, hi)),
        method=method,
    )


def estimate_from_trials(config: RunConfig, trials: TrialArrays) -> EstimateReport:
    """Reduce a trial log to agreement estimates with 99% intervals."""
    pair_idx = 3 * trials.setting_1.astype(int) + trials.setting_2.astype(int)
    same = trials.outcome_1 == trials.outcome_2
    estimates: list[PairEstimate] = []
    by_pair: dict[tuple[str, str], PairEstimate] = {}
    for k, (s1, s2) in enumerate(ORDERED_PAIRS):
        mask = pair_idx == k
        n = int(mask.sum())
        if n == 0:
            continue
        est = _pair_estimate(s1, s2, n, int(same[mask].sum()))
        estimates.append(est)
        by_pair[(s1, s2)] = est

    bell = [by_pair.get(p) for p in BELL_PAIRS]
    if all(e is not None for e in bell):
        total = sum(e.p_same for e in bell)
        se = math.sqrt(sum(e.std_error**2 for e in bell))
        interval = (max(0.0, total - Z_99 * se), min(3.0, total + Z_99 * se))
    else:
        total = se = interval = None
    return EstimateReport(
        config=config,
        pairs=tuple(estimates),
        bell_sum=total,
        bell_sum_std_error=se,
        bell_sum_interval=interval,
    )


def run_experiment(config: RunConfig, source) -> EstimateReport:
    """Run a seeded experiment end to end and summarize it."""
    return estimate_from_trials(config, generate_trials(config, source))
