"""Local hidden-variable models over three two-valued properties.

A model is a finite mixture of hidden-variable values ("lambdas").  Each
lambda carries one response table per object: the probability of outcome
x in {0, 1} when property X in {A, B, C} is measured on that object.  Joint
outcome statistics factorize per lambda (locality by construction)::

    P(x, x' | X, X') = sum_lambda p(lambda) * P1(x | X, lambda) * P2(x' | X', lambda)

Finite support loses no generality for the bound this package studies: any
achievable correlation triple is a convex mixture of the eight deterministic
strategies, which are exactly the bit triplets (a, b, c).

Tolerances: model weights must sum to 1 within ``WEIGHT_SUM_TOL``; user-facing
constructors gate their inputs at ``INPUT_SUM_TOL`` and renormalize exactly.
A lambda counts as *supported* when its weight exceeds ``SUPPORT_TOL``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, NamedTuple

import numpy as np

from .errors import InvalidArgumentError, InvalidDistributionError
from .quantum import CorrelationRecord

SETTINGS: tuple[str, str, str] = ("A", "B", "C")
_SETTING_INDEX = {"A": 0, "B": 1, "C": 2}

WEIGHT_SUM_TOL = 1e-12
INPUT_SUM_TOL = 1e-9
SUPPORT_TOL = 1e-12
FACTORIZATION_TOL = 1e-10
DETERMINISM_TOL = 1e-10
DISCORDANCE_TOL = 1e-12

EINSTEIN_LOCALITY_NOTE = "not decidable from a response table"


class PropertyTriplet(NamedTuple):
    """A deterministic assignment of the three properties, shared by both objects."""

    a: int
    b: int
    c: int

    def coincidences(self) -> int:
        """Number of equal pairs among (a,b), (a,c), (b,c); at least 1 by pigeonhole."""
        return int(self.a == self.b) + int(self.a == self.c) + int(self.b == self.c)

    def value(self, setting: str) -> int:
        return self[_setting_index(setting)]


def _setting_index(setting: str) -> int:
    try:
        return _SETTING_INDEX[setting]
    except KeyError:
        raise InvalidArgumentError(f"unknown setting {setting!r}; expected one of {SETTINGS}") from None


def _check_outcome(x: int) -> int:
    if x not in (0, 1):
        raise InvalidArgumentError(f"outcome must be 0 or 1, got {x!r}")
    return int(x)


def as_triplet(value) -> PropertyTriplet:
    """Coerce a (a, b, c) bit triple into a PropertyTriplet, validating the bits."""
    try:
        a, b, c = value
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"expected a bit triple, got {value!r}") from None
    for bit in (a, b, c):
        if bit not in (0, 1):
            raise InvalidArgumentError(f"triplet bits must be 0 or 1, got {value!r}")
    return PropertyTriplet(int(a), int(b), int(c))


def enumerate_deterministic_strategies() -> tuple[PropertyTriplet, ...]:
    """All eight property triplets (0,0,0) ... (1,1,1) in lexicographic order."""
    return tuple(PropertyTriplet(*bits) for bits in itertools.product((0, 1), repeat=3))


@dataclass(frozen=True, eq=False)
class ResponseTable:
    """Per-object outcome probabilities: ``probs[obj, setting, outcome]``.

    ``obj`` is 0-based (0 = first object), settings are ordered A, B, C.
    Rows must be normalized within ``WEIGHT_SUM_TOL``.
    """

    probs: np.ndarray

    def __eq__(self, other) -> bool:
        if not isinstance(other, ResponseTable):
            return NotImplemented
        return bool(np.array_equal(self.probs, other.probs))

    def __hash__(self) -> int:
        return hash(self.probs.tobytes())

    def __post_init__(self) -> None:
        probs = np.array(self.probs, dtype=float)
        if probs.shape != (2, 3, 2):
            raise InvalidArgumentError(f"expected shape (2, 3, 2), got {probs.shape}")
        if not np.all(np.isfinite(probs)):
            raise InvalidDistributionError("response probabilities must be finite")
        if probs.min() < 0.0 or probs.max() > 1.0:
            raise InvalidDistributionError("response probabilities must lie in [0, 1]")
        rows = probs.sum(axis=2)
        if np.max(np.abs(rows - 1.0)) > WEIGHT_SUM_TOL:
            raise InvalidDistributionError(
                f"response rows must sum to 1 (max deviation {np.max(np.abs(rows - 1.0))!r})"
            )
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_triplets(cls, triplet1, triplet2) -> "ResponseTable":
        """Deterministic responses; object i answers according to triplet i."""
        t1, t2 = as_triplet(triplet1), as_triplet(triplet2)
        probs = np.zeros((2, 3, 2))
        for s in range(3):
            probs[0, s, t1[s]] = 1.0
            probs[1, s, t2[s]] = 1.0
        return cls(probs)

    @classmethod
    def deterministic(cls, triplet) -> "ResponseTable":
        """Deterministic responses, identical for both objects."""
        return cls.from_triplets(triplet, triplet)

    def prob(self, obj: int, setting: str, outcome: int) -> float:
        if obj not in (0, 1):
            raise InvalidArgumentError(f"object index must be 0 or 1, got {obj!r}")
        return float(self.probs[obj, _setting_index(setting), _check_outcome(outcome)])

    def is_deterministic(self, atol: float = DETERMINISM_TOL) -> bool:
        return bool(np.all(np.minimum(self.probs, 1.0 - self.probs) <= atol))


@dataclass(frozen=True)
class LambdaEntry:
    id: str
    weight: float
    table: ResponseTable

    def __post_init__(self) -> None:
        w = float(self.weight)
        if not math.isfinite(w) or w < 0.0:
            raise InvalidDistributionError(f"lambda {self.id!r}: weight must be >= 0, got {w!r}")
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "id", str(self.id))


@dataclass(frozen=True)
class LhvModel:
    """A finite distribution over lambdas, each with its response table."""

    lambdas: tuple[LambdaEntry, ...]

    def __post_init__(self) -> None:
        entries = tuple(self.lambdas)
        if not entries:
            raise InvalidDistributionError("model must contain at least one lambda")
        ids = [e.id for e in entries]
        if len(set(ids)) != len(ids):
            raise InvalidDistributionError("lambda ids must be unique")
        total = math.fsum(e.weight for e in entries)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidDistributionError(f"lambda weights sum to {total!r}, expected 1")
        object.__setattr__(self, "lambdas", entries)

    @cached_property
    def weights(self) -> np.ndarray:
        w = np.array([e.weight for e in self.lambdas], dtype=float)
        w.setflags(write=False)
        return w

    @cached_property
    def tables(self) -> np.ndarray:
        """Stacked response tables, shape (n_lambda, 2, 3, 2)."""
        t = np.stack([e.table.probs for e in self.lambdas])
        t.setflags(write=False)
        return t

    def support(self, threshold: float = SUPPORT_TOL) -> tuple[int, ...]:
        """Indices of lambdas with weight above ``threshold``."""
        return tuple(i for i, e in enumerate(self.lambdas) if e.weight > threshold)

    def joint_tables(self) -> dict[str, np.ndarray]:
        """Per-lambda factorized joint tables P(x, x' | X, X', lambda).

        Returned arrays have shape (3, 3, 2, 2) indexed by (X, X', x, x') with
        settings ordered A, B, C.
        """
        out: dict[str, np.ndarray] = {}
        for entry in self.lambdas:
            p1 = entry.table.probs[0]  # (3, 2)
            p2 = entry.table.probs[1]
            out[entry.id] = np.einsum("ix,jy->ijxy", p1, p2)
        return out


def model_from_triplet_distribution(weights: Mapping) -> LhvModel:
    """One lambda per triplet, deterministic and identical for both objects.

    ``weights`` maps bit triples (or PropertyTriplets) to probabilities; they
    must be nonnegative and sum to 1 within ``INPUT_SUM_TOL``.  Weights are
    renormalized exactly so the resulting model meets the strict model
    invariant.
    """
    items: list[tuple[PropertyTriplet, float]] = []
    for key, w in weights.items():
        triplet = as_triplet(key)
        w = float(w)
        if not math.isfinite(w) or w < 0.0:
            raise InvalidDistributionError(
                f"triplet {''.join(map(str, triplet))!r}: weight must be >= 0, got {w!r}"
            )
        items.append((triplet, w))
    if not items:
        raise InvalidDistributionError("triplet distribution is empty")
    seen = set()
    for triplet, _ in items:
        if triplet in seen:
            raise InvalidDistributionError(f"duplicate triplet {''.join(map(str, triplet))!r}")
        seen.add(triplet)
    total = math.fsum(w for _, w in items)
    if abs(total - 1.0) > INPUT_SUM_TOL:
        raise InvalidDistributionError(f"triplet weights sum to {total!r}, expected 1")
    items.sort(key=lambda kv: kv[0])
    return LhvModel(
        tuple(
            LambdaEntry(
                id="".join(map(str, triplet)),
                weight=w / total,
                table=ResponseTable.deterministic(triplet),
            )
            for triplet, w in items
        )
    )


def uniform_triplet_model() -> LhvModel:
    """The uniform mixture of the eight deterministic strategies."""
    return model_from_triplet_distribution(
        {t: 0.125 for t in enumerate_deterministic_strategies()}
    )


def joint_probability(model: LhvModel, setting1: str, setting2: str, x: int, xp: int) -> float:
    """P(x, x' | X, X') averaged over the hidden variable."""
    i, j = _setting_index(setting1), _setting_index(setting2)
    x, xp = _check_outcome(x), _check_outcome(xp)
    p1 = model.tables[:, 0, i, x]
    p2 = model.tables[:, 1, j, xp]
    return float(np.dot(model.weights, p1 * p2))


def lhv_p_same(model: LhvModel, setting1: str, setting2: str) -> float:
    """Probability that the two objects' outcomes agree for this setting pair."""
    return joint_probability(model, setting1, setting2, 0, 0) + joint_probability(
        model, setting1, setting2, 1, 1
    )


def lhv_bell_record(model: LhvModel) -> CorrelationRecord:
    """Agreement probabilities for the setting pairs (A,B), (A,C), (B,C)."""
    return CorrelationRecord.from_p_same(
        lhv_p_same(model, "A", "B"),
        lhv_p_same(model, "A", "C"),
        lhv_p_same(model, "B", "C"),
    )


def triplet_mixture_bell_sums(weight_matrix: np.ndarray) -> np.ndarray:
    """Bell sums for a batch of triplet distributions, one row per mixture.

    Rows are weights over the eight lexicographic triplets.  This is the
    batched equivalent of ``model_from_triplet_distribution`` followed by the
    three ``lhv_p_same`` calls (agreement on a deterministic shared triplet
    counts each coinciding pair), vectorized for large sweeps; agreement with
    the per-model path is pinned by tests.
    """
    w = np.asarray(weight_matrix, dtype=float)
    if w.ndim == 1:
        w = w[None, :]
    if w.shape[-1] != 8:
        raise InvalidArgumentError(f"expected 8 columns (one per triplet), got {w.shape[-1]}")
    counts = np.array([t.coincidences() for t in enumerate_deterministic_strategies()], dtype=float)
    return w @ counts


def check_bell_locality(joint: Mapping[str, np.ndarray], model: LhvModel) -> bool:
    """True iff every per-lambda joint table factorizes into the model's responses.

    ``joint`` maps lambda ids to (3, 3, 2, 2) tables P(x, x' | X, X', lambda),
    each normalized per setting pair.
    """
    by_id = {e.id: e for e in model.lambdas}
    for lam_id, table in joint.items():
        entry = by_id.get(lam_id)
        if entry is None:
            raise InvalidArgumentError(f"joint table references unknown lambda {lam_id!r}")
        t = np.asarray(table, dtype=float)
        if t.shape != (3, 3, 2, 2):
            raise InvalidArgumentError(
                f"lambda {lam_id!r}: expected table shape (3, 3, 2, 2), got {t.shape}"
            )
        sums = t.sum(axis=(2, 3))
        if np.max(np.abs(sums - 1.0)) > INPUT_SUM_TOL:
            raise InvalidDistributionError(
                f"lambda {lam_id!r}: joint table not normalized per setting pair"
            )
        expected = np.einsum("ix,jy->ijxy", entry.table.probs[0], entry.table.probs[1])
        if np.max(np.abs(t - expected)) > FACTORIZATION_TOL:
            return False
    return True


def discordance(model: LhvModel, setting: str) -> tuple[float, float]:
    """Weighted probability of opposite outcomes under a shared setting.

    Returns the two discordance orders (first object 1 / second 0, and the
    reverse); perfect correlation requires both to vanish.
    """
    i = _setting_index(setting)
    p1 = model.tables[:, 0, i, :]
    p2 = model.tables[:, 1, i, :]
    m10 = float(np.dot(model.weights, p1[:, 1] * p2[:, 0]))
    m01 = float(np.dot(model.weights, p1[:, 0] * p2[:, 1]))
    return m10, m01


def check_perfect_correlation(model: LhvModel, setting: str) -> bool:
    """True iff measuring ``setting`` on both objects never disagrees."""
    m10, m01 = discordance(model, setting)
    return m10 <= DISCORDANCE_TOL and m01 <= DISCORDANCE_TOL


@dataclass(frozen=True)
class DiscordanceWitness:
    """A (setting, lambda) pair contributing nonzero disagreement mass."""

    setting: str
    lambda_id: str
    mass: float


@dataclass(frozen=True)
class DeterminismWitness:
    """Response values for one supported lambda and one setting."""

    lambda_id: str
    setting: str
    p1: tuple[float, float]
    p2: tuple[float, float]
    deterministic_1: bool
    deterministic_2: bool
    objects_equal: bool

    @property
    def deterministic(self) -> bool:
        return self.deterministic_1 and self.deterministic_2


@dataclass(frozen=True)
class DeterminismReport:
    """Outcome of the perfect-correlation-implies-determinism derivation.

    When the perfect-correlation premise fails, ``failures`` lists the
    offending (setting, lambda) disagreement masses and no determinism claim
    is made.  ``degenerate`` flags the vacuous case of empty support.
    """

    precondition_ok: bool
    holds: bool
    degenerate: bool
    witnesses: tuple[DeterminismWitness, ...]
    failures: tuple[DiscordanceWitness, ...]
    discordance_by_setting: tuple[tuple[str, float, float], ...]


def derive_determinism(model: LhvModel, support_threshold: float = SUPPORT_TOL) -> DeterminismReport:
    """Check that locality plus perfect correlations force 0/1 responses.

    Requires perfect correlations on every setting.  When they hold, every
    supported lambda must answer each setting deterministically and both
    objects must agree: a weighted sum of nonnegative products can vanish only
    if each supported product vanishes, which pins every response to 0 or 1.
    The report carries per-(lambda, setting) witnesses for both objects so the
    single-object form of the statement is visible as well.
    """
    per_setting = tuple((s, *discordance(model, s)) for s in SETTINGS)
    failing = [s for s, m10, m01 in per_setting if m10 > DISCORDANCE_TOL or m01 > DISCORDANCE_TOL]
    support = model.support(support_threshold)

    if failing:
        failures = []
        for s in failing:
            i = _setting_index(s)
            for k in support:
                entry = model.lambdas[k]
                p1 = entry.table.probs[0, i]
                p2 = entry.table.probs[1, i]
                mass = entry.weight * (p1[1] * p2[0] + p1[0] * p2[1])
                if mass > 0.0:
                    failures.append(DiscordanceWitness(setting=s, lambda_id=entry.id, mass=mass))
        return DeterminismReport(
            precondition_ok=False,
            holds=False,
            degenerate=not support,
            witnesses=(),
            failures=tuple(failures),
            discordance_by_setting=per_setting,
        )

    witnesses = []
    all_ok = True
    for k in support:
        entry = model.lambdas[k]
        for s in SETTINGS:
            i = _setting_index(s)
            p1 = entry.table.probs[0, i]
            p2 = entry.table.probs[1, i]
            det1 = bool(np.all(np.minimum(p1, 1.0 - p1) <= DETERMINISM_TOL))
            det2 = bool(np.all(np.minimum(p2, 1.0 - p2) <= DETERMINISM_TOL))
            equal = abs(float(p1[1] - p2[1])) <= DETERMINISM_TOL
            all_ok = all_ok and det1 and det2 and equal
            witnesses.append(
                DeterminismWitness(
                    lambda_id=entry.id,
                    setting=s,
                    p1=(float(p1[0]), float(p1[1])),
                    p2=(float(p2[0]), float(p2[1])),
                    deterministic_1=det1,
                    deterministic_2=det2,
                    objects_equal=equal,
                )
            )
    return DeterminismReport(
        precondition_ok=True,
        holds=all_ok,
        degenerate=not support,
        witnesses=tuple(witnesses),
        failures=(),
        discordance_by_setting=per_setting,
    )


@dataclass(frozen=True)
class HypothesisFlags:
    """Which structural hypotheses a model satisfies.

    ``einstein_local`` is prose, not a boolean: spacelike separation is a
    statement about an experiment, not about a response table.
    """

    counterfactual_definite: bool
    hidden_variable: bool
    bell_local: bool
    perfect_correlations: bool
    einstein_local: str = EINSTEIN_LOCALITY_NOTE

    def __post_init__(self) -> None:
        if self.counterfactual_definite and not self.hidden_variable:
            raise InvalidArgumentError(
                "counterfactual definiteness implies a hidden-variable model"
            )


def classify_model(model: LhvModel, support_threshold: float = SUPPORT_TOL) -> HypothesisFlags:
    """Classify a model against the hypothesis checklist.

    Bell locality and the hidden-variable structure hold by construction for
    every ``LhvModel``; counterfactual definiteness requires every supported
    response entry to be 0 or 1; perfect correlations are checked per setting.
    """
    support = model.support(support_threshold)
    deterministic = all(model.lambdas[k].table.is_deterministic() for k in support)
    perfect = all(check_perfect_correlation(model, s) for s in SETTINGS)
    return HypothesisFlags(
        counterfactual_definite=deterministic,
        hidden_variable=True,
        bell_local=True,
        perfect_correlations=perfect,
    )


def triplet_weights_from_model(model: LhvModel) -> dict[PropertyTriplet, float] | None:
    """Project a model onto a triplet distribution when possible.

    Possible iff every supported lambda answers deterministically and both
    objects agree on every setting; returns None otherwise.  Weights of
    lambdas sharing a triplet accumulate.
    """
    out: dict[PropertyTriplet, float] = {}
    for k in model.support():
        entry = model.lambdas[k]
        probs = entry.table.probs
        if not entry.table.is_deterministic():
            return None
        bits1 = tuple(int(probs[0, s, 1] > 0.5) for s in range(3))
        bits2 = tuple(int(probs[1, s, 1] > 0.5) for s in range(3))
        if bits1 != bits2:
            return None
        triplet = PropertyTriplet(*bits1)
        out[triplet] = out.get(triplet, 0.0) + entry.weight
    return out or None


def random_perfect_correlation_model(
    rng: np.random.Generator,
    max_lambdas: int = 8,
    zero_weight_noise: bool = True,
) -> LhvModel:
    """Random model satisfying locality and perfect correlations by construction.

    Samples the full solution set of the premises on its support: each
    supported lambda answers deterministically with both objects matched.
    Optionally appends a weight-0 lambda with stochastic responses, which the
    support threshold must ignore.
    """
    n = int(rng.integers(1, max_lambdas + 1))
    raw = rng.random(n)
    weights = raw / raw.sum()
    entries = []
    for k in range(n):
        triplet = PropertyTriplet(*(int(b) for b in rng.integers(0, 2, size=3)))
        entries.append(
            LambdaEntry(id=f"l{k}", weight=float(weights[k]), table=ResponseTable.deterministic(triplet))
        )
    if zero_weight_noise and rng.random() < 0.5:
        probs = np.empty((2, 3, 2))
        probs[:, :, 0] = rng.random((2, 3))
        probs[:, :, 1] = 1.0 - probs[:, :, 0]
        entries.append(LambdaEntry(id="l_zero", weight=0.0, table=ResponseTable(probs)))
    return LhvModel(tuple(entries))
