"""Eavesdropper strategies over finite outcome alphabets.

An :class:`EveStrategy` lists the probability ``p_i`` of each outcome and
the conditional ``P(A=0 | i)`` of Alice's bit. Eve guesses the likelier bit,
so her conditional success is ``max(c_i, 1 - c_i)``.

Conditional entropy at fixed guessing probability is bounded below by
``2 (1 - P_E)``. This module checks that bound pointwise, by large random
sampling, and against an exhaustive lattice minimization. It also builds
explicit strategies where Eve guesses worse than Bob yet learns more.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from monogamy_qkd.entropy import (
    as_distribution,
    binary_entropy,
    binary_entropy_array,
    check_probability,
)
from monogamy_qkd.errors import DomainError, UsageError

BOUND_TOL = 1e-12
TIGHT_TOL = 1e-9
MAX_ORACLE_ALPHABET = 5
DEFAULT_SEED = 20101013


@dataclass(frozen=True)
class EveStrategy:
    weights: tuple[float, ...]
    conditionals: tuple[float, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.conditionals):
            raise UsageError(
                f"strategy has {len(self.weights)} weights but {len(self.conditionals)} conditionals"
            )
        w = tuple(float(x) for x in as_distribution(self.weights))
        c = tuple(check_probability(x, "conditional") for x in self.conditionals)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "conditionals", c)

    @property
    def alphabet_size(self) -> int:
        return len(self.weights)

    @property
    def guess_conditionals(self) -> tuple[float, ...]:
        """Eve's success probability given each outcome."""
        return tuple(max(c, 1.0 - c) for c in self.conditionals)

    @property
    def alice_zero_probability(self) -> float:
        return sum(w * c for w, c in zip(self.weights, self.conditionals))

    def to_dict(self) -> dict:
        return {"weights": list(self.weights), "conditionals": list(self.conditionals)}

    @classmethod
    def from_dict(cls, data: dict) -> "EveStrategy":
        try:
            return cls(tuple(data["weights"]), tuple(data["conditionals"]))
        except (KeyError, TypeError) as exc:
            raise DomainError(f"strategy JSON needs 'weights' and 'conditionals' lists: {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "EveStrategy":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ChannelModel:
    """Symmetric channel from Alice's uniform bit to Bob's."""

    p_b: float

    def __post_init__(self):
        p = check_probability(self.p_b, "p_b")
        if p < 0.5:
            raise DomainError(f"p_b={p!r} is below 1/2")
        object.__setattr__(self, "p_b", p)

    @property
    def information(self) -> float:
        return 1.0 - binary_entropy(self.p_b)


def guessing_probability(s: EveStrategy) -> float:
    """P_E, the outcome-weighted average of Eve's conditional successes."""
    pe = sum(w * g for w, g in zip(s.weights, s.guess_conditionals))
    return min(max(pe, 0.5), 1.0)


def eve_information(s: EveStrategy) -> float:
    """I(A:E) in bits, using the Alice marginal the strategy itself induces."""
    h_a = binary_entropy(min(max(s.alice_zero_probability, 0.0), 1.0))
    h_a_given_e = sum(w * binary_entropy(c) for w, c in zip(s.weights, s.conditionals))
    return max(h_a - h_a_given_e, 0.0)


@dataclass(frozen=True)
class BoundCheck:
    lhs: float
    rhs: float
    holds: bool
    tight: bool


def concavity_bound_check(s: EveStrategy) -> BoundCheck:
    """Compare ``sum p_i h(P_E|i)`` with ``2 (1 - P_E)``.

    ``tight`` flags equality, which happens exactly when every outcome in
    the support has ``P_E|i`` equal to 1/2 or 1.
    """
    lhs = sum(w * binary_entropy(g) for w, g in zip(s.weights, s.guess_conditionals))
    rhs = 2.0 * (1.0 - guessing_probability(s))
    return BoundCheck(lhs, rhs, lhs >= rhs - BOUND_TOL, abs(lhs - rhs) <= TIGHT_TOL)


@dataclass(frozen=True)
class RandomCheckSummary:
    samples: int
    seed: int
    max_alphabet: int
    violations: int
    min_gap: float


def random_strategy_arrays(rng: np.random.Generator, count: int, alphabet_size: int):
    """``count`` strategies as (weights, conditionals) arrays of shape (count, k).

    Weights are flat on the simplex; conditionals are uniform on [0, 1].
    """
    weights = rng.dirichlet(np.ones(alphabet_size), size=count)
    conditionals = rng.random((count, alphabet_size))
    return weights, conditionals


def bound_gaps(weights: np.ndarray, conditionals: np.ndarray) -> np.ndarray:
    """Row-wise ``sum p_i h(P_E|i) - 2 (1 - P_E)``."""
    guess = np.maximum(conditionals, 1.0 - conditionals)
    lhs = np.sum(weights * binary_entropy_array(guess), axis=1)
    rhs = 2.0 * (1.0 - np.sum(weights * guess, axis=1))
    return lhs - rhs


def verify_concavity_bound(samples: int = 100_000, max_alphabet: int = 8, seed: int = DEFAULT_SEED) -> RandomCheckSummary:
    """Sample random strategies and count violations of the entropy bound."""
    if samples < 1 or max_alphabet < 1:
        raise UsageError("samples and max_alphabet must be positive")
    rng = np.random.default_rng(seed)
    sizes = np.arange(1, max_alphabet + 1)
    counts = np.full(max_alphabet, samples // max_alphabet)
    counts[: samples % max_alphabet] += 1
    violations = 0
    min_gap = np.inf
    for k, n in zip(sizes, counts):
        if n == 0:
            continue
        gaps = bound_gaps(*random_strategy_arrays(rng, int(n), int(k)))
        violations += int(np.count_nonzero(gaps < -BOUND_TOL))
        min_gap = min(min_gap, float(gaps.min()))
    return RandomCheckSummary(samples, seed, max_alphabet, violations, min_gap)


@dataclass(frozen=True)
class OracleResult:
    """Lattice minimum of Eve's conditional entropy at a fixed guessing probability.

    ``band`` is the largest allowed ``|P_E - target|``; ``achieved_pe`` is the
    guessing probability of ``argmin``.
    """

    min_value: float
    argmin: EveStrategy
    band: float
    achieved_pe: float
    grid_steps: int
    weight_steps: int


def minimize_conditional_entropy(
    target_pe: float,
    alphabet_size: int,
    grid_steps: int,
    weight_steps: int = 20,
) -> OracleResult:
    """Exhaustive minimum of ``sum p_i h(P_E|i)`` subject to ``P_E ~ target_pe``.

    Conditional successes range over ``1/2 + j / (2 grid_steps)`` and
    weights over multiples of ``1 / weight_steps``. With integer weight
    units ``a_i`` and grid indices ``j_i`` the guessing probability is
    ``sum a_i (grid_steps + j_i) / (2 grid_steps weight_steps)``, an exact
    integer "mass". The search over every lattice strategy is done letter by
    letter as a min-plus recursion on (weight left, mass left), which visits
    the same candidates as full enumeration. Ties resolve to the
    lexicographically smallest ``(a_0, j_0, a_1, j_1, ...)``.
    """
    target = check_probability(target_pe, "target_pe")
    if target < 0.5:
        raise DomainError(f"target_pe={target!r} is below 1/2")
    if not 1 <= alphabet_size <= MAX_ORACLE_ALPHABET:
        raise UsageError(f"alphabet_size must be in [1, {MAX_ORACLE_ALPHABET}], got {alphabet_size}")
    if grid_steps < 10:
        raise UsageError(f"grid_steps must be at least 10, got {grid_steps}")
    if weight_steps < 1:
        raise UsageError(f"weight_steps must be positive, got {weight_steps}")

    n, W, k = int(grid_steps), int(weight_steps), int(alphabet_size)
    scale = 2 * n * W
    succ = (n + np.arange(n + 1)) / (2.0 * n)
    ent = binary_entropy_array(succ)

    # Admissible final masses: nearest lattice point(s) to the target.
    band = 0.5 / scale
    exact = target * scale
    finals = [m for m in (int(np.floor(exact)), int(np.ceil(exact))) if abs(m / scale - target) <= band + 1e-15]
    finals = sorted(set(finals))

    moves = [(0, 0)] + [(a, j) for a in range(1, W + 1) for j in range(n + 1)]

    # tables[r][A, M]: least cost of letters r..k-1 using weight A and mass M.
    tail = np.full((W + 1, scale + 1), np.inf)
    tail[0, 0] = 0.0
    tables = [tail]
    for _ in range(k):
        prev = tables[-1]
        cur = np.full_like(prev, np.inf)
        for a, j in moves:
            s = a * (n + j)
            cost = a * ent[j] / W
            np.minimum(cur[a:, s:], prev[: W + 1 - a, : scale + 1 - s] + cost, out=cur[a:, s:])
        tables.append(cur)
    tables.reverse()

    best = min(finals, key=lambda m: (tables[0][W, m], m))
    best_value = float(tables[0][W, best])
    if not np.isfinite(best_value):
        raise DomainError(f"no lattice strategy reaches P_E={target!r}")

    weights, conds = [], []
    A, M = W, best
    for r in range(k):
        goal = tables[r][A, M]
        for a, j in moves:
            s = a * (n + j)
            if a > A or s > M:
                continue
            if a * ent[j] / W + tables[r + 1][A - a, M - s] <= goal + 1e-12:
                weights.append(a / W)
                conds.append(float(succ[j]))
                A, M = A - a, M - s
                break
    argmin = EveStrategy(tuple(weights), tuple(conds))
    return OracleResult(best_value, argmin, band, best / scale, n, W)


@dataclass(frozen=True)
class Counterexample:
    """Eve guesses worse than Bob (``p_e < p_b``) yet learns more (``i_ae > i_ab``)."""

    p_b: float
    strategy: EveStrategy
    p_e: float
    i_ab: float
    i_ae: float

    def to_dict(self) -> dict:
        return {
            "p_b": self.p_b,
            "strategy": self.strategy.to_dict(),
            "p_e": self.p_e,
            "i_ab": self.i_ab,
            "i_ae": self.i_ae,
        }


def build_counterexample(p_b: float, slack: float = 0.5, alphabet_size: int = 3) -> Counterexample:
    """Ternary strategy that beats Bob on information while losing on guessing.

    Outcome weights ``(p, (1-p)/2, (1-p)/2)`` with conditionals ``(1/2, 1, 0)``
    give ``P_E = 1 - p/2`` and ``I(A:E) = 1 - p``. Any ``p`` strictly between
    ``2 (1 - p_b)`` and ``h(p_b)`` works; ``slack`` picks the point within
    that interval. Fewer than three outcomes cannot keep Alice's marginal
    uniform with this family, so ``alphabet_size=2`` is rejected.
    """
    pb = check_probability(p_b, "p_b")
    if not 0.5 < pb < 1.0:
        raise DomainError(f"p_b must lie strictly inside (1/2, 1), got {pb!r}")
    if not 0.0 < slack < 1.0:
        raise DomainError(f"slack must lie strictly inside (0, 1), got {slack!r}")
    if alphabet_size < 3:
        raise DomainError(
            f"a {alphabet_size}-outcome Eve cannot realise this family; it needs a blind outcome and a symmetric pair"
        )
    floor = 2.0 * (1.0 - pb)
    p = floor + slack * (binary_entropy(pb) - floor)
    rest = (1.0 - p) / 2.0
    pad = alphabet_size - 3
    strategy = EveStrategy((p, rest, rest) + (0.0,) * pad, (0.5, 1.0, 0.0) + (0.5,) * pad)
    p_e = guessing_probability(strategy)
    i_ab = ChannelModel(pb).information
    i_ae = eve_information(strategy)
    if not (p_e < pb and i_ae > i_ab):
        raise DomainError(f"p_b={pb!r} with slack={slack!r} is too close to the boundary in floating point")
    return Counterexample(pb, strategy, p_e, i_ab, i_ae)


@dataclass(frozen=True)
class BinarySearchResult:
    strategies_checked: int
    p_b_values: int
    count: int
    examples: tuple[Counterexample, ...]


def search_binary_counterexamples(
    grid_steps: int = 100,
    p_b_grid: Sequence[float] | None = None,
    symmetric: bool = False,
    uniform_alice: bool = False,
    keep: int = 5,
) -> BinarySearchResult:
    """Exhaustively scan two-outcome strategies for ``P_B > P_E`` with ``I(A:E) > I(A:B)``.

    Weights and both conditionals run over multiples of ``1 / grid_steps``.
    With ``symmetric=True`` only strategies whose two conditional successes
    coincide are scanned (Eve's error does not depend on her outcome).
    With ``uniform_alice=True`` only strategies inducing ``P(A=0) = 1/2``
    are kept, matching the uniform bit assumed for Bob's channel.
    For each strategy the smallest grid ``p_b`` above ``P_E`` is the most
    favourable one, since ``1 - h(p_b)`` grows with ``p_b``.
    """
    if grid_steps < 1:
        raise UsageError("grid_steps must be positive")
    if p_b_grid is None:
        p_b_grid = np.linspace(0.5, 1.0, grid_steps + 1)
    pbs = np.unique(np.asarray(p_b_grid, dtype=float))
    if pbs.size == 0 or pbs.min() < 0.5 or pbs.max() > 1.0:
        raise DomainError("p_b grid must be non-empty and inside [1/2, 1]")

    ticks = np.arange(grid_steps + 1) / grid_steps
    w, c0, c1 = np.meshgrid(ticks, ticks, ticks, indexing="ij")
    w, c0, c1 = w.ravel(), c0.ravel(), c1.ravel()
    g0, g1 = np.maximum(c0, 1 - c0), np.maximum(c1, 1 - c1)
    keep_mask = np.ones_like(w, dtype=bool)
    if symmetric:
        keep_mask &= np.abs(g0 - g1) <= 1e-12
    if uniform_alice:
        keep_mask &= np.abs(w * c0 + (1 - w) * c1 - 0.5) <= 1e-12
    w, c0, c1, g0, g1 = (x[keep_mask] for x in (w, c0, c1, g0, g1))
    p_e = w * g0 + (1 - w) * g1
    alice0 = np.clip(w * c0 + (1 - w) * c1, 0.0, 1.0)
    i_ae = np.maximum(
        binary_entropy_array(alice0) - w * binary_entropy_array(c0) - (1 - w) * binary_entropy_array(c1),
        0.0,
    )
    idx = np.searchsorted(pbs, p_e, side="right")
    has_pb = idx < pbs.size
    pb_for = np.where(has_pb, pbs[np.minimum(idx, pbs.size - 1)], np.nan)
    i_ab = 1.0 - binary_entropy_array(np.nan_to_num(pb_for, nan=0.5))
    hits = np.flatnonzero(has_pb & (i_ae > i_ab + BOUND_TOL))

    examples = []
    for i in hits[:keep]:
        s = EveStrategy((w[i], 1 - w[i]), (c0[i], c1[i]))
        examples.append(Counterexample(float(pb_for[i]), s, float(p_e[i]), float(i_ab[i]), float(i_ae[i])))
    return BinarySearchResult(int(w.size), int(pbs.size), int(hits.size), tuple(examples))
