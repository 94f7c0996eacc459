"""Shannon-entropy kernels for finite distributions, in bits.

Inputs are validated and lightly cleaned: probabilities within ``PROB_TOL``
of 0 or 1 are snapped onto the unit interval, and distributions whose total
is within ``SUM_TOL`` of one are renormalized. Anything further off raises
:class:`~monogamy_qkd.errors.DomainError`.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from monogamy_qkd.errors import DomainError, UsageError

PROB_TOL = 1e-12
SUM_TOL = 1e-9


def check_probability(value: float, name: str = "p") -> float:
    """Return ``value`` as a float in [0, 1], or raise DomainError."""
    try:
        p = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {value!r}") from None
    if math.isnan(p) or p < -PROB_TOL or p > 1.0 + PROB_TOL:
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")
    return min(max(p, 0.0), 1.0)


def _normalized(arr: np.ndarray, what: str) -> np.ndarray:
    if arr.size == 0:
        raise DomainError(f"{what} must have at least one entry")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{what} has non-finite entries")
    if np.any(arr < -PROB_TOL):
        raise DomainError(f"{what} has negative entries")
    arr = np.clip(arr, 0.0, None)
    total = arr.sum()
    if abs(total - 1.0) > SUM_TOL:
        raise DomainError(f"{what} sums to {total!r}, not 1")
    return arr / total


def as_distribution(weights: Sequence[float]) -> np.ndarray:
    """Validate a finite distribution and return it as a 1-D float array."""
    arr = np.asarray(weights, dtype=float)
    if arr.ndim != 1:
        raise DomainError("a finite distribution must be one-dimensional")
    return _normalized(arr, "distribution")


def as_joint(matrix) -> np.ndarray:
    """Validate a joint distribution (rows: first variable, cols: second)."""
    arr = np.asarray(matrix, dtype=float)
    if arr.ndim != 2:
        raise DomainError("a joint distribution must be a 2-D table")
    return _normalized(arr, "joint distribution")


def binary_entropy(p: float) -> float:
    """Binary Shannon entropy ``h(p)`` in bits, with ``0 log 0 = 0``.

    >>> binary_entropy(0.5)
    1.0
    """
    p = check_probability(p)
    if p == 0.0 or p == 1.0:
        return 0.0
    q = 1.0 - p
    return -p * math.log2(p) - q * math.log2(q)


def binary_entropy_array(p) -> np.ndarray:
    """Vectorized :func:`binary_entropy`; inputs must already lie in [0, 1]."""
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    inner = (p > 0.0) & (p < 1.0)
    x = p[inner]
    out[inner] = -x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x)
    return out


def _plogp_sum(arr: np.ndarray) -> float:
    nz = arr[arr > 0.0]
    return max(float(-np.sum(nz * np.log2(nz))), 0.0)


def shannon_entropy(weights: Sequence[float]) -> float:
    """Shannon entropy of a finite distribution, in bits."""
    return _plogp_sum(as_distribution(weights))


def mutual_information(joint) -> float:
    """I(X:Y) = H(X) + H(Y) - H(X,Y) for a joint table.

    Round-off can push the raw difference a hair below zero on product
    tables; the result is clipped to ``[0, min(H(X), H(Y))]``.
    """
    j = as_joint(joint)
    hx = _plogp_sum(j.sum(axis=1))
    hy = _plogp_sum(j.sum(axis=0))
    hxy = _plogp_sum(j.ravel())
    return min(max(hx + hy - hxy, 0.0), min(hx, hy))


def conditional_entropy_given(outcome_weights: Sequence[float], conditionals: Sequence[float]) -> float:
    """Sum of ``p_i * h(c_i)``: the entropy of a bit given an outcome ``i``.

    ``conditionals[i]`` is the probability the bit is 0 when the outcome
    is ``i``.
    """
    if len(outcome_weights) != len(conditionals):
        raise UsageError(
            f"got {len(outcome_weights)} outcome weights but {len(conditionals)} conditionals"
        )
    w = as_distribution(outcome_weights)
    total = sum(wi * binary_entropy(check_probability(c, "conditional")) for wi, c in zip(w, conditionals))
    return min(max(total, 0.0), 1.0)


def joint_from_conditionals(outcome_weights: Sequence[float], conditionals: Sequence[float]) -> np.ndarray:
    """Joint table P(A=a, E=i) with rows a in {0, 1} and one column per outcome."""
    if len(outcome_weights) != len(conditionals):
        raise UsageError("outcome weights and conditionals differ in length")
    w = as_distribution(outcome_weights)
    c = np.array([check_probability(x, "conditional") for x in conditionals])
    return np.vstack([w * c, w * (1.0 - c)])
