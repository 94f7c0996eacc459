"""Sufficient security conditions and the critical CHSH score.

Against an eavesdropper with any finite outcome alphabet, the key is secure
(individual attacks) when ``h(P_B) < 2 (1 - P_E)``. Writing Eve's guessing
probability through her monogamy-limited CHSH score turns this into
``h(beta) < 3 - 4 f(beta)``, which :func:`critical_beta` solves for the
smallest secure ``beta``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from monogamy_qkd.entropy import binary_entropy, check_probability
from monogamy_qkd.errors import DomainError, UsageError
from monogamy_qkd.monogamy import CLASSICAL, TSIRELSON, MonogamyModel, Theory

MAX_ITER = 200


def tsirelson() -> float:
    """Maximal quantum CHSH winning probability, (2 + sqrt 2) / 4."""
    return TSIRELSON


@dataclass(frozen=True)
class PointwiseReport:
    p_b: float
    p_e: float
    lhs_bits: float
    rhs_bits: float
    secure: bool
    margin_bits: float


@dataclass(frozen=True)
class ConditionReport:
    beta: float
    theory: Theory
    lhs_bits: float
    rhs_bits: float
    secure: bool
    margin_bits: float


class Status(enum.Enum):
    ROOT = "root"
    ALWAYS_SECURE = "always_secure"
    NEVER_SECURE = "never_secure"


@dataclass(frozen=True)
class CriticalResult:
    """Outcome of the bisection for the critical score.

    ``bracket`` is the final ``(lo, hi)`` pair: the condition fails at ``lo``
    and holds at ``hi``. For the two degenerate statuses it is the initial
    search interval and ``beta_star`` is its relevant end.
    """

    beta_star: float
    bracket: tuple[float, float]
    tolerance: float
    iterations: int
    status: Status
    residual_bits: float
    theory: Theory

    def rounded(self, digits: int = 3) -> Decimal:
        """``beta_star`` rounded half-up to ``digits`` decimals."""
        return Decimal(repr(self.beta_star)).quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_UP)


def _guess_probability(value: float, name: str) -> float:
    p = check_probability(value, name)
    if p < 0.5:
        raise DomainError(f"{name}={p!r} is below 1/2; guessing probabilities are at least chance")
    return p


def check_pointwise(p_b: float, p_e: float) -> PointwiseReport:
    """Test ``h(P_B) < 2 (1 - P_E)`` for given Bob and Eve guessing probabilities."""
    p_b = _guess_probability(p_b, "p_b")
    p_e = _guess_probability(p_e, "p_e")
    lhs = binary_entropy(p_b)
    rhs = 2.0 * (1.0 - p_e)
    return PointwiseReport(p_b, p_e, lhs, rhs, lhs < rhs, rhs - lhs)


def condition_margin(beta: float, model: MonogamyModel) -> float:
    """``(3 - 4 f(beta)) - h(beta)``; positive exactly where the key is secure."""
    return (3.0 - 4.0 * model.evaluate(beta)) - binary_entropy(beta)


def check_condition(beta: float, model: MonogamyModel) -> ConditionReport:
    """Evaluate ``h(beta) < 3 - 4 f(beta)`` under ``model``."""
    f = model.evaluate(beta)
    beta = float(beta)
    lhs = binary_entropy(beta)
    rhs = 3.0 - 4.0 * f
    return ConditionReport(beta, model.theory, lhs, rhs, lhs < rhs, rhs - lhs)


def critical_beta(model: MonogamyModel, tolerance: float = 1e-9) -> CriticalResult:
    """Smallest CHSH score above which the key is secure under ``model``.

    The margin is strictly increasing on ``[3/4, domain_upper]`` (``h`` falls,
    ``f`` does not rise), so bisection on its sign is safe.
    """
    try:
        tol = float(tolerance)
    except (TypeError, ValueError):
        raise UsageError(f"tolerance must be a number, got {tolerance!r}") from None
    if not (tol > 0.0) or math.isinf(tol):
        raise UsageError(f"tolerance must be positive and finite, got {tolerance!r}")

    lo = max(CLASSICAL, model.domain_lower)
    hi = model.domain_upper
    if lo >= hi:
        raise DomainError(f"model domain [{model.domain_lower}, {hi}] does not reach above 3/4")

    g_lo = condition_margin(lo, model)
    g_hi = condition_margin(hi, model)
    if g_lo > 0.0:
        return CriticalResult(lo, (lo, hi), tol, 0, Status.ALWAYS_SECURE, g_lo, model.theory)
    if g_hi <= 0.0:
        return CriticalResult(hi, (lo, hi), tol, 0, Status.NEVER_SECURE, g_hi, model.theory)

    iterations = 0
    while hi - lo > tol and iterations < MAX_ITER:
        mid = 0.5 * (lo + hi)
        if condition_margin(mid, model) > 0.0:
            hi = mid
        else:
            lo = mid
        iterations += 1
    beta_star = 0.5 * (lo + hi)
    return CriticalResult(
        beta_star, (lo, hi), tol, iterations, Status.ROOT, condition_margin(beta_star, model), model.theory
    )
