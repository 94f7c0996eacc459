"""Monogamy relations for the CHSH game.

A monogamy relation bounds how well an eavesdropper can play the CHSH game
with Alice once Alice and Bob win it with probability ``beta``. All values
here are winning probabilities, so they live in [1/2, 1].
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from monogamy_qkd.errors import DomainError, UsageError

CLASSICAL = 0.75
TSIRELSON = (2.0 + math.sqrt(2.0)) / 4.0

_TOL = 1e-12
_RADICAND_FLOOR = 1e-13
# Grid used to validate user-supplied curves.
_CHECK_POINTS = 2001


class Theory(enum.Enum):
    QUANTUM = "qm"
    NOSIGNALLING = "ns"
    CUSTOM = "custom"


def check_beta(beta: float, upper: float = 1.0, lower: float = 0.5, name: str = "beta") -> float:
    """Validate a CHSH winning probability against ``[lower, upper]``."""
    try:
        b = float(beta)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {beta!r}") from None
    if math.isnan(b) or b < lower - _TOL or b > upper + _TOL:
        raise DomainError(f"{name}={b!r} is outside [{lower!r}, {upper!r}]")
    return min(max(b, lower), upper)


def f_quantum(beta: float) -> float:
    """Quantum trade-off ``1/2 + sqrt(8 - (8 beta - 4)^2) / 8``.

    Defined up to the Tsirelson bound, where Eve is fully decoupled.
    """
    b = check_beta(beta, upper=TSIRELSON)
    radicand = 8.0 - (8.0 * b - 4.0) ** 2
    # round-off at the Tsirelson end would otherwise leave ~1e-8 after the sqrt
    if radicand < _RADICAND_FLOOR:
        radicand = 0.0
    return 0.5 + math.sqrt(radicand) / 8.0


def f_nosignalling(beta: float) -> float:
    """No-signalling trade-off ``3/2 - beta`` on [1/2, 1]."""
    b = check_beta(beta)
    return 1.5 - b


def eve_guess_from_beta(beta_ae: float) -> float:
    """Eve's guessing probability for Alice's bit given her CHSH score.

    Affine map ``2 beta_ae - 1/2`` clamped to [1/2, 1]; a classical score
    of 3/4 or more means Eve guesses perfectly.
    """
    b = check_beta(beta_ae, name="beta_ae")
    return min(max(2.0 * b - 0.5, 0.5), 1.0)


def _validate_curve(curve: Callable[[float], float], lower: float, upper: float) -> None:
    grid = np.linspace(lower, upper, _CHECK_POINTS)
    values = np.array([float(curve(float(b))) for b in grid])
    if not np.all(np.isfinite(values)):
        raise DomainError("custom curve returned non-finite values")
    if values.min() < 0.5 - _TOL or values.max() > 1.0 + _TOL:
        raise DomainError("custom curve leaves the range [1/2, 1]")
    if np.any(np.diff(values) > _TOL):
        raise DomainError("custom curve is not non-increasing")


@dataclass(frozen=True)
class MonogamyModel:
    """A theory tag together with its monogamy curve and domain."""

    theory: Theory
    curve: Callable[[float], float] = field(repr=False, compare=False)
    domain_upper: float
    domain_lower: float = 0.5
    label: str = ""

    @classmethod
    def quantum(cls) -> "MonogamyModel":
        return cls(Theory.QUANTUM, f_quantum, TSIRELSON, label="quantum")

    @classmethod
    def nosignalling(cls) -> "MonogamyModel":
        return cls(Theory.NOSIGNALLING, f_nosignalling, 1.0, label="no-signalling")

    @classmethod
    def custom(
        cls,
        curve: Callable[[float], float],
        domain_upper: float = 1.0,
        domain_lower: float = 0.5,
        label: str = "custom",
    ) -> "MonogamyModel":
        """Wrap a callback; it is checked for range and monotonicity on a grid."""
        upper = check_beta(domain_upper, name="domain_upper")
        lower = check_beta(domain_lower, name="domain_lower")
        if lower >= upper:
            raise DomainError("custom curve domain is empty")
        _validate_curve(curve, lower, upper)
        return cls(Theory.CUSTOM, curve, upper, lower, label=label)

    @classmethod
    def from_table(cls, betas: Sequence[float], values: Sequence[float], label: str = "custom") -> "MonogamyModel":
        """Piecewise-linear curve through ``(beta, f)`` knots."""
        b = np.asarray(betas, dtype=float)
        f = np.asarray(values, dtype=float)
        if b.ndim != 1 or b.shape != f.shape or b.size < 2:
            raise DomainError("curve table needs at least two (beta, f) rows")
        if np.any(np.diff(b) <= 0):
            raise DomainError("curve table betas must be strictly increasing")
        for x in b:
            check_beta(x)
        if f.min() < 0.5 - _TOL or f.max() > 1.0 + _TOL:
            raise DomainError("curve table values leave the range [1/2, 1]")
        if np.any(np.diff(f) > 0):
            raise DomainError("curve table values are not non-increasing")
        knots_b, knots_f = tuple(b), tuple(f)

        def curve(beta: float) -> float:
            return float(np.interp(beta, knots_b, knots_f))

        return cls(Theory.CUSTOM, curve, float(b[-1]), float(b[0]), label=label)

    def evaluate(self, beta: float) -> float:
        b = check_beta(beta, upper=self.domain_upper, lower=self.domain_lower)
        return float(self.curve(b))


def evaluate(model: MonogamyModel, beta: float) -> float:
    """Maximal Eve-side CHSH winning probability allowed by ``model``."""
    return model.evaluate(beta)


def load_curve_csv(path: str | Path, label: str | None = None) -> MonogamyModel:
    """Read a ``beta,f`` CSV table into a custom model."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["beta", "f"]:
            raise DomainError(f"{path}: expected header 'beta,f', got {header!r}")
        betas, values = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise DomainError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
            try:
                betas.append(float(row[0]))
                values.append(float(row[1]))
            except ValueError:
                raise DomainError(f"{path}:{lineno}: non-numeric entry {row!r}") from None
    return MonogamyModel.from_table(betas, values, label=label or path.stem)


def builtin_model(theory: str | Theory) -> MonogamyModel:
    theory = Theory(theory)
    if theory is Theory.QUANTUM:
        return MonogamyModel.quantum()
    if theory is Theory.NOSIGNALLING:
        return MonogamyModel.nosignalling()
    raise UsageError("custom models need a curve; use MonogamyModel.custom or load_curve_csv")
