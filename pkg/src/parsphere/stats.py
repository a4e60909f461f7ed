"""Raw scores, standard scores and the hidden-variable distribution.

All sample statistics use the 1/n normalizer (population form), not 1/(n-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from parsphere.errors import DomainError
from parsphere.ga import Multivector, check_orientation


def _series(xs: Sequence[float]) -> np.ndarray:
    arr = np.asarray(xs, dtype=float).reshape(-1)
    if arr.size == 0:
        raise DomainError("empty series")
    return arr


def standardize(xs: Sequence[float]) -> np.ndarray:
    """z = (x - mean) / sigma."""
    x = _series(xs)
    sigma = x.std()
    # spread below float resolution of the mean counts as constant
    if sigma <= 1e-15 * max(1.0, abs(x.mean())):
        raise DomainError("degenerate series: standard deviation is zero")
    return (x - x.mean()) / sigma


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Correlation of two raw-score series, computed as the mean product of their standard scores."""
    x, y = _series(xs), _series(ys)
    if x.shape != y.shape:
        raise DomainError(f"length mismatch: {x.size} vs {y.size}")
    r = float(np.mean(standardize(x) * standardize(y)))
    return min(1.0, max(-1.0, r))


def covariance(xs: Sequence[float], ys: Sequence[float]) -> float:
    x, y = _series(xs), _series(ys)
    if x.shape != y.shape:
        raise DomainError(f"length mismatch: {x.size} vs {y.size}")
    return float(np.mean((x - x.mean()) * (y - y.mean())))


@dataclass(frozen=True)
class LambdaDistribution:
    """Two-point law of the hidden sign with mean ``mean_lambda``.

    ``m`` is the number of local contexts; the reweighting density is
    rho(lambda) = kappa(lambda) ** m. ``mean_lambda`` of exactly +1 or -1 is
    allowed and describes a fixed orientation, for which kappa is undefined.
    """

    mean_lambda: float = 0.0
    m: int = 2

    def __post_init__(self):
        if not -1.0 <= self.mean_lambda <= 1.0:
            raise DomainError(f"mean_lambda must lie in [-1, 1], got {self.mean_lambda}")
        if int(self.m) != self.m or self.m < 1:
            raise DomainError(f"m must be a positive integer, got {self.m}")

    @classmethod
    def fair(cls, m: int = 2) -> "LambdaDistribution":
        return cls(0.0, m)

    @classmethod
    def fixed(cls, lam: int, m: int = 2) -> "LambdaDistribution":
        return cls(float(check_orientation(lam)), m)

    @property
    def degenerate(self) -> bool:
        return abs(self.mean_lambda) == 1.0

    @property
    def p_plus(self) -> float:
        return (1.0 + self.mean_lambda) / 2.0

    @property
    def p_minus(self) -> float:
        return (1.0 - self.mean_lambda) / 2.0

    def probability(self, lam: int) -> float:
        return self.p_plus if check_orientation(lam) == 1 else self.p_minus

    def rho(self, lam: int) -> float:
        return kappa(lam, self) ** self.m

    def rho_normalization(self) -> float:
        """sum over lambda of P(lambda) rho(lambda); exactly 1 for a fair coin."""
        return self.p_plus * self.rho(1) + self.p_minus * self.rho(-1)


def kappa(lam: int, dist: LambdaDistribution) -> float:
    """(1 - lam * mean) / sqrt(1 - mean^2)."""
    lam = check_orientation(lam)
    mean = dist.mean_lambda
    if abs(mean) >= 1.0:
        raise DomainError("degenerate distribution: kappa needs |mean_lambda| < 1")
    return (1.0 - lam * mean) / math.sqrt(1.0 - mean * mean)


def kappa_array(lams: np.ndarray, mean: float) -> np.ndarray:
    if abs(mean) >= 1.0:
        raise DomainError("degenerate distribution: kappa needs |mean_lambda| < 1")
    return (1.0 - lams * mean) / math.sqrt(1.0 - mean * mean)


def _coefficient_rows(samples) -> np.ndarray:
    if isinstance(samples, np.ndarray):
        rows = np.asarray(samples, dtype=float)
    else:
        rows = np.array([s.coefficients if isinstance(s, Multivector) else s for s in samples], dtype=float)
    if rows.ndim != 2 or rows.shape[0] == 0:
        raise DomainError("need a non-empty list of multivectors")
    return rows


def bivector_sigma(samples) -> float:
    """sqrt(mean ||s - mean(s)||^2) with the Euclidean norm on the 8 coefficients."""
    rows = _coefficient_rows(samples)
    dev = rows - rows.mean(axis=0)
    return float(math.sqrt(np.mean(np.sum(dev * dev, axis=1))))


def standardize_with_bivector(raw: Multivector | float, sigma: Multivector, mean: Multivector | float = 0.0) -> Multivector:
    """(raw - mean) divided by a bivector-valued deviation.

    Division is left multiplication by ``sigma``'s inverse; for a unit
    bivector s, s^-1 = -s since s s = -1.
    """
    if not isinstance(raw, Multivector):
        raw = Multivector.scalar(float(raw))
    return sigma.inverse() * (raw - mean)
