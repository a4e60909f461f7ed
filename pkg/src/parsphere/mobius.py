"""Moebius-strip toy model.

The source emits complementary patterns: Alice reads lambda, Bob reads
-lambda. Bob's pattern flips handedness in transit with probability
beta / 2 pi, where the post separation beta relates to the strip's twist
angle eta by beta = pi (1 - cos eta). Flipping Alice's pattern instead gives
the same statistics; only the relative handedness is observable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from parsphere import _mc
from parsphere.errors import DomainError
from parsphere.ga import check_orientation
from parsphere.records import COINCIDENCE, CorrelationRecord

TWO_PI = 2.0 * math.pi


def _check_beta(beta: float) -> float:
    if not 0.0 <= beta <= TWO_PI:
        raise DomainError(f"beta must lie in [0, 2pi], got {beta}")
    return float(beta)


def _check_eta(eta: float) -> float:
    if not 0.0 <= eta <= math.pi:
        raise DomainError(f"eta must lie in [0, pi], got {eta}")
    return float(eta)


@dataclass(frozen=True)
class MobiusGeometry:
    beta: float
    eta: float | None = None

    def __post_init__(self):
        _check_beta(self.beta)
        if self.eta is not None and abs(eta_to_beta(self.eta) - self.beta) > 1e-12:
            raise DomainError("beta and eta are inconsistent")

    @classmethod
    def from_eta(cls, eta: float) -> "MobiusGeometry":
        return cls(eta_to_beta(eta), float(eta))


def mobius_outcomes(lam: int) -> tuple[int, int]:
    lam = check_orientation(lam)
    return lam, -lam


def flip_probability(beta: float) -> float:
    return _check_beta(beta) / TWO_PI


def mobius_correlation_exact(beta: float) -> float:
    return -1.0 + _check_beta(beta) / math.pi


def eta_to_beta(eta: float) -> float:
    # clamp: pi * (1 - cos(pi)) may round a hair above 2 pi
    return min(TWO_PI, math.pi * (1.0 - math.cos(_check_eta(eta))))


def mobius_correlation_eta(eta: float) -> float:
    return -math.cos(_check_eta(eta))


@dataclass(frozen=True)
class MobiusRun:
    record: CorrelationRecord
    mean_a: float
    mean_b: float


def run_mobius(eta: float, n: int, seed: int, *, stream: int = 0, workers: int = 1) -> MobiusRun:
    eta = _check_eta(eta)
    p_flip = flip_probability(eta_to_beta(eta))

    def block(rng: np.random.Generator, size: int):
        lam = _mc.draw_orientations(rng, size)
        flipped = rng.random(size) < p_flip
        out_a = lam
        out_b = np.where(flipped, lam, -lam)
        return (
            int(np.sum((out_a == 1) & (out_b == 1))),
            int(np.sum((out_a == 1) & (out_b == -1))),
            int(np.sum((out_a == -1) & (out_b == 1))),
            int(np.sum((out_a == -1) & (out_b == -1))),
        )

    parts = _mc.run_blocks(n, seed, block, stream=stream, workers=workers)
    c_pp, c_pm, c_mp, c_mm = (sum(p[i] for p in parts) for i in range(4))
    estimate = (c_pp + c_mm - c_pm - c_mp) / n
    # products are +-1, so their 1/n variance is 1 - mean^2
    stderr = math.sqrt(max(0.0, 1.0 - estimate * estimate) / n)
    rec = CorrelationRecord(
        math.degrees(eta), estimate, mobius_correlation_eta(eta), stderr, n, c_pp, c_pm, c_mp, c_mm, COINCIDENCE
    )
    return MobiusRun(rec, (c_pp + c_pm - c_mp - c_mm) / n, (c_pp + c_mp - c_pm - c_mm) / n)


def simulate_mobius(eta: float, n: int, seed: int, *, stream: int = 0, workers: int = 1) -> CorrelationRecord:
    return run_mobius(eta, n, seed, stream=stream, workers=workers).record
