"""Hidden-variable EPR-Bohm model on the parallelized 3-sphere.

Alice's raw score is the scalar (-I a)(mu . a) and Bob's is (+I b)(mu . b),
with mu = lambda I. Their standard scores are the bivectors mu . a and mu . b.
Evaluated in Cl(3,0) the raw scores come out as lambda and -lambda for every
direction, so the raw-outcome coincidence ratio is identically -1; the
standard-score covariance is what carries -a.b. Both are reported.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from parsphere import _mc
from parsphere.errors import ConsistencyError, DomainError
from parsphere.ga import (
    Multivector,
    as_unit,
    bivector_coefficients,
    bivector_of,
    check_orientation,
    dual_bivector,
    gp_array,
)
from parsphere.records import COINCIDENCE, ESTIMATORS, STANDARD_SCORE, CorrelationRecord
from parsphere.stats import LambdaDistribution

SCALAR_RESIDUAL_TOL = 1e-10
TSIRELSON = 2.0 * math.sqrt(2.0)

RAW_SCORE_DISCREPANCY = (
    "raw scores evaluate to A = lambda and B = -lambda for every direction, so the "
    "coincidence ratio is -1 at every angle; -a.b appears only in the standard-score estimator"
)


def _scalar_outcome(product: Multivector) -> int:
    c = product.coefficients
    if np.max(np.abs(c[1:])) > SCALAR_RESIDUAL_TOL:
        raise ConsistencyError(f"measurement product is not a scalar: {product!r}")
    if abs(abs(c[0]) - 1.0) > SCALAR_RESIDUAL_TOL:
        raise ConsistencyError(f"measurement product is not +-1: {product!r}")
    return 1 if c[0] > 0 else -1


def raw_score_A(a: Sequence[float], lam: int) -> int:
    a = as_unit(a, name="a")
    return _scalar_outcome(-dual_bivector(a) * bivector_of(a, lam))


def raw_score_B(b: Sequence[float], lam: int) -> int:
    b = as_unit(b, name="b")
    return _scalar_outcome(dual_bivector(b) * bivector_of(b, lam))


def standard_score(n: Sequence[float], lam: int) -> Multivector:
    return bivector_of(n, lam)


def correlation_multivector(a: Sequence[float], b: Sequence[float]) -> Multivector:
    """Fair-coin average of (mu . a)(mu . b) as a full multivector.

    The bivector part is -I(a x b) for both orientations, so it survives the
    average; only the scalar part is the correlation.
    """
    total = Multivector.scalar(0.0)
    for lam in (1, -1):
        total = total + standard_score(a, lam) * standard_score(b, lam)
    return total * 0.5


def correlation_exact(a: Sequence[float], b: Sequence[float]) -> float:
    return correlation_multivector(a, b).scalar_part()


def angle_deg(a: Sequence[float], b: Sequence[float]) -> float:
    c = float(np.clip(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)), -1.0, 1.0))
    return math.degrees(math.acos(c))


def direction_in_plane(theta_deg: float) -> np.ndarray:
    t = math.radians(theta_deg)
    return np.array([math.cos(t), math.sin(t), 0.0])


@dataclass(frozen=True)
class EPRResult:
    standard_score: CorrelationRecord
    coincidence: CorrelationRecord
    # norm of the averaged non-scalar part of A B; nonzero whenever a x b != 0
    bivector_residual: float

    def record(self, estimator: str) -> CorrelationRecord:
        if estimator == STANDARD_SCORE:
            return self.standard_score
        if estimator == COINCIDENCE:
            return self.coincidence
        raise DomainError(f"unknown estimator {estimator!r}; choose from {ESTIMATORS}")


def run_epr(
    a: Sequence[float],
    b: Sequence[float],
    *,
    n: int,
    seed: int,
    dist: LambdaDistribution | None = None,
    theta_deg: float | None = None,
    stream: int = 0,
    workers: int = 1,
) -> EPRResult:
    """Monte Carlo over lambda producing both estimators from the same draws."""
    a = as_unit(a, name="a")
    b = as_unit(b, name="b")
    p_plus = 0.5 if dist is None else dist.p_plus
    instr_a = -dual_bivector(a).coefficients
    instr_b = dual_bivector(b).coefficients

    def block(rng: np.random.Generator, size: int):
        lam = _mc.draw_orientations(rng, size, p_plus)
        sa = bivector_coefficients(a, lam)
        sb = bivector_coefficients(b, lam)
        prod = gp_array(sa, sb)
        raw_a = gp_array(instr_a, sa)
        raw_b = gp_array(instr_b, sb)
        for raw in (raw_a, raw_b):
            if np.max(np.abs(raw[:, 1:])) > SCALAR_RESIDUAL_TOL:
                raise ConsistencyError("raw score product has a non-scalar residual")
        out_a = np.where(raw_a[:, 0] > 0, 1, -1)
        out_b = np.where(raw_b[:, 0] > 0, 1, -1)
        counts = (
            int(np.sum((out_a == 1) & (out_b == 1))),
            int(np.sum((out_a == 1) & (out_b == -1))),
            int(np.sum((out_a == -1) & (out_b == 1))),
            int(np.sum((out_a == -1) & (out_b == -1))),
        )
        return prod.sum(axis=0), counts

    parts = _mc.run_blocks(n, seed, block, stream=stream, workers=workers)
    total = np.zeros(8)
    c_pp = c_pm = c_mp = c_mm = 0
    for s, (pp, pm, mp, mm) in parts:
        total = total + s
        c_pp += pp
        c_pm += pm
        c_mp += mp
        c_mm += mm
    mean = total / n
    theta = angle_deg(a, b) if theta_deg is None else float(theta_deg)
    reference = -float(np.dot(a, b))
    stderr = 1.0 / math.sqrt(n)
    counts = dict(c_pp=c_pp, c_pm=c_pm, c_mp=c_mp, c_mm=c_mm)
    std_rec = CorrelationRecord(theta, float(mean[0]), reference, stderr, n, **counts, estimator=STANDARD_SCORE)
    ratio = (c_pp + c_mm - c_pm - c_mp) / n
    coin_rec = CorrelationRecord(theta, float(ratio), reference, stderr, n, **counts, estimator=COINCIDENCE)
    return EPRResult(std_rec, coin_rec, float(np.linalg.norm(mean[1:])))


def simulate(
    a: Sequence[float],
    b: Sequence[float],
    *,
    n: int,
    seed: int,
    estimator: str = STANDARD_SCORE,
    dist: LambdaDistribution | None = None,
    stream: int = 0,
    workers: int = 1,
) -> CorrelationRecord:
    if estimator not in ESTIMATORS:
        raise DomainError(f"unknown estimator {estimator!r}; choose from {ESTIMATORS}")
    return run_epr(a, b, n=n, seed=seed, dist=dist, stream=stream, workers=workers).record(estimator)


# --- CHSH -----------------------------------------------------------------


@dataclass(frozen=True)
class ChshQuadruple:
    a: tuple[float, float, float]
    a_prime: tuple[float, float, float]
    b: tuple[float, float, float]
    b_prime: tuple[float, float, float]

    def __post_init__(self):
        for name in ("a", "a_prime", "b", "b_prime"):
            v = as_unit(getattr(self, name), name=name)
            object.__setattr__(self, name, tuple(float(x) for x in v))

    @classmethod
    def from_angles(cls, a: float, a_prime: float, b: float, b_prime: float) -> "ChshQuadruple":
        """Coplanar quadruple from in-plane angles in degrees."""
        return cls(*(tuple(direction_in_plane(t)) for t in (a, a_prime, b, b_prime)))


def _dot(u, v) -> float:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def chsh_string(a, ap, b, bp) -> float:
    """Signed E(a,b) + E(a,b') + E(a',b) - E(a',b') with E = -a.b (no validation)."""
    return -_dot(a, b) - _dot(a, bp) - _dot(ap, b) + _dot(ap, bp)


def chsh_value(q: ChshQuadruple) -> float:
    return abs(
        correlation_exact(q.a, q.b)
        + correlation_exact(q.a, q.b_prime)
        + correlation_exact(q.a_prime, q.b)
        - correlation_exact(q.a_prime, q.b_prime)
    )


def chsh_bound(q: ChshQuadruple) -> float:
    """2 sqrt(1 - (a x a') . (b' x b))."""
    t = _dot(_cross(q.a, q.a_prime), _cross(q.b_prime, q.b))
    return 2.0 * math.sqrt(max(0.0, 1.0 - t))


def _unit_from_sphere(theta: float, phi: float):
    s = math.sin(theta)
    return (s * math.cos(phi), s * math.sin(phi), math.cos(theta))


def _objective(p) -> float:
    a, ap, b, bp = (_unit_from_sphere(p[2 * i], p[2 * i + 1]) for i in range(4))
    return abs(chsh_string(a, ap, b, bp))


def _params_from_quadruple(q: ChshQuadruple) -> list[float]:
    p = []
    for v in (q.a, q.a_prime, q.b, q.b_prime):
        p.append(math.acos(max(-1.0, min(1.0, v[2]))))
        p.append(math.atan2(v[1], v[0]))
    return p


def _coordinate_ascent(p: list[float], step: float, tol: float, min_step: float) -> tuple[list[float], float]:
    best = _objective(p)
    while True:
        start = best
        for i in range(len(p)):
            for direction in (1.0, -1.0):
                moved = False
                # keep stepping along this coordinate while it helps
                while True:
                    old = p[i]
                    p[i] = old + direction * step
                    val = _objective(p)
                    if val > best:
                        best = val
                        moved = True
                    else:
                        p[i] = old
                        break
                if moved:
                    break
        if best - start < tol:
            if step < min_step:
                return p, best
            step *= 0.5


def chsh_maximize(
    restarts: int = 20,
    seed: int = 0,
    *,
    start: ChshQuadruple | None = None,
    tol: float = 1e-10,
    initial_step: float = 0.5,
    min_step: float = 1e-9,
) -> tuple[ChshQuadruple, float]:
    """Random-restart coordinate ascent over the spherical angles of a, a', b, b'.

    Each coordinate is pushed while the CHSH value improves; when a full sweep
    gains less than ``tol`` the step is halved, down to ``min_step``.
    ``start`` replaces the first random start.
    """
    if restarts < 1:
        raise DomainError(f"restarts must be >= 1, got {restarts}")
    rng = random.Random(seed)
    best_p, best_val = None, -1.0
    for r in range(restarts):
        if r == 0 and start is not None:
            p = _params_from_quadruple(start)
        else:
            p = []
            for _ in range(4):
                p.append(math.acos(rng.uniform(-1.0, 1.0)))
                p.append(rng.uniform(-math.pi, math.pi))
        p, val = _coordinate_ascent(p, initial_step, tol, min_step)
        if val > best_val:
            best_p, best_val = list(p), val
    quad = ChshQuadruple(*(_unit_from_sphere(best_p[2 * i], best_p[2 * i + 1]) for i in range(4)))
    return quad, chsh_value(quad)


def tsirelson_quadruple() -> ChshQuadruple:
    """Coplanar directions at 0, 90, 45 and -45 degrees."""
    return ChshQuadruple.from_angles(0.0, 90.0, 45.0, -45.0)
