"""Exact-identity self checks behind ``parsphere check-algebra``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from parsphere import ga
from parsphere.octonion import (
    FANO,
    QUATERNION_SLOTS,
    Octonion,
    associator,
    hurwitz_check,
    oct_mul_array,
)

EXPECTED_FANO = ((1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7), (5, 6, 1), (6, 7, 2), (7, 1, 3))
# evaluated once by hand from the table: (e1 e2) e3 = e4 e3 = -e6, e1 (e2 e3) = e1 e5 = +e6
ASSOCIATOR_E1_E2_E3 = Octonion([0, 0, 0, 0, 0, 0, -2, 0])


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol


def levi_civita(j: int, k: int, l: int) -> int:
    return int(np.sign((k - j) * (l - j) * (l - k)))


def random_unit_vectors(rng: np.random.Generator, count: int, dim: int = 3) -> np.ndarray:
    v = rng.normal(size=(count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def bivector_algebra_residual(lam: int | None = None) -> float:
    """max |beta_j beta_k + delta_jk + eps_jkl beta_l| over all 9 pairs.

    With ``lam`` given the left side uses beta_j(lam) = lam beta_j.
    """
    beta = [ga.bivector_basis(j) for j in range(3)]
    scale = 1 if lam is None else lam
    worst = 0.0
    for j, k in itertools.product(range(3), repeat=2):
        lhs = (beta[j] * scale) * (beta[k] * scale)
        rhs = ga.Multivector.scalar(-1.0 if j == k else 0.0)
        for l in range(3):
            rhs = rhs - beta[l] * levi_civita(j, k, l)
        worst = max(worst, float(np.max(np.abs((lhs - rhs).coefficients))))
    return worst


def anticommutation_residual() -> float:
    worst = 0.0
    for j, k in itertools.product(range(3), repeat=2):
        ej, ek = ga.BASIS_VECTORS[j], ga.BASIS_VECTORS[k]
        target = ga.Multivector.scalar(2.0 if j == k else 0.0)
        worst = max(worst, float(np.max(np.abs((ej * ek + ek * ej - target).coefficients))))
    return worst


def sphere_identity_residual(lam: int, pairs: int = 1000, seed: int = 0) -> float:
    """max over random unit a, b of |(mu.a)(mu.b) - (-a.b - mu.(a x b))|."""
    rng = np.random.default_rng(seed)
    a_s, b_s = random_unit_vectors(rng, pairs), random_unit_vectors(rng, pairs)
    worst = 0.0
    for a, b in zip(a_s, b_s):
        lhs = ga.bivector_of(a, lam) * ga.bivector_of(b, lam)
        c = np.cross(a, b)
        # mu.(a x b) for a non-unit axis: lam * I (a x b)
        rhs = ga.Multivector.scalar(-float(a @ b)) - ga.dual_bivector(c) * lam
        worst = max(worst, float(np.max(np.abs((lhs - rhs).coefficients))))
    return worst


def gp_associativity_residual(triples: int = 1000, seed: int = 1) -> float:
    rng = np.random.default_rng(seed)
    x, y, z = (rng.uniform(-1, 1, size=(triples, 8)) for _ in range(3))
    lhs = ga.gp_array(ga.gp_array(x, y), z)
    rhs = ga.gp_array(x, ga.gp_array(y, z))
    return float(np.max(np.abs(lhs - rhs)))


def rotor_norm_residual(count: int = 1000, seed: int = 2) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for c, theta in zip(random_unit_vectors(rng, count), rng.uniform(-np.pi, np.pi, count)):
        worst = max(worst, abs(ga.rotor_exp(c, theta).norm() - 1.0))
    return worst


def hurwitz_residual(n: int, pairs: int = 1000, seed: int = 3) -> float:
    rng = np.random.default_rng(seed + n)
    worst = 0.0
    for _ in range(pairs):
        lhs, rhs = hurwitz_check(n, rng.uniform(-1, 1, n), rng.uniform(-1, 1, n))
        worst = max(worst, abs(lhs - rhs))
    return worst


def norm_multiplicativity_residual(pairs: int = 10_000, seed: int = 4) -> float:
    rng = np.random.default_rng(seed)
    x, y = rng.uniform(-1, 1, size=(pairs, 8)), rng.uniform(-1, 1, size=(pairs, 8))
    prod = oct_mul_array(x, y)
    return float(np.max(np.abs(np.linalg.norm(prod, axis=1) - np.linalg.norm(x, axis=1) * np.linalg.norm(y, axis=1))))


def quaternion_associator_residual() -> float:
    units = [Octonion.unit(i) for i in QUATERNION_SLOTS]
    return max(associator(x, y, z).norm() for x, y, z in itertools.product(units, repeat=3))


def alternativity_residual(pairs: int = 1000, seed: int = 5) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(pairs):
        x, y = Octonion(rng.uniform(-1, 1, 8)), Octonion(rng.uniform(-1, 1, 8))
        worst = max(worst, associator(x, x, y).norm(), associator(x, y, y).norm())
    return worst


def run_all() -> list[CheckResult]:
    tol = ga.IDENTITY_TOL
    results = [
        CheckResult("basis anticommutation", anticommutation_residual(), tol),
        CheckResult("bivector algebra beta_j beta_k", bivector_algebra_residual(), tol),
        CheckResult("lambda bivector algebra, lambda=+1", bivector_algebra_residual(1), tol),
        CheckResult("lambda bivector algebra, lambda=-1", bivector_algebra_residual(-1), tol),
        CheckResult("(mu.a)(mu.b) = -a.b - mu.(a x b), lambda=+1", sphere_identity_residual(1), tol),
        CheckResult("(mu.a)(mu.b) = -a.b - mu.(a x b), lambda=-1", sphere_identity_residual(-1), tol),
        CheckResult("geometric product associativity", gp_associativity_residual(), 1e-10),
        CheckResult("rotor unit norm", rotor_norm_residual(), tol),
        CheckResult(
            "Fano table read from J",
            0.0 if FANO.triples == EXPECTED_FANO else 1.0,
            0.0,
        ),
    ]
    for n in (1, 2, 4, 8):
        results.append(CheckResult(f"Hurwitz n={n}", hurwitz_residual(n), tol))
    results += [
        CheckResult("octonion norm multiplicativity", norm_multiplicativity_residual(), tol),
        CheckResult("quaternion subalgebra associator", quaternion_associator_residual(), tol),
        CheckResult(
            "associator(e1,e2,e3) fixture",
            float(np.max(np.abs(associator(*(Octonion.unit(i) for i in (1, 2, 3))).coefficients - ASSOCIATOR_E1_E2_E3.coefficients))),
            tol,
        ),
        CheckResult("octonion alternativity", alternativity_residual(), 1e-10),
    ]
    return results
