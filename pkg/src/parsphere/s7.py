"""The 7-sphere model: octonionic raw scores, standard scores and their products.

A measurement direction a in R^3 is embedded as a unit N(a) in R^7 and
realized as the pure-imaginary unit octonion sum N_i e_i. The standard score
mu . N(a) is lambda times that octonion. Products of several standard scores
are unit octonions f + g P, split into a real part f and an imaginary part of
length g along the unit axis P.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from parsphere import _mc
from parsphere.errors import ConsistencyError, DomainError
from parsphere.ga import UNIT_TOL, as_unit, check_orientation
from parsphere.octonion import FANO, Octonion, oct_mul_array
from parsphere.stats import LambdaDistribution, kappa, kappa_array

SCALAR_RESIDUAL_TOL = 1e-10
LEFT, RIGHT = "left", "right"

_FIBER_RE = re.compile(r"^fiber\((\d)\)$")


@dataclass(frozen=True)
class EmbeddingTable:
    """User supplied N(a) rows, matched on a within ``UNIT_TOL``."""

    rows: tuple[tuple[tuple[float, ...], tuple[float, ...]], ...]
    name: str = "custom"

    def lookup(self, a: np.ndarray) -> np.ndarray:
        for key, value in self.rows:
            if np.max(np.abs(np.asarray(key) - a)) <= UNIT_TOL:
                return np.asarray(value)
        raise DomainError(f"direction {a.tolist()} is not in embedding table {self.name!r}")


def parse_embedding_table(text: str, name: str = "custom") -> EmbeddingTable:
    """Rows look like ``a_x a_y a_z : N_1 ... N_7``; ``#`` starts a comment."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.count(":") != 1:
            raise DomainError(f"line {lineno}: expected 'a_x a_y a_z : N_1 ... N_7'")
        left, right = line.split(":")
        try:
            a = [float(x) for x in left.split()]
            n = [float(x) for x in right.split()]
        except ValueError as exc:
            raise DomainError(f"line {lineno}: {exc}") from None
        if len(a) != 3 or len(n) != 7:
            raise DomainError(f"line {lineno}: need 3 values before ':' and 7 after")
        as_unit(a, name=f"a (line {lineno})")
        as_unit(n, name=f"N (line {lineno})")
        rows.append((tuple(a), tuple(n)))
    if not rows:
        raise DomainError("embedding table is empty")
    return EmbeddingTable(tuple(rows), name)


def load_embedding_table(path: str | Path) -> EmbeddingTable:
    path = Path(path)
    return parse_embedding_table(path.read_text(encoding="utf-8"), name=path.name)


def embed_N(a: Sequence[float], scheme: str | EmbeddingTable = "axis") -> np.ndarray:
    """Unit N(a) in R^7 (component i is the coefficient of e_{i+1}).

    ``axis`` puts a on e1, e2, e3. ``fiber(k)`` puts a on the three imaginary
    units of the k-th triple of J, e.g. fiber(1) uses e1, e2, e4.
    """
    a = as_unit(a, name="a")
    if isinstance(scheme, EmbeddingTable):
        return scheme.lookup(a)
    out = np.zeros(7)
    if scheme == "axis":
        out[:3] = a
        return out
    m = _FIBER_RE.match(str(scheme))
    if m and 1 <= int(m.group(1)) <= 7:
        triple = FANO.triples[int(m.group(1)) - 1]
        for comp, unit in zip(a, triple):
            out[unit - 1] = comp
        return out
    raise DomainError(f"unknown embedding scheme {scheme!r}")


def _measurement_product(a, lam: int, scheme, nu: int = 1) -> float:
    q = Octonion.imaginary(embed_N(a, scheme))
    prod = (-nu * q) * (lam * q)
    c = prod.coefficients
    if np.max(np.abs(c[1:])) > SCALAR_RESIDUAL_TOL or abs(abs(c[0]) - 1.0) > SCALAR_RESIDUAL_TOL:
        raise ConsistencyError(f"7-sphere measurement product is not +-1: {prod!r}")
    return c[0]


def raw_score_7(a: Sequence[float], lam: int, scheme: str | EmbeddingTable = "axis") -> int:
    """(-J . N(a))(mu . N(a)) with mu = lambda J, evaluated as octonions."""
    lam = check_orientation(lam)
    return 1 if _measurement_product(a, lam, scheme) > 0 else -1


@dataclass(frozen=True)
class DetectorNoise:
    """Probability that the local device variable nu is +1."""

    p_plus: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.p_plus <= 1.0:
            raise DomainError(f"p_plus must be a probability, got {self.p_plus}")


def noisy_raw_mean(
    a: Sequence[float], lam: int, noise: DetectorNoise, scheme: str | EmbeddingTable = "axis"
) -> float:
    """Average over nu of (-nu J . N(a))(mu . N(a))."""
    lam = check_orientation(lam)
    return sum(
        p * _measurement_product(a, lam, scheme, nu)
        for nu, p in ((1, noise.p_plus), (-1, 1.0 - noise.p_plus))
    )


@dataclass(frozen=True)
class EquatorialPoint7:
    direction: tuple[float, ...]
    lam: int

    def __post_init__(self):
        d = as_unit(self.direction, name="N")
        if d.shape != (7,):
            raise DomainError("an equatorial point needs a 7-dimensional direction")
        object.__setattr__(self, "direction", tuple(float(x) for x in d))
        object.__setattr__(self, "lam", check_orientation(self.lam))

    @property
    def octonion(self) -> Octonion:
        return Octonion.imaginary(np.asarray(self.direction) * self.lam)


def standard_score_7(
    a: Sequence[float],
    lam: int,
    scheme: str | EmbeddingTable = "axis",
    noise: DetectorNoise | None = None,
) -> EquatorialPoint7:
    """mu . N(a). ``noise`` is accepted and has no effect on the score."""
    return EquatorialPoint7(tuple(embed_N(a, scheme)), lam)


def weighted_standard_score_7(
    a: Sequence[float], lam: int, dist: LambdaDistribution, scheme: str | EmbeddingTable = "axis"
) -> Octonion:
    """kappa(lambda) mu . N(a) for a biased hidden-variable law."""
    return standard_score_7(a, lam, scheme).octonion * kappa(lam, dist)


@dataclass(frozen=True)
class DecompositionResult:
    f: float
    g: float
    axis: tuple[float, ...] | None
    association: str = LEFT

    @property
    def norm_residual(self) -> float:
        return abs(self.f * self.f + self.g * self.g - 1.0)

    def reconstruct(self) -> Octonion:
        imag = np.zeros(7) if self.axis is None else self.g * np.asarray(self.axis)
        return Octonion(np.concatenate(([self.f], imag)))


def _fold(factors: list[np.ndarray], association: str) -> np.ndarray:
    if association == LEFT:
        acc = factors[0]
        for x in factors[1:]:
            acc = oct_mul_array(acc, x)
        return acc
    if association == RIGHT:
        acc = factors[-1]
        for x in reversed(factors[:-1]):
            acc = oct_mul_array(x, acc)
        return acc
    raise DomainError(f"association must be 'left' or 'right', got {association!r}")


def _as_octonion(p) -> Octonion:
    if isinstance(p, EquatorialPoint7):
        return p.octonion
    if isinstance(p, Octonion):
        return p
    raise DomainError(f"expected an equatorial point or octonion, got {type(p).__name__}")


def decompose(q: Octonion, association: str = LEFT, axis_tol: float = 1e-14) -> DecompositionResult:
    g = float(np.linalg.norm(q.imag))
    axis = tuple(float(x) for x in q.imag / g) if g > axis_tol else None
    return DecompositionResult(q.real, g, axis, association)


def product_decompose(points: Sequence, association: str = LEFT) -> DecompositionResult:
    """Multiply the points in order (octonions are not associative, so the
    bracketing is part of the answer) and split the result into f + g P."""
    if len(points) < 2:
        raise DomainError("need at least two points to form a product")
    q = _fold([_as_octonion(p).coefficients for p in points], association)
    return decompose(Octonion(q), association)


@dataclass(frozen=True)
class LRExpectation:
    E: float
    first_term: float
    second_term_magnitude: float
    rho_integral: float
    f: float
    g: float
    n: int
    association: str
    mean_product: tuple[float, ...]

    @property
    def stderr(self) -> float:
        return 1.0 / math.sqrt(self.n)


def expectation_LR(
    directions: Sequence[Sequence[float]],
    dist: LambdaDistribution | None = None,
    n: int = 100_000,
    seed: int = 0,
    *,
    scheme: str | EmbeddingTable = "fiber(1)",
    association: str = LEFT,
    stream: int = 0,
    workers: int = 1,
) -> LRExpectation:
    """Monte Carlo average over lambda of the product of the standard scores.

    Each score is weighted by kappa(lambda) when the law is biased, so the
    product carries rho = kappa**m. ``E`` is the real part of the averaged
    product and ``second_term_magnitude`` the length of its imaginary part,
    measured rather than assumed. ``f`` and ``g`` come from the unweighted
    product at lambda = +1, and ``first_term`` is f times the sampled mean of rho.
    """
    if len(directions) < 2:
        raise DomainError("need at least two measurement contexts")
    m = len(directions)
    if dist is None:
        dist = LambdaDistribution.fair(m)
    if dist.m != m:
        raise DomainError(f"distribution has m={dist.m} but {m} contexts were given")
    embedded = [np.concatenate(([0.0], embed_N(a, scheme))) for a in directions]
    reference = product_decompose([Octonion(e) for e in embedded], association)

    def block(rng: np.random.Generator, size: int):
        lam = _mc.draw_orientations(rng, size, dist.p_plus).astype(float)
        weight = lam if dist.degenerate else lam * kappa_array(lam, dist.mean_lambda)
        factors = [weight[:, None] * e for e in embedded]
        prod = _fold(factors, association)
        rho = np.ones(size) if dist.degenerate else kappa_array(lam, dist.mean_lambda) ** m
        return prod.sum(axis=0), float(rho.sum())

    parts = _mc.run_blocks(n, seed, block, stream=stream, workers=workers)
    total = np.zeros(8)
    rho_total = 0.0
    for s, r in parts:
        total = total + s
        rho_total += r
    mean = total / n
    rho_integral = rho_total / n
    return LRExpectation(
        E=float(mean[0]),
        first_term=reference.f * rho_integral,
        second_term_magnitude=float(np.linalg.norm(mean[1:])),
        rho_integral=rho_integral,
        f=reference.f,
        g=reference.g,
        n=n,
        association=association,
        mean_product=tuple(float(x) for x in mean),
    )
