"""Octonions generated from the seven-term trivector J.

Each term ``e_i e_j e_k`` of J is read as the rule ``e_i e_j = e_k``, closed
under cyclic shifts and antisymmetric under swaps. Quaternions are not a
separate type: they are the subalgebra on {1, e1, e2, e4}.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from parsphere.errors import DomainError

J_EXPRESSION = "e1e2e4 + e2e3e5 + e3e4e6 + e4e5e7 + e5e6e1 + e6e7e2 + e7e1e3"

QUATERNION_SLOTS = (0, 1, 2, 4)
COMPLEX_SLOTS = (0, 1)


@dataclass(frozen=True)
class FanoTable:
    triples: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if len(self.triples) != 7:
            raise DomainError(f"a Fano table has 7 triples, got {len(self.triples)}")
        seen: dict[frozenset, tuple] = {}
        for t in self.triples:
            if len(set(t)) != 3 or not all(1 <= i <= 7 for i in t):
                raise DomainError(f"bad triple {t}")
            for p in (frozenset(t[:2]), frozenset(t[1:]), frozenset((t[0], t[2]))):
                if p in seen:
                    raise DomainError(f"pair {sorted(p)} appears in {seen[p]} and {t}")
                seen[p] = t
        if len(seen) != 21:
            raise DomainError("triples do not cover every pair of imaginary units")

    def rules(self) -> Iterable[tuple[int, int, int]]:
        """All (i, j, k) with e_i e_j = +e_k."""
        for i, j, k in self.triples:
            yield i, j, k
            yield j, k, i
            yield k, i, j


def parse_trivector_sum(expr: str) -> tuple[tuple[int, int, int], ...]:
    triples = []
    for term in expr.split("+"):
        idx = tuple(int(d) for d in re.findall(r"e(\d)", term))
        if len(idx) != 3:
            raise DomainError(f"term {term.strip()!r} is not a product of three units")
        triples.append(idx)
    return tuple(triples)


def fano_table_from_J(expr: str = J_EXPRESSION) -> FanoTable:
    return FanoTable(parse_trivector_sum(expr))


def _build_table(fano: FanoTable) -> np.ndarray:
    t = np.zeros((8, 8, 8))
    for i in range(8):
        t[0, i, i] = 1.0
        t[i, 0, i] = 1.0
    for i in range(1, 8):
        t[i, i, 0] = -1.0
    for i, j, k in fano.rules():
        t[i, j, k] = 1.0
        t[j, i, k] = -1.0
    t.setflags(write=False)
    return t


FANO = fano_table_from_J()
PRODUCT_TABLE = _build_table(FANO)
_FLAT_TABLE = PRODUCT_TABLE.reshape(64, 8)
_CONJ = np.array([1.0, -1, -1, -1, -1, -1, -1, -1])


def oct_mul_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    outer = x[..., :, None] * y[..., None, :]
    return outer.reshape(x.shape[:-1] + (64,)) @ _FLAT_TABLE


class Octonion:
    """Immutable octonion over the basis {1, e1, ..., e7}."""

    __slots__ = ("_c",)

    def __init__(self, coefficients: Iterable[float]):
        c = np.array(coefficients, dtype=float).reshape(-1)
        if c.shape != (8,):
            raise DomainError(f"an octonion needs 8 coefficients, got {c.shape[0]}")
        c.setflags(write=False)
        self._c = c

    @classmethod
    def unit(cls, i: int) -> "Octonion":
        c = np.zeros(8)
        c[i] = 1.0
        return cls(c)

    @classmethod
    def imaginary(cls, v: Sequence[float]) -> "Octonion":
        v = np.asarray(v, dtype=float).reshape(-1)
        if v.shape != (7,):
            raise DomainError(f"expected a 7-vector, got shape {v.shape}")
        return cls(np.concatenate(([0.0], v)))

    @property
    def coefficients(self) -> np.ndarray:
        return self._c

    @property
    def real(self) -> float:
        return float(self._c[0])

    @property
    def imag(self) -> np.ndarray:
        return self._c[1:]

    def __getitem__(self, i: int) -> float:
        return float(self._c[i])

    def __add__(self, other: "Octonion") -> "Octonion":
        return Octonion(self._c + _coerce(other)._c)

    __radd__ = __add__

    def __sub__(self, other: "Octonion") -> "Octonion":
        return Octonion(self._c - _coerce(other)._c)

    def __rsub__(self, other) -> "Octonion":
        return Octonion(_coerce(other)._c - self._c)

    def __neg__(self) -> "Octonion":
        return Octonion(-self._c)

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return Octonion(oct_mul_array(self._c, other._c))
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Octonion(self._c * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Octonion(self._c * float(other))
        return NotImplemented

    def __truediv__(self, s: float) -> "Octonion":
        return Octonion(self._c / float(s))

    def conj(self) -> "Octonion":
        return oct_conj(self)

    def norm(self) -> float:
        return oct_norm(self)

    def allclose(self, other, atol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self._c - _coerce(other)._c)) <= atol)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (Octonion, int, float)):
            return NotImplemented
        return bool(np.array_equal(self._c, _coerce(other)._c))

    def __hash__(self) -> int:
        return hash(self._c.tobytes())

    def __repr__(self) -> str:
        terms = [f"{c:+.6g}" + (f"*e{i}" if i else "") for i, c in enumerate(self._c) if c != 0]
        return "Octonion(" + (" ".join(terms) if terms else "0") + ")"


def _coerce(x) -> Octonion:
    if isinstance(x, Octonion):
        return x
    if isinstance(x, (int, float, np.floating, np.integer)):
        return Octonion([float(x), 0, 0, 0, 0, 0, 0, 0])
    raise TypeError(f"cannot use {type(x).__name__} as an octonion")


ONE = Octonion.unit(0)


def oct_mul(x: Octonion, y: Octonion) -> Octonion:
    return x * y


def oct_conj(x: Octonion) -> Octonion:
    return Octonion(x.coefficients * _CONJ)


def oct_norm(x: Octonion) -> float:
    return float(np.linalg.norm(x.coefficients))


def oct_inv(x: Octonion) -> Octonion:
    n2 = float(x.coefficients @ x.coefficients)
    if n2 == 0.0:
        raise DomainError("division by zero octonion")
    return oct_conj(x) / n2


def associator(x: Octonion, y: Octonion, z: Octonion) -> Octonion:
    return (x * y) * z - x * (y * z)


def cross7(u: Sequence[float], v: Sequence[float]) -> np.ndarray:
    """Seven-dimensional cross product: the imaginary part of u v."""
    return (Octonion.imaginary(u) * Octonion.imaginary(v)).imag.copy()


def _compose(n: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if n == 1:
        return x * y
    slots = {2: COMPLEX_SLOTS, 4: QUATERNION_SLOTS, 8: tuple(range(8))}[n]
    ox, oy = np.zeros(8), np.zeros(8)
    ox[list(slots)] = x
    oy[list(slots)] = y
    return oct_mul_array(ox, oy)[list(slots)]


def hurwitz_check(n: int, x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Both sides of (sum x_i^2)(sum y_i^2) = sum z_i^2 with z = x * y in dimension n.

    Dimensions 2 and 4 use the subalgebras {1, e1} and {1, e1, e2, e4} of the
    octonions, so all four algebras share one multiplication table.
    """
    if n not in (1, 2, 4, 8):
        raise DomainError(f"unsupported dimension {n}: no composition algebra of that size")
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.shape != (n,) or y.shape != (n,):
        raise DomainError(f"both inputs must have {n} components")
    z = _compose(n, x, y)
    return float((x @ x) * (y @ y)), float(z @ z)


def compose(n: int, x: Sequence[float], y: Sequence[float]) -> np.ndarray:
    """The product z = x * y used by ``hurwitz_check``."""
    if n not in (1, 2, 4, 8):
        raise DomainError(f"unsupported dimension {n}: no composition algebra of that size")
    return _compose(n, np.asarray(x, dtype=float).reshape(n), np.asarray(y, dtype=float).reshape(n))
