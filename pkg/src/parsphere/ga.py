"""Dense Cl(3,0) multivectors.

Coefficients are stored in the fixed graded order

    1, e_x, e_y, e_z, e_x^e_y, e_y^e_z, e_z^e_x, e_x^e_y^e_z

and the geometric product is a precomputed 8x8x8 structure tensor, so the
same code path serves single values and batches of shape ``(..., 8)``.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from parsphere.errors import DomainError

BLADES = ("1", "e_x", "e_y", "e_z", "e_x^e_y", "e_y^e_z", "e_z^e_x", "e_x^e_y^e_z")
GRADES = (0, 1, 1, 1, 2, 2, 2, 3)

IDENTITY_TOL = 1e-12
UNIT_TOL = 1e-9

# (bitmask over {x,y,z}, sign of the stored blade relative to ascending order)
_BLADE_MASKS = (
    (0b000, 1),
    (0b001, 1),
    (0b010, 1),
    (0b100, 1),
    (0b011, 1),
    (0b110, 1),
    (0b101, -1),  # e_z^e_x = -e_x^e_z
    (0b111, 1),
)


def _reorder_sign(a: int, b: int) -> int:
    swaps = 0
    a >>= 1
    while a:
        swaps += bin(a & b).count("1")
        a >>= 1
    return -1 if swaps & 1 else 1


def _build_table() -> np.ndarray:
    index = {mask: (k, s) for k, (mask, s) in enumerate(_BLADE_MASKS)}
    table = np.zeros((8, 8, 8))
    for i, (ma, sa) in enumerate(_BLADE_MASKS):
        for j, (mb, sb) in enumerate(_BLADE_MASKS):
            k, sk = index[ma ^ mb]
            # Euclidean signature: every basis vector squares to +1
            table[i, j, k] = sa * sb * sk * _reorder_sign(ma, mb)
    table.setflags(write=False)
    return table


PRODUCT_TABLE = _build_table()
_FLAT_TABLE = PRODUCT_TABLE.reshape(64, 8)
_GRADE_ARR = np.array(GRADES)


def gp_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Geometric product of coefficient arrays, broadcasting over leading axes."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    outer = x[..., :, None] * y[..., None, :]
    return outer.reshape(x.shape[:-1] + (64,)) @ _FLAT_TABLE


def grade_array(x: np.ndarray, k: int) -> np.ndarray:
    return np.where(_GRADE_ARR == k, x, 0.0)


class Multivector:
    """Immutable element of Cl(3,0)."""

    __slots__ = ("_c",)

    def __init__(self, coefficients: Iterable[float]):
        c = np.array(coefficients, dtype=float).reshape(-1)
        if c.shape != (8,):
            raise DomainError(f"a multivector needs 8 coefficients, got {c.shape[0]}")
        c.setflags(write=False)
        self._c = c

    @classmethod
    def scalar(cls, s: float) -> "Multivector":
        return cls([s, 0, 0, 0, 0, 0, 0, 0])

    @classmethod
    def vector(cls, v: Sequence[float]) -> "Multivector":
        x, y, z = _as_vec3(v)
        return cls([0, x, y, z, 0, 0, 0, 0])

    @property
    def coefficients(self) -> np.ndarray:
        return self._c

    def __getitem__(self, blade: int | str) -> float:
        if isinstance(blade, str):
            blade = BLADES.index(blade)
        return float(self._c[blade])

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Multivector(self._c + other._c)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Multivector(self._c - other._c)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Multivector(other._c - self._c)

    def __neg__(self) -> "Multivector":
        return Multivector(-self._c)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return Multivector(gp_array(self._c, other._c))
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self._c * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self._c * float(other))
        return NotImplemented

    def __truediv__(self, s: float) -> "Multivector":
        return Multivector(self._c / float(s))

    def grade(self, k: int) -> "Multivector":
        return grade(self, k)

    def reverse(self) -> "Multivector":
        # reversion flips the sign of grades 2 and 3
        return Multivector(self._c * np.array([1, 1, 1, 1, -1, -1, -1, -1]))

    def norm(self) -> float:
        return float(np.linalg.norm(self._c))

    def scalar_part(self) -> float:
        return float(self._c[0])

    def inverse(self) -> "Multivector":
        """Inverse for versors (scalar + bivector, vectors, ...) via the reverse."""
        rev = self.reverse()
        n = self * rev
        if np.max(np.abs(n._c[1:])) > 1e-12 or abs(n._c[0]) < 1e-300:
            raise DomainError("multivector has no versor inverse")
        return rev / n._c[0]

    def allclose(self, other: "Multivector | float", atol: float = IDENTITY_TOL) -> bool:
        return bool(np.max(np.abs((self - other)._c)) <= atol)

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return bool(np.array_equal(self._c, other._c))

    def __hash__(self) -> int:
        return hash(self._c.tobytes())

    def __repr__(self) -> str:
        terms = [f"{c:+.6g}*{b}" if b != "1" else f"{c:+.6g}" for c, b in zip(self._c, BLADES) if c != 0]
        return "Multivector(" + (" ".join(terms) if terms else "0") + ")"


def _coerce(x) -> Multivector | None:
    if isinstance(x, Multivector):
        return x
    if isinstance(x, (int, float, np.floating, np.integer)):
        return Multivector.scalar(float(x))
    return None


def _as_vec3(v: Sequence[float]) -> np.ndarray:
    arr = np.asarray(v, dtype=float).reshape(-1)
    if arr.shape != (3,):
        raise DomainError(f"expected a 3-vector, got shape {arr.shape}")
    return arr


def as_unit(v: Sequence[float], tol: float = UNIT_TOL, name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=float).reshape(-1)
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > tol:
        raise DomainError(f"{name} must be a unit vector (|{name}| = {norm!r})")
    return arr


def check_orientation(lam: int) -> int:
    if lam not in (-1, 1):
        raise DomainError(f"orientation must be +1 or -1, got {lam!r}")
    return int(lam)


E0 = Multivector.scalar(1.0)
EX = Multivector([0, 1, 0, 0, 0, 0, 0, 0])
EY = Multivector([0, 0, 1, 0, 0, 0, 0, 0])
EZ = Multivector([0, 0, 0, 1, 0, 0, 0, 0])
I = Multivector([0, 0, 0, 0, 0, 0, 0, 1])
BASIS_VECTORS = (EX, EY, EZ)


def gp(m1: Multivector, m2: Multivector) -> Multivector:
    return m1 * m2


def grade(m: Multivector, k: int) -> Multivector:
    if k not in (0, 1, 2, 3):
        raise DomainError(f"grade must be 0..3, got {k}")
    return Multivector(grade_array(m.coefficients, k))


def inner(a: Sequence[float], b: Sequence[float]) -> float:
    """Symmetric part of the vector product, (ab + ba)/2."""
    va, vb = Multivector.vector(a), Multivector.vector(b)
    return ((va * vb + vb * va) * 0.5).scalar_part()


def outer(a: Sequence[float], b: Sequence[float]) -> Multivector:
    """Antisymmetric part of the vector product, (ab - ba)/2, a pure bivector."""
    va, vb = Multivector.vector(a), Multivector.vector(b)
    return (va * vb - vb * va) * 0.5


def dual_bivector(n: Sequence[float]) -> Multivector:
    """I n: the bivector whose plane is orthogonal to n (no unit check)."""
    return I * Multivector.vector(n)


def bivector_of(n: Sequence[float], lam: int) -> Multivector:
    """mu . n with mu = lam I, i.e. lam (n_x e_y^e_z + n_y e_z^e_x + n_z e_x^e_y)."""
    lam = check_orientation(lam)
    nx, ny, nz = as_unit(n, name="n")
    return Multivector([0, 0, 0, 0, lam * nz, lam * nx, lam * ny, 0])


def bivector_basis(j: int) -> Multivector:
    """beta_j = I e_j for j in 0, 1, 2 (x, y, z)."""
    return I * BASIS_VECTORS[j]


def rotor_exp(c: Sequence[float], theta: float) -> Multivector:
    """exp((I c) theta) = cos(theta) + (I c) sin(theta) for unit c."""
    c = as_unit(c, name="c")
    return Multivector.scalar(math.cos(theta)) + dual_bivector(c) * math.sin(theta)


def bivector_coefficients(n: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Batched ``bivector_of``: rows of lam * (I n) for lam of shape (k,) and n of shape (3,)."""
    out = np.zeros(lam.shape + (8,))
    out[..., 4] = lam * n[2]
    out[..., 5] = lam * n[0]
    out[..., 6] = lam * n[1]
    return out
