import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parsphere import octonion as oc
from parsphere.errors import DomainError
from parsphere.octonion import ONE, Octonion, associator, oct_inv, oct_mul


def _mod7_table():
    # Independent generator: e_i e_{i+1} = e_{i+3} with indices mod 7 in 1..7,
    # closed under cyclic shifts, antisymmetric under swaps.
    t = np.zeros((8, 8, 8))
    for i in range(8):
        t[0, i, i] = t[i, 0, i] = 1
    for i in range(1, 8):
        t[i, i, 0] = -1
    wrap = lambda k: (k - 1) % 7 + 1  # noqa: E731
    for i in range(1, 8):
        x, y, z = i, wrap(i + 1), wrap(i + 3)
        for p, q, r in ((x, y, z), (y, z, x), (z, x, y)):
            t[p, q, r] = 1
            t[q, p, r] = -1
    return t


def test_table_matches_index_arithmetic_oracle():
    assert np.array_equal(oc.PRODUCT_TABLE, _mod7_table())


def test_fano_triples():
    fano = oc.fano_table_from_J()
    assert fano.triples[0] == (1, 2, 4)
    assert fano.triples[-1] == (7, 1, 3)
    assert len(fano.triples) == 7


def test_fano_rejects_bad_tables():
    with pytest.raises(DomainError):
        oc.FanoTable(((1, 2, 4),) * 7)
    with pytest.raises(DomainError):
        oc.FanoTable(oc.FANO.triples[:6])
    with pytest.raises(DomainError):
        oc.parse_trivector_sum("e1e2 + e3e4e5")


def test_basic_products():
    e = [Octonion.unit(i) for i in range(8)]
    assert e[1] * e[2] == e[4]
    assert e[2] * e[1] == -e[4]
    # hand-read entries of the table
    assert e[1] * e[3] == e[7]
    assert e[3] * e[4] == e[6]
    assert e[5] * e[1] == -e[6]
    for i in range(1, 8):
        assert e[i] * e[i] == -ONE


def test_identity(rng):
    for _ in range(50):
        x = Octonion(rng.uniform(-1, 1, 8))
        assert oct_mul(ONE, x) == x
        assert oct_mul(x, ONE) == x


def test_inverse():
    assert oct_inv(ONE) == ONE
    e1 = Octonion.unit(1)
    assert oct_inv(e1) == -e1
    assert (oct_inv(e1) * e1).allclose(ONE)
    with pytest.raises(DomainError, match="division by zero octonion"):
        oct_inv(Octonion([0] * 8))


def test_division_round_trip(rng):
    for _ in range(1000):
        x, y = Octonion(rng.uniform(-1, 1, 8)), Octonion(rng.uniform(-1, 1, 8))
        assert ((x * y) * oct_inv(y)).allclose(x, atol=1e-10)


def test_conj_and_norm(rng):
    x = Octonion(rng.uniform(-1, 1, 8))
    assert (x * x.conj()).allclose(x.norm() ** 2)
    assert x.conj().conj() == x


def test_associator_fixture_and_zero_cases(rng):
    e = [Octonion.unit(i) for i in range(8)]
    a = associator(e[1], e[2], e[3])
    assert a.norm() > 0
    assert a == Octonion([0, 0, 0, 0, 0, 0, -2, 0])
    y, z = Octonion(rng.uniform(-1, 1, 8)), Octonion(rng.uniform(-1, 1, 8))
    assert associator(ONE, y, z).allclose(0.0)


def test_quaternion_subalgebra_is_associative_and_closed():
    from parsphere.checks import quaternion_associator_residual

    assert quaternion_associator_residual() == 0.0
    units = [Octonion.unit(i) for i in oc.QUATERNION_SLOTS]
    outside = [i for i in range(8) if i not in oc.QUATERNION_SLOTS]
    for x in units:
        for y in units:
            assert not np.any((x * y).coefficients[outside])


_oct = st.lists(st.floats(-10, 10, allow_nan=False), min_size=8, max_size=8).map(Octonion)


@settings(max_examples=300, deadline=None)
@given(_oct, _oct)
def test_norm_multiplicative(x, y):
    assert (x * y).norm() == pytest.approx(x.norm() * y.norm(), rel=1e-12, abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(_oct, _oct)
def test_alternative(x, y):
    scale = 1e-12 * (1 + x.norm() ** 2 * y.norm() + x.norm() * y.norm() ** 2)
    assert associator(x, x, y).allclose(0.0, atol=scale)
    assert associator(x, y, y).allclose(0.0, atol=scale)


def test_hurwitz_examples(rng):
    assert oc.hurwitz_check(1, [3], [4]) == (144.0, 144.0)
    x1, x2, y1, y2 = 1.5, -2.0, 0.25, 3.0
    z = oc.compose(2, [x1, x2], [y1, y2])
    assert np.allclose(z, [x1 * y1 - x2 * y2, x1 * y2 + x2 * y1], atol=1e-15)
    lhs, rhs = oc.hurwitz_check(8, rng.uniform(-1, 1, 8), rng.uniform(-1, 1, 8))
    assert abs(lhs - rhs) <= 1e-12


def test_hurwitz_quaternion_matches_hamilton(rng):
    # {1, e1, e2, e4} with e1 e2 = e4 is Hamilton's (1, i, j, k)
    x, y = rng.uniform(-1, 1, 4), rng.uniform(-1, 1, 4)
    a1, b1, c1, d1 = x
    a2, b2, c2, d2 = y
    hamilton = [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
    assert np.allclose(oc.compose(4, x, y), hamilton, atol=1e-15)


@pytest.mark.parametrize("n", [0, 3, 5, 16])
def test_hurwitz_unsupported_dimension(n):
    with pytest.raises(DomainError, match="unsupported dimension"):
        oc.hurwitz_check(n, [1] * n, [1] * n)


def test_cross7(rng):
    e = np.eye(7)
    assert np.array_equal(oc.cross7(e[0], e[1]), e[3])
    u, v = rng.normal(size=7), rng.normal(size=7)
    assert np.allclose(oc.cross7(u, u), 0)
    w = oc.cross7(u, v)
    assert abs(w @ u) < 1e-12 and abs(w @ v) < 1e-12
    mag2 = (u @ u) * (v @ v) - (u @ v) ** 2
    assert math.isclose(w @ w, mag2, rel_tol=1e-12)
