"""Acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line, printed in the terminal summary under
"acceptance criteria" (run with ``-s`` to also see them inline).
"""

import math
import time

import numpy as np
import pytest

from parsphere import checks, epr, ga, mobius, octonion, s7
from parsphere.cli import run as cli_run
from parsphere.octonion import Octonion, associator, oct_inv, oct_mul_array
from parsphere.stats import LambdaDistribution

from conftest import record_criterion, unit_vectors

pytestmark = pytest.mark.acceptance

N = 100_000
TOL_MC = 5 / math.sqrt(N)
GRID_DEG = np.arange(0, 181, 10)
SEED = 20240611


def _report(number, title, passed, detail):
    record_criterion(number, title, passed, detail)
    print(f"\ncriterion {number} [{'PASS' if passed else 'FAIL'}] {title}: {detail}")
    assert passed, detail


def test_criterion_01_bivector_algebra():
    t0 = time.perf_counter()
    residual = checks.bivector_algebra_residual()
    elapsed = time.perf_counter() - t0
    _report(1, "bivector algebra", residual <= 1e-12 and elapsed < 1.0, f"max residual {residual:.2e}, {elapsed:.3f} s")


def test_criterion_02_sphere_identity():
    rng = np.random.default_rng(SEED)
    a_s, b_s = unit_vectors(rng, 1000), unit_vectors(rng, 1000)
    worst = {}
    for lam in (1, -1):
        w = 0.0
        for a, b in zip(a_s, b_s):
            lhs = ga.bivector_of(a, lam) * ga.bivector_of(b, lam)
            rhs = ga.Multivector.scalar(-float(a @ b)) - ga.dual_bivector(np.cross(a, b)) * lam
            w = max(w, float(np.max(np.abs((lhs - rhs).coefficients))))
        worst[lam] = w
    passed = max(worst.values()) <= 1e-12
    _report(2, "(mu.a)(mu.b) = -a.b - mu.(a x b)", passed, f"residual lambda=+1 {worst[1]:.2e}, lambda=-1 {worst[-1]:.2e}")


def test_criterion_03_epr_monte_carlo():
    a = np.array([1.0, 0.0, 0.0])
    t0 = time.perf_counter()
    errs = []
    for k, theta in enumerate(GRID_DEG):
        rec = epr.simulate(a, epr.direction_in_plane(theta), n=N, seed=SEED, stream=k)
        errs.append(abs(rec.estimate + math.cos(math.radians(theta))))
    elapsed = time.perf_counter() - t0
    passed = max(errs) <= TOL_MC and elapsed < 10.0
    _report(3, "EPR standard-score Monte Carlo", passed, f"max |E + cos| {max(errs):.2e} (tol {TOL_MC:.2e}), {elapsed:.2f} s")


def test_criterion_04_perfect_correlations():
    rng = np.random.default_rng(SEED)
    same = [epr.correlation_exact(a, a) for a in unit_vectors(rng, 100)] + [epr.correlation_exact([1, 0, 0], [1, 0, 0])]
    anti = [epr.correlation_exact(a, -a) for a in unit_vectors(rng, 100)] + [epr.correlation_exact([1, 0, 0], [-1, 0, 0])]
    exact_axis = epr.correlation_exact([0, 0, 1], [0, 0, 1]) == -1.0 and epr.correlation_exact([0, 0, 1], [0, 0, -1]) == 1.0
    dev = max(max(abs(x + 1) for x in same), max(abs(x - 1) for x in anti))
    passed = exact_axis and dev <= 1e-15
    _report(4, "perfect correlations", passed, f"basis axes exact: {exact_axis}; max deviation on random unit vectors {dev:.1e}")


def test_criterion_05_chsh():
    rng = np.random.default_rng(SEED)
    violations, worst = 0, 0.0
    for _ in range(10_000):
        q = epr.ChshQuadruple(*unit_vectors(rng, 4))
        gap = epr.chsh_value(q) - epr.chsh_bound(q)
        if gap > 1e-12:
            violations += 1
            worst = max(worst, gap)
    t0 = time.perf_counter()
    quad, value = epr.chsh_maximize(20, seed=SEED)
    elapsed = time.perf_counter() - t0
    max_ok = abs(value - epr.TSIRELSON) <= 1e-6
    passed = violations == 0 and max_ok and elapsed < 5.0
    detail = (
        f"bound < value on {violations}/10000 quadruples (worst excess {worst:.3f}); "
        f"maximum {value:.10f} (gap {abs(value - epr.TSIRELSON):.1e}), {elapsed:.2f} s; "
        f"bound at the maximizer {epr.chsh_bound(quad):.2e}"
    )
    _report(5, "CHSH bound and maximization", passed, detail)


def test_criterion_06_hurwitz():
    worst = {n: checks.hurwitz_residual(n, pairs=10_000, seed=SEED) for n in (1, 2, 4, 8)}
    passed = max(worst.values()) <= 1e-12
    _report(6, "Hurwitz composition", passed, ", ".join(f"n={n} {r:.1e}" for n, r in worst.items()))


def test_criterion_07_octonion_structure():
    rng = np.random.default_rng(SEED)
    x, y = rng.uniform(-1, 1, (10_000, 8)), rng.uniform(-1, 1, (10_000, 8))
    norm_res = float(np.max(np.abs(np.linalg.norm(oct_mul_array(x, y), axis=1) - np.linalg.norm(x, axis=1) * np.linalg.norm(y, axis=1))))
    div_res = 0.0
    for xi, yi in zip(x[:10_000], y[:10_000]):
        X, Y = Octonion(xi), Octonion(yi)
        div_res = max(div_res, float(np.max(np.abs(((X * Y) * oct_inv(Y)).coefficients - xi))))
    quat_res = checks.quaternion_associator_residual()
    units = [Octonion.unit(i) for i in range(1, 8)]
    nonzero = any(associator(a, b, c).norm() > 0 for a in units for b in units for c in units)
    alt = 0.0
    for xi, yi in zip(x[:1000], y[:1000]):
        X, Y = Octonion(xi), Octonion(yi)
        alt = max(alt, associator(X, X, Y).norm(), associator(X, Y, Y).norm())
    passed = norm_res <= 1e-12 and div_res <= 1e-10 and quat_res == 0.0 and nonzero and alt <= 1e-12
    detail = (
        f"norm {norm_res:.1e}, division {div_res:.1e}, quaternion associator {quat_res:.1e}, "
        f"nonzero basis associator {nonzero}, alternativity {alt:.1e}"
    )
    _report(7, "octonion structure", passed, detail)


def _grid_pairs():
    a = np.array([1.0, 0.0, 0.0])
    return [(a, epr.direction_in_plane(t)) for t in GRID_DEG]


def test_criterion_08_s7_decomposition():
    rng = np.random.default_rng(SEED)
    schemes = ["axis"] + [f"fiber({k})" for k in range(1, 8)]
    norm_res = 0.0
    for count in range(2, 7):
        for _ in range(500):
            scheme = schemes[rng.integers(len(schemes))]
            pts = [s7.standard_score_7(a, int(l), scheme) for a, l in zip(unit_vectors(rng, count), rng.choice([-1, 1], count))]
            for assoc in (s7.LEFT, s7.RIGHT):
                norm_res = max(norm_res, s7.product_decompose(pts, assoc).norm_residual)
    errs = []
    for k, (a, b) in enumerate(_grid_pairs()):
        r = s7.expectation_LR([a, b], LambdaDistribution.fair(), n=N, seed=SEED, scheme="fiber(1)", stream=k)
        errs.append(abs(r.E + float(a @ b)))
    passed = norm_res <= 1e-10 and max(errs) <= TOL_MC
    _report(8, "S7 decomposition", passed, f"max |f^2+g^2-1| {norm_res:.1e}; max |E + a.b| {max(errs):.2e} (tol {TOL_MC:.2e})")


def test_criterion_09_second_term():
    mags = []
    for k, (a, b) in enumerate(_grid_pairs()):
        r = s7.expectation_LR([a, b], LambdaDistribution.fair(), n=N, seed=SEED, scheme="fiber(1)", stream=k)
        mags.append(r.second_term_magnitude)
    worst = int(np.argmax(mags))
    passed = max(mags) <= TOL_MC
    detail = (
        f"two-point fiber(1) pairs on the 0-180 grid: max second_term_magnitude {mags[worst]:.4f} "
        f"at {GRID_DEG[worst]} deg (tol {TOL_MC:.2e}); {sum(m > TOL_MC for m in mags)}/19 angles exceed"
    )
    _report(9, "vanishing second term", passed, detail)


def test_criterion_10_mobius():
    etas = np.radians(GRID_DEG)
    closed = max(abs(mobius.mobius_correlation_exact(mobius.eta_to_beta(e)) + math.cos(e)) for e in etas)
    endpoints = (
        mobius.mobius_correlation_exact(0.0) == -1.0
        and mobius.mobius_correlation_exact(math.pi) == 0.0
        and mobius.mobius_correlation_exact(2 * math.pi) == 1.0
    )
    mc = max(abs(mobius.simulate_mobius(e, N, SEED, stream=k).estimate + math.cos(e)) for k, e in enumerate(etas))
    passed = closed <= 1e-12 and endpoints and mc <= TOL_MC
    _report(10, "Moebius model", passed, f"closed forms {closed:.1e}, endpoints exact {endpoints}, Monte Carlo {mc:.2e} (tol {TOL_MC:.2e})")


def test_criterion_11_determinism(tmp_path):
    outputs = []
    for workers in (1, 4):
        path = tmp_path / f"epr_{workers}.csv"
        code = cli_run(["simulate-epr", "--seed", "42", "--n", str(N), "--workers", str(workers), "-o", str(path)])
        assert code == 0
        outputs.append(path.read_bytes())
    passed = outputs[0] == outputs[1] and len(outputs[0]) > 0
    _report(11, "determinism across worker counts", passed, f"workers 1 vs 4 byte-identical: {passed} ({len(outputs[0])} bytes)")
