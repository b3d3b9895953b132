"""Exit criteria of the build, one test per criterion at its stated tolerance."""

import itertools
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from cartan_spectra.catalog import domain
from cartan_spectra.quadrature import jacobi_rule, radial_density_integral
from cartan_spectra.special import log_beta
from cartan_spectra.spectrum import eigenvalue, enumerate_signatures, rectangular_denominator_check
from cartan_spectra.symbol import builtin_symbol, check_symmetric, parse_symbol
from cartan_spectra.verify import ball2_block, disk_diag, disk_symbols, monte_carlo_offdiag_smoke, MC_PAIRS

pytestmark = pytest.mark.acceptance

FAMILY_INSTANCES = [
    "typeI:1,2", "typeI:2,3", "typeII:4", "typeII:5", "typeIII:2", "typeIII:3", "typeIV:4", "typeV", "typeVI",
]


def test_1_constant_symbol_identity(criterion):
    start = time.perf_counter()
    worst = 0.0
    for spec in FAMILY_INSTANCES:
        d = domain(spec)
        one = builtin_symbol("const", 1, d.r)
        for alpha in enumerate_signatures(d.r, 3):
            worst = max(worst, abs(eigenvalue(d, d.p + 1.5, one, alpha, 32).value - 1))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-11 and elapsed < 30
    criterion(1, ok, f"max |c_alpha - 1| = {worst:.2e} (tol 1e-11), {elapsed:.1f}s (< 30s)")
    assert ok


def test_2_catalog_identities(criterion):
    specs = FAMILY_INSTANCES + ["typeI:3,7", "typeII:9", "typeIV:10"]
    bad = []
    for spec in specs:
        d = domain(spec)
        if d.n != d.r + d.r * (d.r - 1) * d.a // 2 + d.r * d.b or d.p != 2 + (d.r - 1) * d.a + d.b:
            bad.append(spec)
        if d.n + d.n_tube != d.p * d.r:
            bad.append(spec)
    errata = bool(domain("typeIV:10").errata) and bool(domain("typeVI").errata)
    ok = not bad and errata
    criterion(2, ok, f"{len(specs)} instances, identity failures {bad or 'none'}, errata present: {errata}")
    assert ok


def test_3_selberg_equivalence(criterion):
    start = time.perf_counter()
    worst, where = 0.0, None
    for spec in ["typeIII:2", "typeIII:3", "typeI:2,2", "typeI:2,4", "typeIV:5", "typeV", "typeVI"]:
        d = domain(spec)
        N = 40 if spec == "typeVI" else 32
        for m in (0, 1, 2, 4):
            for lam in (d.p + 0.5, d.p + 3):
                err = rectangular_denominator_check(d, lam, m, N)
                if err > worst:
                    worst, where = err, (spec, m, lam)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 120
    criterion(3, ok, f"max relative error {worst:.2e} at {where} (tol 1e-9), {elapsed:.1f}s (< 120s)")
    assert ok


def test_4_rank_one_closed_form(criterion):
    worst = 0.0
    for spec in ("typeI:1,1", "typeI:1,2"):
        d = domain(spec)
        for s in (1, 2):
            psi = builtin_symbol("det_power", s, 1)
            for lam in (d.p + 0.5, d.p + 2):
                mu1 = lam - d.p + 1
                for k in range(11):
                    ref = math.exp(log_beta(k + d.b + 1 + s, mu1) - log_beta(k + d.b + 1, mu1))
                    got = eigenvalue(d, lam, psi, (k,)).value
                    worst = max(worst, abs(got - ref) / ref)
    ok = worst <= 1e-11
    criterion(4, ok, f"max relative deviation from Beta ratio {worst:.2e} (tol 1e-11)")
    assert ok


def test_5_disk_diagonality(criterion):
    start = time.perf_counter()
    d = domain("typeI:1,1")
    details, ok = [], True
    for psi, tol in disk_symbols():
        worst = 0.0
        for lam in (2.0, 3.5):
            oracle = disk_diag(lam, psi, 10)
            for k in range(11):
                worst = max(worst, abs(oracle[k] - eigenvalue(d, lam, psi, (k,)).value))
        ok &= worst <= tol
        details.append(f"{psi.name} {worst:.1e}<={tol:.0e}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 10
    criterion(5, ok, "; ".join(details) + f", {elapsed:.1f}s (< 10s)")
    assert ok


def test_6_ball_diagonality(criterion):
    start = time.perf_counter()
    symbols = [builtin_symbol("const", 1, 1), parse_symbol("x1", 1), parse_symbol("x1^2", 1)]
    spread = vs_formula = 0.0
    for lam in (3.5, 4.0, 6.0):
        for psi in symbols:
            for degree in range(5):
                rep = ball2_block(lam, psi, degree, 64)
                spread = max(spread, rep.diag_spread)
                vs_formula = max(vs_formula, rep.diag_vs_formula)
    mc_sigma = 0.0
    mc_cases = [
        (builtin_symbol("const", 1, 1), MC_PAIRS[0]),
        (parse_symbol("x1", 1), MC_PAIRS[1]),
        (builtin_symbol("ball_indicator", 0.5, 1), MC_PAIRS[2]),
    ]
    for lam, (psi, pair) in itertools.product((3.5, 4.0, 6.0), mc_cases):
        rep = monte_carlo_offdiag_smoke(lam, psi, [pair], samples=1_000_000, seed=0)
        mc_sigma = max(mc_sigma, rep.max_sigma)
    elapsed = time.perf_counter() - start
    ok = spread <= 1e-8 and vs_formula <= 1e-6 and mc_sigma <= 3 and elapsed < 120
    criterion(
        6,
        ok,
        f"diag_spread {spread:.1e} (<=1e-8), diag_vs_formula {vs_formula:.1e} (<=1e-6), "
        f"MC off-diagonal {mc_sigma:.2f} sigma (<=3), {elapsed:.1f}s (< 120s)",
    )
    assert ok


SYMMETRIC_BASIS = ["1", "(x1+x2)", "x1*x2", "(x1^2+x2^2)", "(x1^3+x2^3)", "x1*x2*(x1+x2)"]


def _combine(coeffs):
    return " + ".join(f"({c:.17g})*{b}" for c, b in zip(coeffs, SYMMETRIC_BASIS))


def test_7_range_and_linearity(criterion):
    d = domain("typeIII:2")
    lam = 5.0
    rng = np.random.default_rng(2024)
    coeffs = rng.uniform(-1, 1, (20, len(SYMMETRIC_BASIS)))
    symbols = [(c, parse_symbol(_combine(c), 2)) for c in coeffs]
    grid = np.linspace(0, 1, 100)
    X = np.array(np.meshgrid(grid, grid)).reshape(2, -1)
    sigs = enumerate_signatures(2, 3)
    range_worst = -math.inf
    values = {}
    for idx, (_, psi) in enumerate(symbols):
        assert check_symmetric(psi)
        vals = psi(X)
        lo, hi = vals.min(), vals.max()
        for alpha in sigs:
            rec = eigenvalue(d, lam, psi, alpha, 24)
            values[idx, alpha] = rec.value
            excess = max(lo - rec.value, rec.value - hi) - (rec.err_estimate + 1e-9)
            range_worst = max(range_worst, excess)
    lin_worst = 0.0
    for i in range(0, 20, 2):
        s, t = rng.uniform(-2, 2, 2)
        (ca, _), (cb, _) = symbols[i], symbols[i + 1]
        combo = parse_symbol(_combine(s * ca + t * cb), 2)
        for alpha in sigs:
            got = eigenvalue(d, lam, combo, alpha, 24).value
            lin_worst = max(lin_worst, abs(got - (s * values[i, alpha] + t * values[i + 1, alpha])))
    ok = range_worst <= 0 and lin_worst <= 1e-11
    criterion(7, ok, f"range excess {range_worst:.2e} (<= 0 after tolerance), linearity {lin_worst:.1e} (<= 1e-11)")
    assert ok


def test_8_permutation_invariance(criterion):
    worst = 0.0
    cases = [("typeI:2,3", (2, 1)), ("typeVI", (3, 1, 0))]
    for spec, alpha in cases:
        d = domain(spec)
        xs = "+".join(f"x{j + 1}" for j in range(d.r))
        for psi in (parse_symbol(f"exp(-({xs}))", d.r), builtin_symbol("elementary", 2, d.r)):
            ref = radial_density_integral(d, d.p + 1, alpha, psi, 24)
            for perm in itertools.permutations(alpha):
                got = radial_density_integral(d, d.p + 1, perm, psi, 24)
                worst = max(worst, abs(got - ref) / abs(ref))
    ok = worst <= 1e-12
    criterion(8, ok, f"max relative change under permutation {worst:.1e} (tol 1e-12)")
    assert ok


def test_9_quadrature_exactness(criterion):
    worst_moment = worst_mass = 0.0
    exps = (0, 1.5, 4, -0.5)
    for N in (1, 2, 4, 8, 16, 32):
        for kappa, mu in itertools.product(exps, exps):
            rule = jacobi_rule(N, kappa, mu)
            mass = math.exp(log_beta(kappa + 1, mu + 1))
            worst_mass = max(worst_mass, abs(rule.weights.sum() / mass - 1))
            for k in range(2 * N):
                exact = math.exp(log_beta(kappa + k + 1, mu + 1))
                worst_moment = max(worst_moment, abs(np.dot(rule.weights, rule.nodes**k) / exact - 1))
    ok = worst_moment <= 1e-12 and worst_mass <= 1e-12
    criterion(9, ok, f"max moment error {worst_moment:.1e}, mass error {worst_mass:.1e} (tol 1e-12)")
    assert ok


def test_10_determinism(criterion, tmp_path):
    argv = [
        sys.executable, "-m", "cartan_spectra", "eigs", "--domain", "typeIII:3", "--lambda", "4.75",
        "--symbol", "exp(-(x1+x2+x3))", "--alpha-max", "2", "--nodes", "16", "--seed", "11",
    ]
    outputs = []
    for i, extra in enumerate(([], [], ["--threads", "4"])):
        path = tmp_path / f"run{i}.csv"
        subprocess.run(argv + extra + ["--out", str(path)], check=True)
        outputs.append(path.read_bytes())
    ok = len(set(outputs)) == 1 and len(outputs[0]) > 0
    criterion(10, ok, f"3 runs (1 threaded), byte-identical: {ok}, {len(outputs[0])} bytes")
    assert ok
