"""Operator-level cross-checks on the unit disk and the two-dimensional ball.

These routines never touch the rank reduction used by :mod:`spectrum`; they
integrate matrix elements of T_psi against monomials directly, with
quadrature code taken from SciPy rather than from :mod:`quadrature`.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy import integrate
from scipy.special import roots_jacobi

from .catalog import domain
from .special import log_beta
from .spectrum import eigenvalue, rectangular_denominator_check
from .symbol import RadialSymbol, builtin_symbol, parse_symbol


def _breakpoints(psi: RadialSymbol) -> list[float]:
    return [psi.support] if 0 < psi.support < 1 else []


def _scalar(psi):
    return lambda u: float(psi(np.array([[u]]))[0])


def disk_diag(lam: float, psi: RadialSymbol, k_max: int, N: int = 200) -> list[float]:
    """Diagonal of T_psi on the disk in the monomial basis z^k, k = 0..k_max.

    Entry k is ``int_0^1 rho^k (1-rho)^(lam-2) psi(rho) d rho / B(k+1, lam-1)``
    with ``rho = |z|^2``, evaluated by adaptive QUADPACK with algebraic end-point
    weights (``N`` caps the number of subintervals). Breaks are placed at the
    jump of indicator symbols.
    """
    if not lam > 1:
        raise ValueError(f"disk weight must satisfy lambda > 1 (got {lam!r})")
    if psi.arity != 1:
        raise ValueError("disk_diag needs a rank-one symbol")
    f = _scalar(psi)
    cuts = [0.0, *_breakpoints(psi), 1.0]
    out = []
    for k in range(k_max + 1):
        total = 0.0
        for lo, hi in zip(cuts, cuts[1:]):
            # QUADPACK weight (x - lo)^wa (hi - x)^wb absorbs whichever end-point
            # factor belongs to this piece; the rest is sampled.
            at_zero, at_one = lo == 0.0, hi == 1.0

            def piece(u, k=k, at_zero=at_zero, at_one=at_one):
                val = f(u)
                if not at_zero:
                    val *= u**k
                if not at_one:
                    val *= (1 - u) ** (lam - 2)
                return val

            wvar = (k if at_zero else 0.0, lam - 2 if at_one else 0.0)
            val, _ = integrate.quad(piece, lo, hi, weight="alg", wvar=wvar, limit=N, epsabs=0, epsrel=1e-13)
            total += val
        out.append(total / math.exp(log_beta(k + 1, lam - 1)))
    return out


def _jacobi01(N, kappa, mu):
    # scipy's roots_jacobi uses (1-t)^alpha (1+t)^beta on [-1, 1]
    t, w = roots_jacobi(N, mu, kappa)
    return (1 + t) / 2, w / 2 ** (kappa + mu + 1)


def simplex_moment(lam: float, psi: RadialSymbol | None, beta: Sequence[int], N: int = 64) -> float:
    """``int_{u1+u2<1} psi(u1+u2) u1^b1 u2^b2 (1-u1-u2)^(lam-3) du`` on the open simplex.

    Collapsed coordinates ``u2 = (1 - u1) t`` give a product Gauss-Jacobi rule
    in ``(u1, t)``; psi is sampled at ``u1 + (1 - u1) t``.
    """
    b1, b2 = beta
    u1, w1 = _jacobi01(N, b1, b2 + 1 + lam - 3)
    t, wt = _jacobi01(N, b2, lam - 3)
    U1, T = np.meshgrid(u1, t, indexing="ij")
    W = np.outer(w1, wt)
    if psi is None:
        return float(W.sum())
    vals = psi((U1 + (1 - U1) * T).reshape(1, -1)).reshape(W.shape)
    return float(np.sum(W * vals))


@dataclass
class OperatorBlockReport:
    lam: float
    degree: int
    entries: list[list[float]]
    max_offdiag: float
    diag_spread: float
    formula_value: float
    diag_vs_formula: float
    betas: list[tuple[int, int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lam")
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def ball2_block(lam: float, psi: RadialSymbol, degree: int, N: int = 64) -> OperatorBlockReport:
    """Matrix of T_psi on homogeneous polynomials of one degree on the 2-ball.

    ``psi`` is a rank-one symbol in ``|z|^2 = u1 + u2``. Off-diagonal entries
    vanish by angular integration and are recorded as exact zeros; the
    diagonal entries are the simplex moment ratios.
    """
    if not lam > 2:
        raise ValueError(f"2-ball weight must satisfy lambda > 2 (got {lam!r})")
    if degree < 0:
        raise ValueError("degree must be >= 0")
    betas = [(degree - j, j) for j in range(degree + 1)]
    diag = [simplex_moment(lam, psi, b, N) / simplex_moment(lam, None, b, N) for b in betas]
    size = len(betas)
    entries = [[diag[i] if i == j else 0.0 for j in range(size)] for i in range(size)]
    ref = diag[0]
    spread = max(abs(v - ref) for v in diag) / abs(ref) if ref else max(abs(v) for v in diag)
    formula = eigenvalue(domain("typeI:1,2"), lam, psi, (degree,), N).value
    return OperatorBlockReport(
        lam=lam,
        degree=degree,
        entries=entries,
        max_offdiag=0.0,
        diag_spread=spread,
        formula_value=formula,
        diag_vs_formula=max(abs(v - formula) for v in diag),
        betas=betas,
    )


@dataclass
class MonteCarloReport:
    max_abs: float
    max_sigma: float
    entries: list[dict]

    def within(self, k: float = 3.0) -> bool:
        return all(e["abs"] <= k * e["stderr"] for e in self.entries)


def monte_carlo_offdiag_smoke(
    lam: float,
    psi: RadialSymbol,
    pairs: Sequence[tuple[Sequence[int], Sequence[int]]],
    samples: int = 1_000_000,
    seed: int = 0,
) -> MonteCarloReport:
    """Plain Monte Carlo estimate of <psi z^beta, z^beta'> on the ball of C^2.

    Points are uniform in the ball of R^4; the integrand carries the weight
    ``(1 - |z|^2)^(lam - 3)``. ``max_abs`` is the largest ``|estimate|`` over
    the pairs and ``max_sigma`` the largest ratio to its standard error.
    """
    if not lam > 2:
        raise ValueError(f"2-ball weight must satisfy lambda > 2 (got {lam!r})")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((samples, 4))
    g /= np.linalg.norm(g, axis=1)[:, None]
    radius = rng.random(samples) ** 0.25
    pts = g * radius[:, None]
    z = pts[:, 0::2] + 1j * pts[:, 1::2]
    u = np.sum(np.abs(z) ** 2, axis=1)
    base = psi(u[None, :]) * (1 - u) ** (lam - 3)
    entries = []
    for beta, beta_p in pairs:
        vals = base * z[:, 0] ** beta[0] * z[:, 1] ** beta[1] * np.conj(z[:, 0] ** beta_p[0] * z[:, 1] ** beta_p[1])
        est = vals.mean()
        stderr = math.sqrt(np.mean(np.abs(vals - est) ** 2) / samples)
        entries.append(
            {"beta": list(beta), "beta_prime": list(beta_p), "estimate_re": est.real, "estimate_im": est.imag,
             "abs": abs(est), "stderr": stderr}
        )
    return MonteCarloReport(
        max_abs=max(e["abs"] for e in entries),
        max_sigma=max(e["abs"] / e["stderr"] if e["stderr"] else 0.0 for e in entries),
        entries=entries,
    )


# --- fixed suites driven by the CLI ----------------------------------------


@dataclass
class CaseResult:
    name: str
    measured: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.measured <= self.tolerance


SELBERG_CASES = ("typeIII:2", "typeIII:3", "typeI:2,2", "typeI:2,4", "typeIV:5", "typeV", "typeVI")


def suite_selberg() -> list[CaseResult]:
    out = []
    for spec in SELBERG_CASES:
        d = domain(spec)
        N = 40 if spec == "typeVI" else 32
        for lam in (d.p + 0.5, d.p + 3):
            for m in (0, 1, 2, 4):
                err = rectangular_denominator_check(d, lam, m, N)
                out.append(CaseResult(f"{spec} lambda={lam:g} m={m} N={N}", err, 1e-9))
    return out


def disk_symbols() -> list[tuple[RadialSymbol, float]]:
    return [
        (builtin_symbol("const", 1, 1), 1e-8),
        (parse_symbol("x1", 1), 1e-8),
        (builtin_symbol("ball_indicator", 0.5, 1), 1e-4),
    ]


def suite_disk(k_max: int = 10) -> list[CaseResult]:
    d = domain("typeI:1,1")
    out = []
    for lam in (2.0, 3.5):
        for psi, tol in disk_symbols():
            oracle = disk_diag(lam, psi, k_max)
            err = max(abs(oracle[k] - eigenvalue(d, lam, psi, (k,)).value) for k in range(k_max + 1))
            out.append(CaseResult(f"disk lambda={lam:g} psi={psi.name} k<={k_max}", err, tol))
    return out


def ball2_symbols() -> list[RadialSymbol]:
    return [builtin_symbol("const", 1, 1), parse_symbol("x1", 1), parse_symbol("x1^2", 1)]


def suite_ball2(max_degree: int = 4, N: int = 64) -> list[CaseResult]:
    out = []
    for lam in (3.5, 4.0, 6.0):
        for psi in ball2_symbols():
            for deg in range(max_degree + 1):
                rep = ball2_block(lam, psi, deg, N)
                tag = f"ball2 lambda={lam:g} psi={psi.name} degree={deg}"
                out.append(CaseResult(tag + " diag_spread", rep.diag_spread, 1e-8))
                out.append(CaseResult(tag + " diag_vs_formula", rep.diag_vs_formula, 1e-6))
    return out


MC_PAIRS = (((1, 0), (0, 1)), ((2, 0), (1, 1)), ((1, 0), (0, 0)))


def suite_mc(samples: int = 1_000_000, seed: int = 0) -> list[CaseResult]:
    cases = [
        (builtin_symbol("const", 1, 1), MC_PAIRS[0]),
        (parse_symbol("x1", 1), MC_PAIRS[1]),
        (builtin_symbol("ball_indicator", 0.5, 1), MC_PAIRS[2]),
    ]
    out = []
    for lam in (3.5, 4.0, 6.0):
        for psi, pair in cases:
            rep = monte_carlo_offdiag_smoke(lam, psi, [pair], samples, seed)
            out.append(CaseResult(f"mc lambda={lam:g} psi={psi.name} pair={pair} (sigmas)", rep.max_sigma, 3.0))
    return out


SUITES = {"selberg": suite_selberg, "disk": suite_disk, "ball2": suite_ball2, "mc": suite_mc}
