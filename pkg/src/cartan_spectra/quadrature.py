"""Gauss-Jacobi rules on [0, 1] and the r-dimensional radial density integral.

The density integrated over the unit cube is

    prod_j x_j^(kappa_j) (1 - x_j)^mu  prod_{j<k} |x_j - x_k|^a

with ``kappa_j = alpha_j + b`` and ``mu = lambda - p``. Two exact schemes are
available:

``tensor``
    Product of per-axis Jacobi rules carrying ``x^kappa_j (1-x)^mu``; the
    Vandermonde power is sampled at the nodes. Exact for polynomial symbols
    when ``a`` is even.
``chamber``
    Integrates over the ordered chamber ``y_1 < ... < y_r`` with the nested
    substitution ``y_k = y_1 + (1 - y_1) t_k``, which turns every Vandermonde
    factor and every ``(1-y)^mu`` into a Jacobi weight of one level. Exact for
    polynomial symbols for any integer ``a``; required when ``a`` is odd since
    ``|x_j - x_k|^a`` then has a kink on the diagonals.
"""

from __future__ import annotations

import itertools
import logging
import math
import threading
from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .catalog import CartanDomain
from .special import log_beta

log = logging.getLogger(__name__)

MAX_TENSOR_RANK = 6


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    kappa: float
    mu: float

    @property
    def order(self) -> int:
        return len(self.nodes)

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def _jacobi_rule(N, kappa, mu):
    # Monic recurrence for Jacobi polynomials on [-1, 1] with weight
    # (1-t)^A (1+t)^B, A = mu, B = kappa; then t -> x = (1+t)/2.
    A, B = float(mu), float(kappa)
    k = np.arange(N, dtype=float)
    s = 2 * k + A + B
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = (B * B - A * A) / (s * (s + 2))
    # k = 0 is 0/0 when A + B = 0
    diag[0] = (B - A) / (A + B + 2)
    k1 = k[1:]
    s1 = 2 * k1 + A + B
    with np.errstate(divide="ignore", invalid="ignore"):
        off2 = 4 * k1 * (k1 + A) * (k1 + B) * (k1 + A + B) / (s1 * s1 * (s1 + 1) * (s1 - 1))
    # k = 1 with A + B = -1 makes (s1 - 1) vanish together with (k1 + A + B)
    if N > 1 and abs(A + B + 1) < 1e-14:
        off2[0] = 4 * (1 + A) * (1 + B) / ((2 + A + B) ** 2 * (3 + A + B))
    off = np.sqrt(off2)
    t, vecs = eigh_tridiagonal(diag, off)
    mass = math.exp(log_beta(kappa + 1, mu + 1))
    w = mass * vecs[0] ** 2
    x = (1 + t) / 2
    order = np.argsort(x)
    return x[order], w[order] / w.sum() * mass


_RULES: dict[tuple[int, float, float], QuadratureRule] = {}
_RULES_LOCK = threading.Lock()


def jacobi_rule(N: int, kappa: float, mu: float) -> QuadratureRule:
    """N-point Gauss rule on (0, 1) for the weight ``x^kappa (1-x)^mu``.

    Golub-Welsch on the shifted Jacobi recurrence; exact for polynomials of
    degree ``<= 2N - 1``. Rules are cached by ``(N, kappa, mu)``.
    """
    if int(N) != N or N < 1:
        raise ValueError(f"rule order must be a positive integer (got {N!r})")
    if not (kappa > -1 and mu > -1):
        raise ValueError(f"Jacobi exponents must exceed -1 (got kappa={kappa!r}, mu={mu!r})")
    key = (int(N), float(kappa), float(mu))
    with _RULES_LOCK:
        rule = _RULES.get(key)
        if rule is None:
            x, w = _jacobi_rule(*key)
            x.setflags(write=False)
            w.setflags(write=False)
            rule = _RULES[key] = QuadratureRule(x, w, key[1], key[2])
    return rule


@dataclass(frozen=True, eq=False)
class TensorGrid:
    axes: tuple[QuadratureRule, ...]

    @property
    def r(self) -> int:
        return len(self.axes)

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(x, w)`` with ``x`` of shape ``(r, M)`` and ``w`` of shape ``(M,)``."""
        grids = np.meshgrid(*(ax.nodes for ax in self.axes), indexing="ij")
        wgrids = np.meshgrid(*(ax.weights for ax in self.axes), indexing="ij")
        x = np.stack([g.ravel() for g in grids])
        w = np.prod(np.stack([g.ravel() for g in wgrids]), axis=0)
        return x, w


def tensor_grid(N: int, kappas, mu: float) -> TensorGrid:
    return TensorGrid(tuple(jacobi_rule(N, k, mu) for k in kappas))


def vandermonde_power(x: np.ndarray, a: float) -> np.ndarray:
    out = np.ones(x.shape[1:])
    for j, k in itertools.combinations(range(x.shape[0]), 2):
        out = out * np.abs(x[j] - x[k]) ** a
    return out


_CHAMBERS: dict[tuple, tuple[np.ndarray, np.ndarray]] = {}
_CHAMBERS_LOCK = threading.Lock()


def _chamber(r, nu, mu, a, N):
    # Nodes/weights for int_{0<y_1<...<y_r<1} g(y) prod y^nu (1-y)^mu prod_{j<k} (y_k-y_j)^a.
    if r == 1:
        rule = jacobi_rule(N, nu, mu)
        return rule.nodes[None, :], np.asarray(rule.weights)
    expo = r * mu + (r - 1) * (a + 1) + a * (r - 1) * (r - 2) / 2
    outer = jacobi_rule(N, nu, expo)
    inner_x, inner_w = chamber_points(r - 1, a, mu, a, N)
    y = outer.nodes[:, None, None]
    rest = y + (1 - y) * inner_x[None]  # (N, r-1, M)
    w = outer.weights[:, None] * inner_w[None, :]
    if nu:
        w = w * np.prod(rest**nu, axis=1)
    lowest = np.broadcast_to(y, (N, 1, inner_x.shape[1]))
    pts = np.concatenate([lowest, rest], axis=1).transpose(1, 0, 2).reshape(r, -1)
    return pts, w.ravel()


def chamber_points(r: int, nu: float, mu: float, a: int, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Cached nested rule on the ordered chamber (see module docstring)."""
    key = (int(r), float(nu), float(mu), int(a), int(N))
    with _CHAMBERS_LOCK:
        hit = _CHAMBERS.get(key)
    if hit is None:
        pts, w = _chamber(*key)
        pts.setflags(write=False)
        w.setflags(write=False)
        with _CHAMBERS_LOCK:
            hit = _CHAMBERS.setdefault(key, (pts, w))
    return hit


def _symmetrized_monomial(y, exponents):
    # sum over all r! assignments sigma of prod_j y_sigma(j)^e_j
    counts = Counter(exponents)
    mult = math.prod(math.factorial(c) for c in counts.values())
    out = np.zeros(y.shape[1:])
    for perm in set(itertools.permutations(exponents)):
        term = np.ones(y.shape[1:])
        for row, e in zip(y, perm):
            if e:
                term = term * row**e
        out = out + term
    return mult * out


def _integrate_tensor(g, kappas, mu, a, N):
    x, w = tensor_grid(N, kappas, mu).points()
    vals = g(x)
    if len(kappas) > 1:
        vals = vals * vandermonde_power(x, a)
    return float(np.dot(w, vals))


def _integrate_chamber(g, kappas, mu, a, N):
    nu = min(kappas)
    y, w = chamber_points(len(kappas), nu, mu, a, N)
    vals = g(y) * _symmetrized_monomial(y, [k - nu for k in kappas])
    return float(np.dot(w, vals))


def pick_method(r: int, a: int) -> str:
    return "tensor" if r == 1 or a % 2 == 0 else "chamber"


def density_integral(
    r: int,
    a: int,
    kappas,
    mu: float,
    psi=None,
    N: int = 32,
    method: str = "auto",
) -> float:
    """Integrate ``psi(x) prod x^kappa_j (1-x)^mu |Vandermonde|^a`` over ``[0,1]^r``.

    ``kappas`` may be in any order. ``psi`` is a callable on arrays of shape
    ``(r, M)`` or None for the bare density. Symbols with ``support = c < 1``
    are integrated over ``[0, c]^r`` after rescaling.
    """
    kappas = [int(k) if float(k).is_integer() else float(k) for k in kappas]
    if len(kappas) != r:
        raise ValueError(f"expected {r} exponents, got {len(kappas)}")
    if r > 1 and int(a) != a:
        raise ValueError(f"multiplicity a must be an integer (got {a!r})")
    if not mu > -1:
        raise ValueError(f"mu = lambda - p must exceed -1 (got {mu!r})")
    if method == "auto":
        method = pick_method(r, int(a))
    if method == "chamber" and any(not float(k).is_integer() for k in kappas):
        raise ValueError("chamber quadrature needs integer axis exponents")
    if method not in ("tensor", "chamber"):
        raise ValueError(f"unknown quadrature method {method!r}")
    if r > MAX_TENSOR_RANK:
        log.warning("rank %d: quadrature uses %d^%d nodes", r, N, r)
    integrate = _integrate_tensor if method == "tensor" else _integrate_chamber

    support = getattr(psi, "support", 1.0) if psi is not None else 1.0
    if support >= 1.0:
        g = (lambda x: np.ones(x.shape[1:])) if psi is None else psi
        return integrate(g, kappas, mu, int(a), N)
    if support <= 0.0:
        return 0.0

    # substitute x = c s on [0, c]^r; (1 - c s)^mu is smooth there
    c = float(support)

    def scaled(s):
        x = c * s
        return psi(x) * np.prod((1 - x) ** mu, axis=0)

    scale = c ** (sum(kappas) + r + a * r * (r - 1) / 2)
    return scale * integrate(scaled, kappas, 0.0, int(a), N)


def radial_density_integral(d: CartanDomain, lam: float, alpha, psi=None, N: int = 32, method: str = "auto") -> float:
    """Integral of ``psi`` against the radial density of signature ``alpha``.

    ``alpha`` gives one exponent per axis (``x_j^(alpha_j + b)``); it need not
    be ordered, so permuted signatures can be passed.
    """
    d.check_weight(lam)
    alpha = tuple(int(v) for v in alpha)
    if len(alpha) != d.r:
        raise ValueError(f"signature {alpha} has length {len(alpha)}, domain rank is {d.r}")
    if any(v < 0 for v in alpha):
        raise ValueError(f"signature entries must be nonnegative (got {alpha})")
    if psi is not None and getattr(psi, "arity", d.r) != d.r:
        raise ValueError(f"symbol arity {psi.arity} does not match rank {d.r}")
    return density_integral(d.r, d.a, [v + d.b for v in alpha], lam - d.p, psi, N, method)


def exact_order(r: int, a: int, kappas, degree: int, method: str) -> int:
    """Smallest N for which the scheme integrates a degree-``degree`` symbol exactly."""
    if method == "tensor" or r == 1:
        top = degree + a * (r - 1)
    else:
        top = degree + sum(kappas) - r * min(kappas) + a * r * (r - 1) // 2
    return max(1, math.ceil((top + 1) / 2))
