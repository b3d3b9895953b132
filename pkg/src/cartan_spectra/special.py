"""Gamma-family scalars and closed-form Beta/Selberg integrals, all in log space."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .catalog import CartanDomain


def log_gamma(x: float) -> float:
    """Natural log of the Gamma function for ``x > 0``."""
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0 (got {x!r})")
    return math.lgamma(x)


def log_beta(a: float, b: float) -> float:
    """ln B(a, b) for a, b > 0."""
    if not (a > 0 and b > 0):
        raise ValueError(f"log_beta requires a, b > 0 (got a={a!r}, b={b!r})")
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


@dataclass(frozen=True)
class GammaProductConstant:
    value_log: float
    lam: float
    domain: CartanDomain

    @property
    def value(self) -> float:
        return math.exp(self.value_log)


def weighted_volume_constant(d: CartanDomain, lam: float) -> GammaProductConstant:
    """Normalising constant of the weighted measure ``h(z,z)^(lam-p) dz``.

    Returns ``log`` of ``pi^-n * prod_j Gamma(lam - (j-1)a/2) / Gamma(lam - n/r - (j-1)a/2)``,
    so that the weighted measure has total mass one. At ``lam = p`` this is the
    normalised Lebesgue measure.
    """
    d.check_weight(lam)
    total = -d.n * math.log(math.pi)
    for j in range(d.r):
        shift = j * d.a / 2
        total += log_gamma(lam - shift) - log_gamma(lam - d.n / d.r - shift)
    return GammaProductConstant(total, lam, d)


def selberg_integral_log(r: int, alpha0: float, beta0: float, gamma0: float) -> float:
    """ln of the Selberg integral

        S_r = int_[0,1]^r prod x_j^(alpha0-1) (1-x_j)^(beta0-1) prod_{j<k} |x_j-x_k|^(2 gamma0) dx.
    """
    if r < 1:
        raise ValueError(f"selberg_integral_log requires r >= 1 (got {r})")
    if not (alpha0 > 0 and beta0 > 0):
        raise ValueError(f"selberg_integral_log requires alpha0, beta0 > 0 (got {alpha0!r}, {beta0!r})")
    if gamma0 < 0:
        raise ValueError(f"selberg_integral_log requires gamma0 >= 0 (got {gamma0!r})")
    if not alpha0 + beta0 + (r - 1) * gamma0 > 0:
        raise ValueError("selberg_integral_log requires alpha0 + beta0 + (r-1) gamma0 > 0")
    total = 0.0
    for j in range(r):
        total += (
            math.lgamma(alpha0 + j * gamma0)
            + math.lgamma(beta0 + j * gamma0)
            + math.lgamma(1 + (j + 1) * gamma0)
            - math.lgamma(alpha0 + beta0 + (r + j - 1) * gamma0)
            - math.lgamma(1 + gamma0)
        )
    return total
