"""Eigenvalues c_alpha of radial Toeplitz operators on weighted Bergman spaces.

For a radial symbol psi the Toeplitz operator acts on the isotypic component
P^alpha as the scalar

    c_alpha = int psi(x) w_alpha(x) dx / int w_alpha(x) dx,
    w_alpha(x) = prod x_j^(alpha_j + b) prod (1 - x_j)^(lambda - p) prod_{j<k} |x_j - x_k|^a,

over the unit cube [0, 1)^r of squared radial coordinates. Only the ratio is
meaningful: the normalisation of the K-invariant vectors cancels.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .catalog import CartanDomain
from .quadrature import exact_order, pick_method, radial_density_integral
from .special import selberg_integral_log
from .symbol import RadialSymbol, SymbolError, check_symmetric

CSV_COLUMNS = ("family", "r", "a", "b", "n", "p", "lambda", "alpha", "symbol", "value", "nodes", "err_estimate")

DEFAULT_NODES = 48
NONPOLYNOMIAL_NODES = 96


class NumericalError(ArithmeticError):
    """A quadrature produced a non-finite or non-positive normalisation."""


@dataclass(frozen=True, order=False)
class MultiIndex:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(v) for v in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise ValueError("a signature needs at least one part")
        if parts[-1] < 0 or any(u < v for u, v in zip(parts, parts[1:])):
            raise ValueError(f"signature {parts} must be weakly decreasing and nonnegative")

    @classmethod
    def parse(cls, text: str) -> "MultiIndex":
        return cls(tuple(int(tok) for tok in text.split("-")))

    @property
    def r(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        return "-".join(map(str, self.parts))


def enumerate_signatures(r: int, alpha_max: int) -> list[MultiIndex]:
    """All signatures with parts <= alpha_max, by |alpha| then lexicographically descending."""
    if r < 1:
        raise ValueError(f"rank must be >= 1 (got {r})")
    if alpha_max < 0:
        raise ValueError(f"alpha_max must be >= 0 (got {alpha_max})")
    sigs = [
        tuple(reversed(c))
        for c in itertools.combinations_with_replacement(range(alpha_max + 1), r)
    ]
    sigs.sort(key=lambda s: (sum(s), tuple(-v for v in s)))
    return [MultiIndex(s) for s in sigs]


@dataclass(frozen=True)
class EigenvalueRecord:
    domain: CartanDomain
    lam: float
    alpha: MultiIndex
    value: float
    numerator: float
    denominator: float
    nodes: int
    err_estimate: float
    symbol_name: str

    def as_row(self) -> dict:
        d = self.domain
        return {
            "family": d.label,
            "r": d.r,
            "a": d.a,
            "b": d.b,
            "n": d.n,
            "p": d.p,
            "lambda": self.lam,
            "alpha": str(self.alpha),
            "symbol": self.symbol_name,
            "value": self.value,
            "nodes": self.nodes,
            "err_estimate": self.err_estimate,
        }


def default_nodes(psi: RadialSymbol | None) -> int:
    if psi is None or psi.is_polynomial:
        return DEFAULT_NODES
    return NONPOLYNOMIAL_NODES


def _validate(d: CartanDomain, lam: float, psi: RadialSymbol) -> None:
    d.check_weight(lam)
    if psi.arity != d.r:
        raise SymbolError(f"symbol {psi.name!r} has arity {psi.arity}, domain {d.label} has rank {d.r}")
    if not check_symmetric(psi):
        raise SymbolError(f"symbol {psi.name!r} is not symmetric in x1..x{d.r}")


def _ratio(d, lam, psi, alpha, N, method):
    num = radial_density_integral(d, lam, alpha, psi, N, method)
    den = radial_density_integral(d, lam, alpha, None, N, method)
    if not (math.isfinite(num) and math.isfinite(den)) or den <= 0:
        raise NumericalError(f"quadrature failed for alpha={alpha} (numerator={num}, denominator={den})")
    return num, den


def _eigenvalue(d, lam, psi, alpha, N, method):
    num, den = _ratio(d, lam, psi, alpha, N, method)
    fine_num, fine_den = _ratio(d, lam, psi, alpha, math.ceil(3 * N / 2), method)
    value = num / den
    return EigenvalueRecord(d, lam, alpha, value, num, den, N, abs(fine_num / fine_den - value), psi.name)


def eigenvalue(
    d: CartanDomain,
    lam: float,
    psi: RadialSymbol,
    alpha: MultiIndex | Sequence[int],
    N: int | None = None,
    method: str = "auto",
) -> EigenvalueRecord:
    """c_alpha(T_psi) at weight ``lam`` with a one-step refinement error estimate."""
    _validate(d, lam, psi)
    if not isinstance(alpha, MultiIndex):
        alpha = MultiIndex(tuple(alpha))
    if alpha.r != d.r:
        raise ValueError(f"signature {alpha} has length {alpha.r}, domain rank is {d.r}")
    return _eigenvalue(d, lam, psi, alpha, N or default_nodes(psi), method)


def eigenvalue_table(
    d: CartanDomain,
    lam: float,
    psi: RadialSymbol,
    alpha_max: int,
    N: int | None = None,
    threads: int = 1,
    method: str = "auto",
) -> list[EigenvalueRecord]:
    """One record per signature with parts <= alpha_max, in enumeration order."""
    _validate(d, lam, psi)
    N = N or default_nodes(psi)
    sigs = enumerate_signatures(d.r, alpha_max)
    if threads <= 1:
        return [_eigenvalue(d, lam, psi, s, N, method) for s in sigs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda s: _eigenvalue(d, lam, psi, s, N, method), sigs))


def required_nodes(d: CartanDomain, alpha: Sequence[int], degree: int, method: str = "auto") -> int:
    """Node count at which a degree-``degree`` polynomial symbol is integrated exactly."""
    if method == "auto":
        method = pick_method(d.r, d.a)
    return exact_order(d.r, d.a, [v + d.b for v in alpha], degree, method)


def rectangular_denominator_check(d: CartanDomain, lam: float, m: int, N: int = 32, method: str = "auto") -> float:
    """Relative deviation of the alpha = (m, ..., m) density integral from the Selberg closed form."""
    quad = radial_density_integral(d, lam, (m,) * d.r, None, N, method)
    closed = selberg_integral_log(d.r, m + d.b + 1, lam - d.p + 1, d.a / 2)
    if not quad > 0:
        return math.inf
    # |quad / closed - 1| without forming the (possibly tiny) closed form itself
    return abs(math.expm1(math.log(quad) - closed))


def rectangular_ratio(d: CartanDomain, lam: float, m: int, s: float) -> float:
    """Closed-form c_alpha for psi = prod x_j^s and alpha = (m, ..., m)."""
    upper = selberg_integral_log(d.r, m + d.b + s + 1, lam - d.p + 1, d.a / 2)
    lower = selberg_integral_log(d.r, m + d.b + 1, lam - d.p + 1, d.a / 2)
    return math.exp(upper - lower)


def format_number(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return "%.17g" % float(v)


def records_to_csv(records: Iterable[EigenvalueRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        row = rec.as_row()
        writer.writerow([row[c] if isinstance(row[c], str) else format_number(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def records_to_json(records: Iterable[EigenvalueRecord]) -> str:
    return json.dumps([rec.as_row() for rec in records], indent=2) + "\n"
