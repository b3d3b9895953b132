"""Numeric invariants of the irreducible bounded symmetric domains.

Only the integer fingerprint (rank, multiplicities, dimensions, genus) is
modelled here; everything downstream is expressed in terms of ``(r, a, b)``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field


class DomainError(ValueError):
    """Raised for domain specifications that violate a family constraint."""


class Family(enum.Enum):
    I = "typeI"
    II = "typeII"
    III = "typeIII"
    IV = "typeIV"
    V = "typeV"
    VI = "typeVI"
    CUSTOM = "custom"


# number of integer parameters each family takes
_ARITY = {
    Family.I: 2,
    Family.II: 1,
    Family.III: 1,
    Family.IV: 1,
    Family.V: 0,
    Family.VI: 0,
    Family.CUSTOM: 3,
}

# Values that appear in some published tables but contradict
# n = r + r(r-1)a/2 + rb and p = 2 + (r-1)a + b.
ERRATA = {
    Family.IV: "type IV is often tabulated with a = n-1; the dimension identity "
    "with r = 2, b = 0 forces a = n-2 (genus p = n is unaffected)",
    Family.VI: "type VI is often tabulated with p = 26; both genus identities give "
    "p = 2 + 2*8 + 0 = (27 + 27)/3 = 18",
}


@dataclass(frozen=True)
class DomainSpec:
    family: Family
    params: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(int(v) for v in self.params))
        expected = _ARITY[self.family]
        if len(self.params) != expected:
            raise DomainError(
                f"{self.family.value} takes {expected} integer parameter(s), "
                f"got {len(self.params)}"
            )
        _check_constraints(self.family, self.params)

    def __str__(self):
        if not self.params:
            return self.family.value
        return f"{self.family.value}:{','.join(map(str, self.params))}"


def _check_constraints(family: Family, params: tuple[int, ...]) -> None:
    if family is Family.I:
        m, n = params
        if not 1 <= m <= n:
            raise DomainError(f"typeI:m,n requires 1 <= m <= n (got m={m}, n={n})")
    elif family is Family.II:
        (m,) = params
        if m < 2:
            raise DomainError(f"typeII:m requires m >= 2 (got m={m})")
    elif family is Family.III:
        (n,) = params
        if n < 1:
            raise DomainError(f"typeIII:n requires n >= 1 (got n={n})")
    elif family is Family.IV:
        (n,) = params
        if n < 3:
            raise DomainError(f"typeIV:n requires n >= 3 (got n={n})")
    elif family is Family.CUSTOM:
        r, a, b = params
        if r < 1:
            raise DomainError(f"custom:r,a,b requires r >= 1 (got r={r})")
        if a < 1:
            raise DomainError(f"custom:r,a,b requires a >= 1 (got a={a})")
        if b < 0:
            raise DomainError(f"custom:r,a,b requires b >= 0 (got b={b})")


_SPEC_RE = re.compile(r"^(typeI|typeII|typeIII|typeIV|typeV|typeVI|custom)(?::([0-9,]*))?$", re.I)


def parse_domain(text: str) -> DomainSpec:
    """Parse ``typeI:m,n``, ``typeII:m``, ..., ``custom:r,a,b`` (case-insensitive)."""
    match = _SPEC_RE.match(text.strip())
    if match is None:
        raise DomainError(f"unrecognised domain spec {text!r}")
    name = match.group(1).lower()
    family = next(f for f in Family if f.value.lower() == name)
    raw = match.group(2)
    if raw is None or raw == "":
        params: tuple[int, ...] = ()
    else:
        try:
            params = tuple(int(tok) for tok in raw.split(","))
        except ValueError:
            raise DomainError(f"malformed parameter list in {text!r}") from None
    return DomainSpec(family, params)


@dataclass(frozen=True)
class CartanDomain:
    spec: DomainSpec
    r: int
    a: int
    b: int
    n: int
    n_tube: int
    p: int
    formal: bool = False
    errata: tuple[str, ...] = field(default=(), compare=False)

    @property
    def tube_type(self) -> bool:
        return self.b == 0

    @property
    def label(self) -> str:
        return str(self.spec)

    def check_weight(self, lam: float) -> None:
        """Reject weights outside the admissible range ``lam > p - 1``."""
        if not lam > self.p - 1:
            raise DomainError(
                f"weight lambda={lam!r} must satisfy lambda > p - 1 = {self.p - 1} for {self.label}"
            )


def _family_triple(spec: DomainSpec) -> tuple[int, int, int]:
    f, ps = spec.family, spec.params
    if f is Family.I:
        m, n = ps
        return m, 2, n - m
    if f is Family.II:
        k, eps = divmod(ps[0], 2)
        return k, 4, 2 * eps
    if f is Family.III:
        return ps[0], 1, 0
    if f is Family.IV:
        return 2, ps[0] - 2, 0
    if f is Family.V:
        return 2, 6, 4
    if f is Family.VI:
        return 3, 8, 0
    return ps


def realized_by(r: int, a: int, b: int) -> DomainSpec | None:
    """Return a catalog family with invariants ``(r, a, b)``, or None if purely formal."""
    if r == 1:
        return DomainSpec(Family.I, (1, 1 + b))
    if a == 1 and b == 0:
        return DomainSpec(Family.III, (r,))
    if a == 2:
        return DomainSpec(Family.I, (r, r + b))
    if a == 4 and b in (0, 2):
        return DomainSpec(Family.II, (2 * r + b // 2,))
    if r == 2 and b == 0:
        return DomainSpec(Family.IV, (a + 2,))
    if (r, a, b) == (2, 6, 4):
        return DomainSpec(Family.V)
    if (r, a, b) == (3, 8, 0):
        return DomainSpec(Family.VI)
    return None


def build_domain(spec: DomainSpec | str) -> CartanDomain:
    """Compute ``(r, a, b, n, n_tube, p)`` for a domain spec.

    ``n``, ``n_tube`` and ``p`` are always derived from ``(r, a, b)``.
    Rank-one domains carry ``a = 1``: the multiplicity is vacuous there.
    """
    if isinstance(spec, str):
        spec = parse_domain(spec)
    r, a, b = _family_triple(spec)
    if r == 1:
        a = 1
    n_tube = r + r * (r - 1) * a // 2
    n = n_tube + r * b
    p = 2 + (r - 1) * a + b
    # (n + n_tube)/r == p is an integer identity for every (r, a, b)
    assert (n + n_tube) == p * r
    formal = spec.family is Family.CUSTOM and realized_by(r, a, b) is None
    errata = (ERRATA[spec.family],) if spec.family in ERRATA else ()
    return CartanDomain(spec, r, a, b, n, n_tube, p, formal=formal, errata=errata)


def domain(text: str) -> CartanDomain:
    return build_domain(parse_domain(text))
