"""Spectra of radial Toeplitz operators on weighted Bergman spaces of bounded symmetric domains."""

from .catalog import CartanDomain, DomainError, DomainSpec, Family, build_domain, domain, parse_domain
from .spectrum import (
    EigenvalueRecord,
    MultiIndex,
    NumericalError,
    eigenvalue,
    eigenvalue_table,
    enumerate_signatures,
    rectangular_denominator_check,
)
from .symbol import RadialSymbol, SymbolError, builtin_symbol, check_symmetric, parse_symbol

__all__ = [
    "CartanDomain",
    "DomainError",
    "DomainSpec",
    "EigenvalueRecord",
    "Family",
    "MultiIndex",
    "NumericalError",
    "RadialSymbol",
    "SymbolError",
    "build_domain",
    "builtin_symbol",
    "check_symmetric",
    "domain",
    "eigenvalue",
    "eigenvalue_table",
    "enumerate_signatures",
    "parse_domain",
    "parse_symbol",
    "rectangular_denominator_check",
]
