"""Twisted Cuntz-Toeplitz algebras: exact normal forms, truncated Fock models, quotients and K-theory."""
from .coeff import ConfigError, DeformVars, DomainError, Mode, PhaseCoeff
from .parser import ParseError, parse_expr
from .symalg import AlgebraConfig, Element, ModeError, Monomial, normal_order

__all__ = [
    "AlgebraConfig",
    "ConfigError",
    "DeformVars",
    "DomainError",
    "Element",
    "Mode",
    "ModeError",
    "Monomial",
    "ParseError",
    "PhaseCoeff",
    "normal_order",
    "parse_expr",
]

__version__ = "0.1.0"
