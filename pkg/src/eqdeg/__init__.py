"""Equivariant degree engine for reversible coupled delay networks."""

__version__ = "0.1.0"
