"""Genus expansions, map counting and criticality for Hermitian one-matrix models."""

__version__ = '0.3.0'
