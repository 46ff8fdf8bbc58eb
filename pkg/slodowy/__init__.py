"""Slodowy stages: exact Hamiltonian reduction by stages for finite W-algebras in type A."""

__version__ = "0.1.0"
