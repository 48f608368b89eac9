"""Computations for the Z/p-equivariant dual Steenrod algebra at odd primes."""

from .grading import RDegree, dims

__version__ = "0.1.0"

__all__ = ["RDegree", "dims", "__version__"]
