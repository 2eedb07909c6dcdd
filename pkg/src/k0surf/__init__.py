"""Numerical K-theory of the degree-1 del Pezzo surface and the Godeaux
surface: Euler pairing, semiorthonormal sequences, unextendability
certificates, A8 root transfer and graded-ideal section counts."""

__version__ = "0.1.0"
