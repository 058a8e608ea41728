"""Exact Gaussian calculus and verification tools for the twisted-convolution
algebra of phase space, with a quadrature grid engine, matrix units, spectral
decompositions and a truncated number-basis representation."""

__version__ = "1.0.0"
