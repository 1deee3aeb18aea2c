"""Scattering theory for Lindbladians and dissipative Hamiltonians on
finite lattices."""

__version__ = "0.1.0"
