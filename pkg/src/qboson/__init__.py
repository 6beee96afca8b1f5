"""Quantum boson algebras, PBW bases and their semiclassical Poisson limits."""
__version__ = "0.1.0"
