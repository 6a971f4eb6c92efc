"""Goodness of nilpotent elements in classical Lie algebras via Slodowy slices."""

__version__ = "0.1.0"
