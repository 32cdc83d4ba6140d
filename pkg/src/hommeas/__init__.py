"""Logical Pauli measurement gadgets for CSS codes built from mapping cones."""

__version__ = "0.1.0"
