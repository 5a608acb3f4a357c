"""Pseudospectral simulation and verification harness for the
three-component Degasperis-Procesi system."""

__version__ = "0.1.0"
