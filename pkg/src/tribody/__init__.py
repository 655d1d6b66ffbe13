"""Exact tools for radial three-body operators: operators, charts, spectra, Lie realizations and geometry."""
__version__ = "0.1.0"
