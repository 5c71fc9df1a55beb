"""Recursive-Fourier-transform evaluation of time-dependent perturbation theory."""

__version__ = "0.1.0"
