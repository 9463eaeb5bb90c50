"""Perturbative and resonant spectra of anharmonic oscillators of degree m >= 3."""

__version__ = "0.1.0"
