"""Workbench for modalized Heyting calculi: derivation checking, finite
countermodels, the doubling construction, translations and the assertoric
transformation of E-derivations."""

__version__ = "0.1.0"
