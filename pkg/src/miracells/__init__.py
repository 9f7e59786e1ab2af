"""Mirabolic RSK, the Hecke bimodule on colored permutations, and finite-field oracles."""

__version__ = "0.1.0"
