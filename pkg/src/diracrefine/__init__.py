"""Dirac bound states under spin and pseudo-spin symmetry, with refined comparison theorems."""
