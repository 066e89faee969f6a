"""Density-matrix exponentiation assisted by biomimetic cloning."""
