"""Numerical helpers shared by target spaces and form oracles."""
