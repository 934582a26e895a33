"""Synthetic profiles and reference solvers for tests."""
