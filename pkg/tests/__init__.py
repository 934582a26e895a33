"""Tests for the profile solvers, diagnostics and command-line runs."""
