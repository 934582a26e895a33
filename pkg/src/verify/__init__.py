"""Numerical certification of the qualitative properties of computed profiles."""
