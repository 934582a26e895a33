"""Variational construction of the limit pair on [-R, R]."""
