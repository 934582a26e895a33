"""Constrained Λ-penalized two-component system and its blow-up at the interface."""
