"""Ingestor package."""
from .profile_reader import read_pair

__all__ = ["read_pair"]
